#pragma once

#include "stirap/core/types.hpp"
#include "stirap/pulses/envelope.hpp"
#include "stirap/pulses/phase.hpp"

#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace stirap::pulses {

/// envelope(t) * cos(carrier * t + phi(t)) driving one transition.
struct DriveTone {
    Envelope envelope;
    double carrier = 0.0;
    std::optional<PhaseModulation> phase_mod;
    std::pair<std::string, std::string> transition;

    DriveTone(Envelope env, double carrier_freq, std::pair<std::string, std::string> link,
              std::optional<PhaseModulation> phase = std::nullopt)
        : envelope(std::move(env)), carrier(carrier_freq), phase_mod(std::move(phase)), transition(std::move(link)) {
        if (!(carrier >= 0.0)) throw ParameterError("DriveTone: carrier frequency must be nonnegative");
    }

    double phase(double t) const { return phase_mod ? phase_mod->phase(t) : 0.0; }

    /// Instantaneous real field value.
    double field(double t) const { return envelope(t) * std::cos(carrier * t + phase(t)); }
};

struct DetuningPair {
    Envelope stokes;
    Envelope pump;
};

/// Stokes detuning as a tanh pair of height h_delta * Omega0; pump detuning kappa_delta times it.
inline DetuningPair cstirap_detunings(double omega0, double h_delta, double kappa_delta, double tau,
                                      double tau_ch) {
    if (!(tau_ch > 0.0)) throw ParameterError("cstirap_detunings: tau_ch must be positive");
    Envelope stokes(TanhPair{h_delta * omega0, tau, tau_ch});
    return {stokes, stokes.scaled(kappa_delta)};
}

/// Drive tones plus named detuning functions ("delta_p", "delta_s", "delta", "delta2").
class ControlSchedule {
public:
    ControlSchedule() = default;

    void add_tone(DriveTone tone) { tones_.push_back(std::move(tone)); }

    void set_detuning(const std::string& name, RealFunction f) { detunings_[name] = std::move(f); }

    /// Sets delta_p, delta_s and their difference delta = delta_p - delta_s together.
    void set_single_photon_detunings(RealFunction delta_p, RealFunction delta_s, double two_photon_offset = 0.0) {
        detunings_["delta"] = [dp = delta_p, ds = delta_s, two_photon_offset](double t) {
            return dp(t) - ds(t) + two_photon_offset;
        };
        detunings_["delta_p"] = std::move(delta_p);
        detunings_["delta_s"] = std::move(delta_s);
        offset_ = two_photon_offset;
    }

    const std::vector<DriveTone>& tones() const { return tones_; }

    bool has_detuning(const std::string& name) const { return detunings_.contains(name); }

    double detuning(const std::string& name, double t) const {
        auto it = detunings_.find(name);
        return it == detunings_.end() ? 0.0 : it->second(t);
    }

    RealFunction detuning_function(const std::string& name) const {
        auto it = detunings_.find(name);
        if (it == detunings_.end()) return [](double) { return 0.0; };
        return it->second;
    }

    /// Static deviation deliberately added to delta on top of delta_p - delta_s.
    double two_photon_offset() const { return offset_; }

    /// Checks delta = delta_p - delta_s (+ offset) on the given sample times.
    void validate(const std::vector<double>& samples, double tol = 1e-12) const {
        if (!(has_detuning("delta") && has_detuning("delta_p") && has_detuning("delta_s"))) return;
        for (double t : samples) {
            const double lhs = detuning("delta", t);
            const double rhs = detuning("delta_p", t) - detuning("delta_s", t) + offset_;
            if (std::abs(lhs - rhs) > tol * std::max(1.0, std::abs(lhs))) {
                std::ostringstream os;
                os << "ControlSchedule: delta != delta_p - delta_s at t = " << t << " (" << lhs << " vs " << rhs
                   << ")";
                throw ContractViolation(os.str());
            }
        }
    }

private:
    std::vector<DriveTone> tones_;
    std::map<std::string, RealFunction> detunings_;
    double offset_ = 0.0;
};

}  // namespace stirap::pulses
