#pragma once

#include "stirap/core/report.hpp"
#include "stirap/lambda/lambda_system.hpp"
#include "stirap/pulses/envelope.hpp"
#include "stirap/pulses/schedule.hpp"

#include <cmath>
#include <memory>
#include <variant>

namespace stirap::lambda {

using pulses::Envelope;
using pulses::PulseOrder;

enum class AlwaysOn { P1, P2 };

struct StandardFamily {};

struct TwoPlusOneFamily {
    double omega_p1 = 1.0;  // peak of pump leg 0-1
    double omega_p2 = 1.0;  // peak of pump leg 1-2
    double delta2 = 5.0;
    AlwaysOn always_on = AlwaysOn::P2;
    /// Stokes peak set equal to the effective pump peak.
    bool match_peaks = true;
    double stokes_amplitude = 0.0;  // used when match_peaks is off
    bool compensate = true;
    /// Coarse-graining bin; 0 picks 10/delta2.
    double coarse_window = 0.0;
    std::size_t samples_per_bin = 10;

    double effective_peak() const { return std::abs(omega_p1 * omega_p2 / (2.0 * delta2)); }
    double stokes_peak() const { return match_peaks ? effective_peak() : stokes_amplitude; }
    double bin() const { return coarse_window > 0.0 ? coarse_window : 10.0 / std::abs(delta2); }
};

struct CStirapFamily {
    double h_delta = 10.0;
    double kappa_delta = 1.2;
    double tau_ch = 0.0;  // 0 picks 0.6 T
    double t_c = 0.0;     // pump center
};

struct StirapConfig {
    double omega0 = 1.0;
    double kappa_p = 1.0;
    double T = 20.0;
    double tau = 12.0;
    double delta = 0.0;    // static two-photon detuning (offset for c-STIRAP)
    double delta_p = 0.0;  // static single-photon detuning of the pump
    PulseOrder order = PulseOrder::Counterintuitive;
    bool time_reversed = false;
    double t_max = 0.0;  // 0 picks 3 T + tau
    std::size_t points = 2000;
    PropagationOptions propagation{};
    std::variant<StandardFamily, TwoPlusOneFamily, CStirapFamily> family;

    double window() const { return t_max > 0.0 ? t_max : 3.0 * T + tau; }

    std::string family_name() const {
        switch (family.index()) {
            case 0: return "stirap";
            case 1: return "stirap_2plus1";
            default: return "cstirap";
        }
    }

    void check() const {
        if (!(T > 0.0)) throw ParameterError("StirapConfig: T must be positive");
        if (points < 2) throw ParameterError("StirapConfig: need at least 2 output points");
        if (!(window() > 0.0)) throw ParameterError("StirapConfig: empty time window");
    }
};

namespace detail {

inline Envelope maybe_reversed(const Envelope& e, bool rev) { return rev ? e.reversed() : e; }

inline QuantumState start_state(bool reversed, const std::string& forward, const std::string& backward) {
    return QuantumState::basis_state(lambda_basis(), reversed ? backward : forward);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Standard STIRAP

inline ProtocolReport run_stirap(const LambdaSystem& /*system*/, const StirapConfig& cfg) {
    if (!std::holds_alternative<StandardFamily>(cfg.family))
        throw ContractViolation("run_stirap: config does not select the standard family");
    cfg.check();
    const auto pair = pulses::gaussian_pair(cfg.omega0, cfg.kappa_p, cfg.tau, cfg.T, cfg.order);
    const Envelope pump = detail::maybe_reversed(pair.pump, cfg.time_reversed);
    const Envelope stokes = detail::maybe_reversed(pair.stokes, cfg.time_reversed);
    const double d = cfg.delta, dp = cfg.delta_p;
    TimeDependentHamiltonian h(lambda_basis(), [=](double t) { return lambda_matrix(pump(t), stokes(t), d, dp); });
    const double tm = cfg.window();
    auto traj = std::make_shared<const Trajectory>(
        propagate(h, detail::start_state(cfg.time_reversed, "0", "1"), uniform_grid(-tm, tm, cfg.points),
                  cfg.propagation));
    return make_report("stirap", traj, cfg.time_reversed ? "0" : "1", "2");
}

// ---------------------------------------------------------------------------
// 2+1 STIRAP

struct TwoPlusOneFields {
    Envelope p1, p2, stokes;
    pulses::PhaseModulation phase;
};

inline TwoPlusOneFields two_plus_one_fields(const StirapConfig& cfg) {
    const auto& f = std::get<TwoPlusOneFamily>(cfg.family);
    // The Gaussian pump leg takes the pump slot of the pulse pair, the Stokes the other.
    const double pump_center = cfg.order == PulseOrder::Counterintuitive ? cfg.tau : -cfg.tau;
    const Envelope timed(pulses::Gaussian{1.0, pump_center, cfg.T});
    Envelope p1 = f.always_on == AlwaysOn::P2 ? timed.scaled(f.omega_p1) : Envelope(pulses::Constant{f.omega_p1});
    Envelope p2 = f.always_on == AlwaysOn::P1 ? timed.scaled(f.omega_p2) : Envelope(pulses::Constant{f.omega_p2});
    Envelope stokes(pulses::Gaussian{f.stokes_peak(), -pump_center, cfg.T});
    p1 = detail::maybe_reversed(p1, cfg.time_reversed);
    p2 = detail::maybe_reversed(p2, cfg.time_reversed);
    stokes = detail::maybe_reversed(stokes, cfg.time_reversed);

    const double tm = cfg.window();
    const double d2 = f.delta2, dp = cfg.delta_p;
    pulses::PhaseModulation phase;
    if (f.compensate) {
        stark_shifts(1.0, 1.0, d2, dp);  // rejects resonant configurations up front
        phase = pulses::phase_from_shifts([=](double t) { return -p1(t) * p1(t) / (4.0 * d2); },
                                          [=](double t) { return -p2(t) * p2(t) / (4.0 * (d2 - dp)); }, -tm, tm,
                                          20001);
    }
    return {p1, p2, stokes, phase};
}

/// Two-photon pump plus a Stokes tone on 1-2 rotating at (delta - delta2) t + phi(t)
/// relative to the pump frame.
inline TimeDependentHamiltonian two_plus_one_full_hamiltonian(const StirapConfig& cfg) {
    const auto& f = std::get<TwoPlusOneFamily>(cfg.family);
    const TwoPlusOneFields fl = two_plus_one_fields(cfg);
    const double d2 = f.delta2, d = cfg.delta, dp = cfg.delta_p;
    return TimeDependentHamiltonian(lambda_basis(), [=](double t) {
        Matrix h = two_photon_pump_matrix(fl.p1(t), fl.p2(t), d2, dp);
        const Complex s = 0.5 * fl.stokes(t) * std::exp(I * ((d - d2) * t + fl.phase.phase(t)));
        h(1, 2) += s;
        h(2, 1) += std::conj(s);
        return h;
    });
}

inline TimeDependentHamiltonian average_hamiltonian(const StirapConfig& cfg) {
    if (!std::holds_alternative<TwoPlusOneFamily>(cfg.family))
        throw ContractViolation("average_hamiltonian: config does not select the 2+1 family");
    const auto& f = std::get<TwoPlusOneFamily>(cfg.family);
    const TwoPlusOneFields fl = two_plus_one_fields(cfg);
    const double d2 = f.delta2, d = cfg.delta, dp = cfg.delta_p;
    const bool comp = f.compensate;
    return TimeDependentHamiltonian(lambda_basis(), [=](double t) {
        return average_matrix(fl.p1(t), fl.p2(t), fl.stokes(t), d2, d, dp, comp ? fl.phase.rate(t) : 0.0);
    });
}

inline ProtocolReport run_stirap_2plus1(const LambdaSystem& /*system*/, const StirapConfig& cfg) {
    if (!std::holds_alternative<TwoPlusOneFamily>(cfg.family))
        throw ContractViolation("run_stirap_2plus1: config does not select the 2+1 family");
    cfg.check();
    const auto& f = std::get<TwoPlusOneFamily>(cfg.family);
    const double tm = cfg.window();
    const double bin = f.bin();
    const auto bins = static_cast<std::size_t>(std::floor(2.0 * tm / bin));
    if (bins < 2) throw ParameterError("run_stirap_2plus1: window shorter than two coarse-graining bins");
    const std::size_t spb = std::max<std::size_t>(f.samples_per_bin, 1);
    // The grid covers a whole number of bins ending at +t_max.
    const double t0 = tm - static_cast<double>(bins) * bin;
    const auto grid = uniform_grid(t0, tm, bins * spb + 1);
    const QuantumState psi0 = detail::start_state(cfg.time_reversed, "0", "1");

    PropagationOptions opts = cfg.propagation;
    // Keep the integrator resolving the fast pump-frame rotation.
    if (opts.max_step <= 0.0) opts.max_step = 0.25 / std::max(1.0, std::abs(f.delta2));
    // ~1e6 steps: per-step error has to sit well below the norm budget.
    opts.rtol = std::min(opts.rtol, 1e-13);
    opts.atol = std::min(opts.atol, 1e-15);
    // Start the run at -t_max even if the grid starts a fraction of a bin later.
    std::vector<double> full_grid;
    full_grid.reserve(grid.size() + 1);
    if (t0 > -tm) full_grid.push_back(-tm);
    full_grid.insert(full_grid.end(), grid.begin(), grid.end());

    auto run = [&](const TimeDependentHamiltonian& h, const PropagationOptions& o) {
        Trajectory tr = propagate(h, psi0, full_grid, o);
        if (full_grid.size() == grid.size()) return tr;
        std::vector<double> ts(tr.times().begin() + 1, tr.times().end());
        std::vector<Vector> ss(tr.states().begin() + 1, tr.states().end());
        return Trajectory(tr.basis(), std::move(ts), std::move(ss), tr.diagnostics());
    };

    auto full = std::make_shared<const Trajectory>(run(two_plus_one_full_hamiltonian(cfg), opts));
    auto eff = std::make_shared<const Trajectory>(run(average_hamiltonian(cfg), cfg.propagation));

    const std::string target = cfg.time_reversed ? "0" : "1";
    ProtocolReport r = make_report("stirap_2plus1", full, target, "2", spb);
    const CoarseGrained cf = coarse_grain(*full, spb), ce = coarse_grain(*eff, spb);
    r.effective_deviation = stirap::detail::unit_interval((cf.populations - ce.populations).cwiseAbs().maxCoeff(),
                                                  "effective_deviation");
    r.effective_trajectory = eff;
    r.scalars["effective_efficiency"] =
        ce.populations(static_cast<Eigen::Index>(lambda_basis().index_of(target)), ce.populations.cols() - 1);
    r.scalars["instantaneous_efficiency"] = full->final_population(target);
    r.scalars["omega_p_eff_peak"] = f.effective_peak();
    r.scalars["stokes_peak"] = f.stokes_peak();
    r.scalars["coarse_window"] = bin;
    return r;
}

// ---------------------------------------------------------------------------
// c-STIRAP

inline const char* kWeakDetuningWarning =
    "h_delta <= 1: the target state is not asymptotically separated by the detuning";

inline TimeDependentHamiltonian cstirap_hamiltonian(const StirapConfig& cfg) {
    const auto& f = std::get<CStirapFamily>(cfg.family);
    const double tau_ch = f.tau_ch > 0.0 ? f.tau_ch : 0.6 * cfg.T;
    const auto det = pulses::cstirap_detunings(cfg.omega0, f.h_delta, f.kappa_delta, cfg.tau, tau_ch);
    const Envelope ds = detail::maybe_reversed(det.stokes, cfg.time_reversed);
    const Envelope dpe = detail::maybe_reversed(det.pump, cfg.time_reversed);
    const Envelope pump =
        detail::maybe_reversed(Envelope(pulses::Gaussian{cfg.kappa_p * cfg.omega0, f.t_c, cfg.T}), cfg.time_reversed);
    pulses::ControlSchedule sched;
    sched.set_single_photon_detunings(dpe, ds, cfg.delta);
    const RealFunction delta = sched.detuning_function("delta");
    const double os = cfg.omega0;
    return TimeDependentHamiltonian(lambda_basis(), [=](double t) {
        const double dpt = dpe(t);
        return lambda_matrix(pump(t), os, delta(t), dpt);
    });
}

inline ProtocolReport run_cstirap(const LambdaSystem& /*system*/, const StirapConfig& cfg) {
    if (!std::holds_alternative<CStirapFamily>(cfg.family))
        throw ContractViolation("run_cstirap: config does not select the c-STIRAP family");
    cfg.check();
    const auto& f = std::get<CStirapFamily>(cfg.family);
    const double tm = cfg.window();
    auto traj = std::make_shared<const Trajectory>(propagate(cstirap_hamiltonian(cfg),
                                                             detail::start_state(cfg.time_reversed, "0", "1"),
                                                             uniform_grid(-tm, tm, cfg.points), cfg.propagation));
    ProtocolReport r = make_report("cstirap", traj, cfg.time_reversed ? "0" : "1", "2");
    if (f.h_delta <= 1.0) r.warnings.emplace_back(kWeakDetuningWarning);
    return r;
}

/// Dispatches on the selected family.
inline ProtocolReport run_protocol(const LambdaSystem& system, const StirapConfig& cfg) {
    switch (cfg.family.index()) {
        case 0: return run_stirap(system, cfg);
        case 1: return run_stirap_2plus1(system, cfg);
        default: return run_cstirap(system, cfg);
    }
}

}  // namespace stirap::lambda
