#pragma once

#include "stirap/core/types.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <vector>

namespace stirap::pulses {

using RealFunction = std::function<double(double)>;

/// Phase law phi(t) and its rate phidot(t).
///
/// The rate is kept as a callable. The phase is tabulated by composite Simpson
/// quadrature of the rate on a uniform grid and interpolated with cubic Hermite
/// segments that use the exact rate as the slope. Outside the tabulated window
/// the phase continues linearly at the endpoint rate.
class PhaseModulation {
public:
    PhaseModulation() : PhaseModulation([](double) { return 0.0; }, 0.0, 1.0, 2) {}

    PhaseModulation(RealFunction rate, double t_start, double t_end, std::size_t points = 4001)
        : rate_(std::make_shared<RealFunction>(std::move(rate))), t0_(t_start), t1_(t_end) {
        if (!(t_end > t_start)) throw ParameterError("PhaseModulation: window must have t_end > t_start");
        points = std::max<std::size_t>(points, 2);
        dt_ = (t1_ - t0_) / static_cast<double>(points - 1);
        phase_.resize(points);
        slope_.resize(points);
        const auto& f = *rate_;
        phase_[0] = 0.0;
        slope_[0] = f(t0_);
        for (std::size_t k = 1; k < points; ++k) {
            const double a = t0_ + dt_ * static_cast<double>(k - 1);
            const double b = (k + 1 == points) ? t1_ : a + dt_;
            slope_[k] = f(b);
            phase_[k] = phase_[k - 1] + (b - a) / 6.0 * (slope_[k - 1] + 4.0 * f(0.5 * (a + b)) + slope_[k]);
        }
    }

    static PhaseModulation none() { return PhaseModulation(); }

    double rate(double t) const { return (*rate_)(t); }

    double phase(double t) const {
        if (t <= t0_) return (t - t0_) * slope_.front();
        if (t >= t1_) return phase_.back() + (t - t1_) * slope_.back();
        const double x = (t - t0_) / dt_;
        const auto k = std::min(static_cast<std::size_t>(x), phase_.size() - 2);
        const double s = x - static_cast<double>(k);
        // cubic Hermite basis
        const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
        const double h10 = s * (1 - s) * (1 - s);
        const double h01 = s * s * (3 - 2 * s);
        const double h11 = s * s * (s - 1);
        return h00 * phase_[k] + h10 * dt_ * slope_[k] + h01 * phase_[k + 1] + h11 * dt_ * slope_[k + 1];
    }

    double t_start() const { return t0_; }
    double t_end() const { return t1_; }

private:
    std::shared_ptr<RealFunction> rate_;
    double t0_ = 0.0;
    double t1_ = 1.0;
    double dt_ = 1.0;
    std::vector<double> phase_;
    std::vector<double> slope_;
};

/// Rate of the phase modulation that cancels the net two-photon Stark shift of a
/// two-photon pump: 2 S1 + S2.
inline double stark_compensation_rate(double s1, double s2) { return 2.0 * s1 + s2; }

/// Phase law with phidot = 2 S1 + S2 and phi(t_start) = 0.
inline PhaseModulation phase_from_shifts(RealFunction s1, RealFunction s2, double t_start, double t_end,
                                         std::size_t points = 4001) {
    return PhaseModulation([s1 = std::move(s1), s2 = std::move(s2)](
                               double t) { return stark_compensation_rate(s1(t), s2(t)); },
                           t_start, t_end, points);
}

}  // namespace stirap::pulses
