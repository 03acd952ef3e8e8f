#pragma once

#include "stirap/core/types.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace stirap::pulses {

/// amplitude * exp(-((t - center) / width)^2)
struct Gaussian {
    double amplitude = 1.0;
    double center = 0.0;
    double width = 1.0;
};

/// height/2 * [tanh((t - offset)/rise) + tanh((t + offset)/rise)], a smoothed step
/// from -height to +height with a flat zero stage over |t| < offset.
struct TanhPair {
    double height = 1.0;
    double offset = 0.0;
    double rise = 1.0;
};

struct Constant {
    double amplitude = 0.0;
};

class Envelope;

/// sum_k coefficient_k * envelope_k(t)
struct ScaledSum {
    std::vector<std::pair<double, Envelope>> terms;
};

/// Slowly varying real amplitude of a drive or detuning, evaluated on t.
class Envelope {
public:
    using Shape = std::variant<Gaussian, TanhPair, Constant, ScaledSum>;

    Envelope() : shape_(Constant{0.0}) {}
    Envelope(Gaussian g) : shape_(g) {
        if (!(g.width > 0.0)) throw ParameterError("Gaussian envelope: width must be positive");
    }
    Envelope(TanhPair p) : shape_(p) {
        if (!(p.rise > 0.0)) throw ParameterError("tanh-pair envelope: rise time must be positive");
    }
    Envelope(Constant c) : shape_(c) {}
    Envelope(ScaledSum s) : shape_(std::move(s)) {}

    static Envelope zero() { return Envelope(Constant{0.0}); }

    double operator()(double t) const {
        const double s = reversed_ ? -t : t;
        return std::visit([s](const auto& shape) { return evaluate(shape, s); }, shape_);
    }

    /// Declared peak magnitude; evaluation never exceeds it.
    double peak() const {
        return std::visit([](const auto& shape) { return peak_of(shape); }, shape_);
    }

    /// Envelope with t -> -t.
    Envelope reversed() const {
        Envelope out = *this;
        out.reversed_ = !reversed_;
        return out;
    }

    /// Same shape, amplitude multiplied by `factor`.
    Envelope scaled(double factor) const {
        Envelope out = *this;
        std::visit([factor](auto& shape) { scale(shape, factor); }, out.shape_);
        return out;
    }

    const Shape& shape() const { return shape_; }
    bool is_reversed() const { return reversed_; }

    std::string kind() const {
        return std::visit(
            [](const auto& shape) -> std::string {
                using T = std::decay_t<decltype(shape)>;
                if constexpr (std::is_same_v<T, Gaussian>) return "gaussian";
                else if constexpr (std::is_same_v<T, TanhPair>) return "tanh-pair";
                else if constexpr (std::is_same_v<T, Constant>) return "constant";
                else return "scaled-sum";
            },
            shape_);
    }

private:
    static double evaluate(const Gaussian& g, double t) {
        const double x = (t - g.center) / g.width;
        return g.amplitude * std::exp(-x * x);
    }
    static double evaluate(const TanhPair& p, double t) {
        return 0.5 * p.height * (std::tanh((t - p.offset) / p.rise) + std::tanh((t + p.offset) / p.rise));
    }
    static double evaluate(const Constant& c, double) { return c.amplitude; }
    static double evaluate(const ScaledSum& s, double t) {
        double v = 0.0;
        for (const auto& [c, e] : s.terms) v += c * e(t);
        return v;
    }

    static double peak_of(const Gaussian& g) { return std::abs(g.amplitude); }
    static double peak_of(const TanhPair& p) { return std::abs(p.height); }
    static double peak_of(const Constant& c) { return std::abs(c.amplitude); }
    static double peak_of(const ScaledSum& s) {
        double v = 0.0;
        for (const auto& [c, e] : s.terms) v += std::abs(c) * e.peak();
        return v;
    }

    static void scale(Gaussian& g, double f) { g.amplitude *= f; }
    static void scale(TanhPair& p, double f) { p.height *= f; }
    static void scale(Constant& c, double f) { c.amplitude *= f; }
    static void scale(ScaledSum& s, double f) {
        for (auto& term : s.terms) term.first *= f;
    }

    Shape shape_;
    bool reversed_ = false;
};

enum class PulseOrder {
    /// Stokes peaks at -tau, before the pump at +tau.
    Counterintuitive,
    /// Pump at -tau, Stokes at +tau: the printed sign placement of the Gaussian pair.
    Intuitive,
};

struct PulsePair {
    Envelope pump;
    Envelope stokes;
};

/// Gaussian pump/Stokes pair of width T separated by 2 tau; pump amplitude kappa_p * Omega0.
inline PulsePair gaussian_pair(double omega0, double kappa_p, double tau, double width,
                               PulseOrder order = PulseOrder::Counterintuitive) {
    if (!(width > 0.0)) throw ParameterError("gaussian_pair: T must be positive");
    const double pump_center = order == PulseOrder::Counterintuitive ? tau : -tau;
    return {Envelope(Gaussian{kappa_p * omega0, pump_center, width}),
            Envelope(Gaussian{omega0, -pump_center, width})};
}

}  // namespace stirap::pulses
