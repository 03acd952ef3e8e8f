#pragma once

#include "stirap/core/eigen.hpp"
#include "stirap/core/operator.hpp"
#include "stirap/core/state.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace stirap {

enum class Backend {
    /// Embedded Dormand-Prince 5(4) with adaptive steps.
    RungeKutta45,
    /// Piecewise-constant midpoint exponentials, exactly unitary per step.
    Exponential,
};

struct PropagationOptions {
    Backend backend = Backend::RungeKutta45;
    double rtol = 1e-12;
    double atol = 1e-14;
    double initial_step = 0.0;  // 0 picks one from ||H||
    double max_step = 0.0;      // 0 means unbounded
    double exp_step = 1e-2;     // substep of the exponential backend
    double norm_tol = 1e-9;
    double conv_tol = 1e-6;
    bool verify_convergence = false;
    bool renormalize = false;
    std::size_t max_steps = 200'000'000;
};

struct PropagationDiagnostics {
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
    double max_norm_drift = 0.0;
    /// Sup-norm population change under step refinement; negative if not measured.
    double convergence_error = -1.0;
};

/// Time grid, state snapshots and population histories.
class Trajectory {
public:
    Trajectory(Basis basis, std::vector<double> times, std::vector<Vector> states, PropagationDiagnostics diag = {})
        : basis_(std::move(basis)), times_(std::move(times)), states_(std::move(states)), diag_(diag) {
        if (times_.size() != states_.size()) throw ContractViolation("Trajectory: times/states size mismatch");
        pops_.resize(basis_.dim(), static_cast<Eigen::Index>(times_.size()));
        for (std::size_t k = 0; k < states_.size(); ++k)
            pops_.col(static_cast<Eigen::Index>(k)) = states_[k].cwiseAbs2();
    }

    const Basis& basis() const { return basis_; }
    const std::vector<double>& times() const { return times_; }
    const std::vector<Vector>& states() const { return states_; }
    const RealMatrix& populations() const { return pops_; }
    const PropagationDiagnostics& diagnostics() const { return diag_; }
    PropagationDiagnostics& diagnostics() { return diag_; }

    std::size_t size() const { return times_.size(); }

    QuantumState state(std::size_t k) const { return QuantumState::normalized(basis_, states_.at(k)); }
    QuantumState final_state() const { return state(size() - 1); }

    RealVector population_history(const std::string& label) const {
        return pops_.row(static_cast<Eigen::Index>(basis_.index_of(label))).transpose();
    }
    double final_population(const std::string& label) const {
        return pops_(static_cast<Eigen::Index>(basis_.index_of(label)), pops_.cols() - 1);
    }
    double peak_population(const std::string& label) const { return population_history(label).maxCoeff(); }

    /// Every `stride`-th snapshot, always keeping the last one.
    Trajectory subsampled(std::size_t stride) const {
        if (stride <= 1) return *this;
        std::vector<double> t;
        std::vector<Vector> s;
        for (std::size_t k = 0; k < size(); k += stride) {
            t.push_back(times_[k]);
            s.push_back(states_[k]);
        }
        if ((size() - 1) % stride != 0) {
            t.push_back(times_.back());
            s.push_back(states_.back());
        }
        return Trajectory(basis_, std::move(t), std::move(s), diag_);
    }

private:
    Basis basis_;
    std::vector<double> times_;
    std::vector<Vector> states_;
    RealMatrix pops_;
    PropagationDiagnostics diag_;
};

/// `points` equally spaced samples on [t0, t1].
inline std::vector<double> uniform_grid(double t0, double t1, std::size_t points) {
    if (points < 2) throw ContractViolation("uniform_grid: need at least two points");
    std::vector<double> g(points);
    const double dt = (t1 - t0) / static_cast<double>(points - 1);
    for (std::size_t k = 0; k < points; ++k) g[k] = t0 + dt * static_cast<double>(k);
    g.back() = t1;
    return g;
}

namespace detail {

inline void check_grid(const std::vector<double>& grid) {
    if (grid.empty()) throw ContractViolation("propagate: empty time grid");
    for (std::size_t k = 1; k < grid.size(); ++k)
        if (!(grid[k] > grid[k - 1])) throw ContractViolation("propagate: time grid is not strictly increasing");
}

inline void check_norm(const Vector& psi, double t, double tol, PropagationDiagnostics& diag) {
    const double drift = std::abs(psi.norm() - 1.0);
    diag.max_norm_drift = std::max(diag.max_norm_drift, drift);
    if (!(drift <= tol)) {
        std::ostringstream os;
        os << "propagate: norm drift " << drift << " exceeds tolerance " << tol << " at t = " << t;
        throw NumericalError(os.str());
    }
}

// Dormand-Prince 5(4) tableau.
struct DormandPrince {
    static constexpr std::array<double, 7> c{0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                            b6 = 11.0 / 84;
    // b - b_hat
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
};

class RungeKuttaStepper {
public:
    RungeKuttaStepper(const TimeDependentHamiltonian& h, const PropagationOptions& opts) : h_(h), opts_(opts) {}

    // Advances psi from t to t_end.
    void advance(Vector& psi, double& t, double t_end, double& step, PropagationDiagnostics& diag) {
        using DP = DormandPrince;
        if (!have_k1_) {
            k1_ = rhs(t, psi);
            have_k1_ = true;
        }
        while (t < t_end) {
            double h = std::min(step, t_end - t);
            if (opts_.max_step > 0.0) h = std::min(h, opts_.max_step);
            const bool last = (t + h >= t_end);
            if (last) h = t_end - t;

            const Vector k2 = rhs(t + DP::c[1] * h, psi + h * (DP::a21 * k1_));
            const Vector k3 = rhs(t + DP::c[2] * h, psi + h * (DP::a31 * k1_ + DP::a32 * k2));
            const Vector k4 = rhs(t + DP::c[3] * h, psi + h * (DP::a41 * k1_ + DP::a42 * k2 + DP::a43 * k3));
            const Vector k5 =
                rhs(t + DP::c[4] * h, psi + h * (DP::a51 * k1_ + DP::a52 * k2 + DP::a53 * k3 + DP::a54 * k4));
            const Vector k6 = rhs(t + h, psi + h * (DP::a61 * k1_ + DP::a62 * k2 + DP::a63 * k3 + DP::a64 * k4 +
                                                    DP::a65 * k5));
            Vector next = psi + h * (DP::b1 * k1_ + DP::b3 * k3 + DP::b4 * k4 + DP::b5 * k5 + DP::b6 * k6);
            const double t_next = last ? t_end : t + h;
            const Vector k7 = rhs(t_next, next);
            const Vector err =
                h * (DP::e1 * k1_ + DP::e3 * k3 + DP::e4 * k4 + DP::e5 * k5 + DP::e6 * k6 + DP::e7 * k7);

            double en = 0.0;
            for (Eigen::Index i = 0; i < psi.size(); ++i) {
                const double scale = opts_.atol + opts_.rtol * std::max(std::abs(psi(i)), std::abs(next(i)));
                en = std::max(en, std::abs(err(i)) / scale);
            }

            if (en <= 1.0) {
                psi = std::move(next);
                if (opts_.renormalize) psi.normalize();
                t = t_next;
                k1_ = opts_.renormalize ? rhs(t, psi) : k7;
                ++diag.accepted_steps;
                const double factor = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
                // A step clipped to land on an output time says nothing about the
                // natural step size, so keep the previous proposal in that case.
                if (!last || h >= step) step = h * factor;
            } else {
                ++diag.rejected_steps;
                step = h * std::clamp(0.9 * std::pow(en, -0.2), 0.1, 1.0);
                const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t));
                if (step < floor) {
                    std::ostringstream os;
                    os << "propagate: step size underflow at t = " << t << " (step " << step << ")";
                    throw NumericalError(os.str());
                }
            }
            if (diag.accepted_steps + diag.rejected_steps > opts_.max_steps) {
                std::ostringstream os;
                os << "propagate: exceeded " << opts_.max_steps << " steps at t = " << t;
                throw NumericalError(os.str());
            }
        }
    }

private:
    Vector rhs(double t, const Vector& psi) const { return -I * h_.apply(t, psi); }

    const TimeDependentHamiltonian& h_;
    const PropagationOptions& opts_;
    Vector k1_;
    bool have_k1_ = false;
};

inline double initial_step_guess(const TimeDependentHamiltonian& h, double t0, const PropagationOptions& opts) {
    if (opts.initial_step > 0.0) return opts.initial_step;
    const double scale = max_abs(h.matrix(t0)) * static_cast<double>(h.dim());
    return scale > 0.0 ? 0.01 / scale : 1e-2;
}

inline Trajectory propagate_once(const TimeDependentHamiltonian& h, const QuantumState& psi0,
                                 const std::vector<double>& grid, const PropagationOptions& opts) {
    PropagationDiagnostics diag;
    std::vector<Vector> states;
    states.reserve(grid.size());
    Vector psi = psi0.amplitudes();
    double t = grid.front();
    states.push_back(psi);
    check_norm(psi, t, opts.norm_tol, diag);

    if (opts.backend == Backend::RungeKutta45) {
        RungeKuttaStepper stepper(h, opts);
        double step = initial_step_guess(h, t, opts);
        for (std::size_t k = 1; k < grid.size(); ++k) {
            stepper.advance(psi, t, grid[k], step, diag);
            check_norm(psi, t, opts.norm_tol, diag);
            states.push_back(psi);
        }
    } else {
        if (!(opts.exp_step > 0.0)) throw ContractViolation("propagate: exponential backend needs exp_step > 0");
        for (std::size_t k = 1; k < grid.size(); ++k) {
            const double span = grid[k] - grid[k - 1];
            const auto n = static_cast<std::size_t>(std::ceil(span / opts.exp_step - 1e-9));
            const double dt = span / static_cast<double>(std::max<std::size_t>(n, 1));
            for (std::size_t s = 0; s < std::max<std::size_t>(n, 1); ++s) {
                const double tm = grid[k - 1] + (static_cast<double>(s) + 0.5) * dt;
                psi = matrix_exponential_step(h.matrix(tm), dt) * psi;
                ++diag.accepted_steps;
            }
            if (opts.renormalize) psi.normalize();
            t = grid[k];
            check_norm(psi, t, opts.norm_tol, diag);
            states.push_back(psi);
        }
    }
    return Trajectory(h.basis(), grid, std::move(states), diag);
}

}  // namespace detail

/// Solves i d/dt psi = H(t) psi and samples the state on `grid`.
inline Trajectory propagate(const TimeDependentHamiltonian& h, const QuantumState& psi0,
                            const std::vector<double>& grid, const PropagationOptions& opts = {}) {
    if (!(psi0.basis() == h.basis())) throw ContractViolation("propagate: initial state basis does not match H");
    detail::check_grid(grid);
    Trajectory traj = detail::propagate_once(h, psi0, grid, opts);
    if (opts.verify_convergence) {
        // Halving the step of a fifth-order method shrinks the local error by 32.
        PropagationOptions fine = opts;
        fine.verify_convergence = false;
        fine.rtol /= 32.0;
        fine.atol /= 32.0;
        fine.exp_step /= 2.0;
        const Trajectory ref = detail::propagate_once(h, psi0, grid, fine);
        const double diff = (traj.populations() - ref.populations()).cwiseAbs().maxCoeff();
        traj.diagnostics().convergence_error = diff;
        if (diff > opts.conv_tol) {
            std::ostringstream os;
            os << "propagate: populations changed by " << diff << " under step refinement (tolerance "
               << opts.conv_tol << ")";
            throw NumericalError(os.str());
        }
    }
    return traj;
}

}  // namespace stirap
