#pragma once

#include "stirap/core/propagate.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace stirap {

/// Time bins of a trajectory and the bin-averaged populations (D x bins).
struct CoarseGrained {
    std::vector<double> centers;
    RealMatrix populations;
};

/// Averages populations over consecutive bins of `samples_per_bin` grid intervals
/// using the trapezoid rule. Trailing grid points that do not fill a bin are dropped.
inline CoarseGrained coarse_grain(const Trajectory& traj, std::size_t samples_per_bin) {
    if (samples_per_bin == 0) throw ParameterError("coarse_grain: samples_per_bin must be positive");
    const auto& t = traj.times();
    const auto& p = traj.populations();
    const std::size_t bins = (traj.size() - 1) / samples_per_bin;
    if (bins == 0) throw ParameterError("coarse_grain: trajectory shorter than one bin");
    CoarseGrained out;
    out.centers.resize(bins);
    out.populations = RealMatrix::Zero(p.rows(), static_cast<Eigen::Index>(bins));
    for (std::size_t b = 0; b < bins; ++b) {
        const std::size_t k0 = b * samples_per_bin, k1 = k0 + samples_per_bin;
        const double span = t[k1] - t[k0];
        for (std::size_t k = k0; k < k1; ++k) {
            const double w = 0.5 * (t[k + 1] - t[k]) / span;
            out.populations.col(static_cast<Eigen::Index>(b)) +=
                w * (p.col(static_cast<Eigen::Index>(k)) + p.col(static_cast<Eigen::Index>(k + 1)));
        }
        out.centers[b] = 0.5 * (t[k0] + t[k1]);
    }
    return out;
}

namespace detail {

/// Populations from floating point can sit a hair outside [0, 1].
inline double unit_interval(double x, const char* field) {
    constexpr double slack = 1e-8;
    if (!(x >= -slack && x <= 1.0 + slack)) {
        std::ostringstream os;
        os << "ProtocolReport: " << field << " = " << x << " outside [0, 1]";
        throw NumericalError(os.str());
    }
    return std::clamp(x, 0.0, 1.0);
}

}  // namespace detail

struct ProtocolReport {
    std::string protocol;
    std::string target;
    std::string intermediate;
    double transfer_efficiency = 0.0;
    double peak_transient = 0.0;
    std::optional<double> effective_deviation;
    std::map<std::string, double> final_populations;
    std::map<std::string, double> scalars;
    std::vector<std::string> warnings;
    std::shared_ptr<const Trajectory> trajectory;
    std::shared_ptr<const Trajectory> effective_trajectory;

    double final_sum() const {
        double s = 0.0;
        for (const auto& [k, v] : final_populations) s += v;
        return s;
    }
};

/// Fills efficiency, peak transient and final populations from a trajectory.
/// With `final_samples` > 0 the final populations are averages over the last
/// `final_samples` grid intervals instead of the instantaneous last point.
inline ProtocolReport make_report(std::string protocol, std::shared_ptr<const Trajectory> traj,
                                  const std::string& target, const std::string& intermediate,
                                  std::size_t final_samples = 0) {
    ProtocolReport r;
    r.protocol = std::move(protocol);
    r.target = target;
    r.intermediate = intermediate;
    const Basis& basis = traj->basis();
    RealVector fin;
    if (final_samples > 0) {
        const auto& t = traj->times();
        const auto& p = traj->populations();
        const std::size_t n = traj->size();
        if (final_samples >= n) throw ParameterError("make_report: averaging window longer than trajectory");
        fin = RealVector::Zero(p.rows());
        const double span = t[n - 1] - t[n - 1 - final_samples];
        for (std::size_t k = n - 1 - final_samples; k + 1 < n; ++k) {
            fin += 0.5 * (t[k + 1] - t[k]) / span *
                   (p.col(static_cast<Eigen::Index>(k)) + p.col(static_cast<Eigen::Index>(k + 1)));
        }
    } else {
        fin = traj->populations().col(static_cast<Eigen::Index>(traj->size() - 1));
    }
    for (const auto& lbl : basis.labels()) {
        r.final_populations[lbl.name] = detail::unit_interval(fin(static_cast<Eigen::Index>(lbl.index)), "population");
    }
    r.transfer_efficiency = detail::unit_interval(fin(static_cast<Eigen::Index>(basis.index_of(target))), "transfer_efficiency");
    r.peak_transient = detail::unit_interval(traj->peak_population(intermediate), "peak_transient");
    r.scalars["accepted_steps"] = static_cast<double>(traj->diagnostics().accepted_steps);
    r.scalars["max_norm_drift"] = traj->diagnostics().max_norm_drift;
    if (traj->diagnostics().convergence_error >= 0.0) {
        r.scalars["convergence_error"] = traj->diagnostics().convergence_error;
    }
    r.trajectory = std::move(traj);
    return r;
}

}  // namespace stirap
