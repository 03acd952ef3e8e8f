#pragma once

#include "stirap/core/basis.hpp"
#include "stirap/core/types.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace stirap {

inline constexpr double kHermiticityTolerance = 1e-12;

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

/// Largest |M - M^dagger| entry.
inline double hermiticity_defect(const Matrix& m) { return max_abs(m - m.adjoint()); }

inline void require_hermitian(const Matrix& m, const char* who) {
    if (m.rows() != m.cols()) {
        throw ContractViolation(std::string(who) + ": matrix is not square");
    }
    const double scale = max_abs(m);
    const double defect = hermiticity_defect(m);
    if (defect > kHermiticityTolerance * scale) {
        std::ostringstream os;
        os << who << ": matrix is not Hermitian (max |M - M^dagger| = " << defect << ", max |M| = " << scale
           << ")";
        throw ContractViolation(os.str());
    }
}

/// Hermitian matrix over a labeled basis, in units of angular frequency (hbar = 1).
class HermitianOperator {
public:
    HermitianOperator(Basis basis, Matrix matrix) : basis_(std::move(basis)), m_(std::move(matrix)) {
        if (m_.rows() != basis_.dim() || m_.cols() != basis_.dim()) {
            throw ContractViolation("HermitianOperator: matrix shape does not match basis size " +
                                    std::to_string(basis_.size()));
        }
        require_hermitian(m_, "HermitianOperator");
    }

    const Basis& basis() const { return basis_; }
    const Matrix& matrix() const { return m_; }
    Eigen::Index dim() const { return m_.rows(); }

    Complex element(const std::string& row, const std::string& col) const {
        return m_(static_cast<Eigen::Index>(basis_.index_of(row)),
                  static_cast<Eigen::Index>(basis_.index_of(col)));
    }

private:
    Basis basis_;
    Matrix m_;
};

/// H(t) as a callback producing a dense matrix over a fixed basis.
///
/// `matrix(t)` is the hot path used by the integrators and skips the Hermiticity
/// check; `at(t)` returns a checked HermitianOperator.
class TimeDependentHamiltonian {
public:
    using Evaluator = std::function<Matrix(double)>;
    /// Optional H(t) psi without forming H(t).
    using Action = std::function<Vector(double, const Vector&)>;

    TimeDependentHamiltonian(Basis basis, Evaluator evaluator, bool piecewise_smooth = false)
        : basis_(std::make_shared<const Basis>(std::move(basis))),
          eval_(std::move(evaluator)),
          piecewise_smooth_(piecewise_smooth) {}

    static TimeDependentHamiltonian constant(const HermitianOperator& h) {
        Matrix m = h.matrix();
        return TimeDependentHamiltonian(h.basis(), [m](double) { return m; });
    }

    const Basis& basis() const { return *basis_; }
    Eigen::Index dim() const { return basis_->dim(); }
    bool piecewise_smooth() const { return piecewise_smooth_; }

    Matrix matrix(double t) const { return eval_(t); }

    HermitianOperator at(double t) const { return HermitianOperator(*basis_, eval_(t)); }

    const Evaluator& evaluator() const { return eval_; }

    TimeDependentHamiltonian& with_action(Action a) {
        act_ = std::move(a);
        return *this;
    }
    Vector apply(double t, const Vector& psi) const { return act_ ? act_(t, psi) : Vector(eval_(t) * psi); }

private:
    std::shared_ptr<const Basis> basis_;
    Evaluator eval_;
    Action act_;
    bool piecewise_smooth_ = false;
};

/// Restriction of H(t) to the listed labels, re-indexed in the given order.
inline TimeDependentHamiltonian project_subspace(const TimeDependentHamiltonian& h,
                                                 const std::vector<std::string>& labels) {
    std::vector<Eigen::Index> idx;
    idx.reserve(labels.size());
    for (const auto& l : labels) {
        auto i = h.basis().find(l);
        if (!i) throw ContractViolation("project_subspace: unknown label '" + l + "'");
        idx.push_back(static_cast<Eigen::Index>(*i));
    }
    Basis sub(labels);
    return TimeDependentHamiltonian(
        std::move(sub),
        [h, idx](double t) {
            const Matrix full = h.matrix(t);
            const auto n = static_cast<Eigen::Index>(idx.size());
            Matrix out(n, n);
            for (Eigen::Index r = 0; r < n; ++r)
                for (Eigen::Index c = 0; c < n; ++c) out(r, c) = full(idx[r], idx[c]);
            return out;
        },
        h.piecewise_smooth());
}

inline HermitianOperator project_subspace(const HermitianOperator& h, const std::vector<std::string>& labels) {
    auto td = project_subspace(TimeDependentHamiltonian::constant(h), labels);
    return td.at(0.0);
}

/// Largest coupling between the listed labels and the rest of the basis.
inline double leakage_coupling(const Matrix& m, const Basis& basis, const std::vector<std::string>& labels) {
    std::vector<bool> inside(basis.size(), false);
    for (const auto& l : labels) inside[basis.index_of(l)] = true;
    double worst = 0.0;
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            if (inside[static_cast<std::size_t>(r)] != inside[static_cast<std::size_t>(c)])
                worst = std::max(worst, std::abs(m(r, c)));
    return worst;
}

}  // namespace stirap
