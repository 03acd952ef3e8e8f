#pragma once

#include "stirap/core/operator.hpp"
#include "stirap/core/state.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <vector>

namespace stirap {

inline constexpr double kDegeneracyGap = 1e-12;

/// Eigenvalues ascending; column k of `vectors` is the k-th eigenvector.
struct EigenSystem {
    Basis basis;
    RealVector values;
    Matrix vectors;

    QuantumState state(Eigen::Index k) const { return QuantumState(basis, vectors.col(k)); }

    std::vector<QuantumState> states() const {
        std::vector<QuantumState> out;
        out.reserve(static_cast<std::size_t>(values.size()));
        for (Eigen::Index k = 0; k < values.size(); ++k) out.push_back(state(k));
        return out;
    }
};

namespace detail {

// The largest-magnitude component is made real and positive. Ties within a
// relative 1e-9 go to the lowest index so the choice does not flicker.
inline void fix_phase(Eigen::Ref<Vector> v) {
    const RealVector mag = v.cwiseAbs();
    const double top = mag.maxCoeff();
    Eigen::Index pick = 0;
    for (Eigen::Index i = 0; i < mag.size(); ++i) {
        if (mag(i) >= top * (1.0 - 1e-9)) {
            pick = i;
            break;
        }
    }
    if (top > 0.0) v *= std::conj(v(pick)) / std::abs(v(pick));
}

// Replaces an eigenspace's arbitrary basis by Gram-Schmidt on the projections
// of e_0, e_1, ... so degenerate output depends only on the eigenspace itself.
inline void canonicalize_cluster(Matrix& vecs, Eigen::Index first, Eigen::Index count) {
    const Matrix block = vecs.middleCols(first, count);
    const Matrix proj = block * block.adjoint();
    Matrix out(vecs.rows(), count);
    Eigen::Index found = 0;
    std::vector<bool> used(static_cast<std::size_t>(vecs.rows()), false);
    for (double threshold : {1e-3, 1e-10}) {
        for (Eigen::Index k = 0; k < vecs.rows() && found < count; ++k) {
            if (used[static_cast<std::size_t>(k)]) continue;
            Vector w = proj.col(k);
            for (int pass = 0; pass < 2; ++pass)
                for (Eigen::Index j = 0; j < found; ++j) w -= out.col(j) * out.col(j).dot(w);
            const double n = w.norm();
            if (n > threshold) {
                out.col(found++) = w / n;
                used[static_cast<std::size_t>(k)] = true;
            }
        }
    }
    if (found == count) vecs.middleCols(first, count) = out;
}

}  // namespace detail

/// Dense Hermitian eigendecomposition with deterministic phase and degeneracy handling.
inline EigenSystem eigendecompose(const Matrix& m, const Basis& basis) {
    require_hermitian(m, "eigendecompose");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    if (solver.info() != Eigen::Success) throw NumericalError("eigendecompose: eigensolver did not converge");

    EigenSystem es{basis, solver.eigenvalues(), solver.eigenvectors()};
    const double gap = kDegeneracyGap * std::max(1.0, max_abs(m));
    const Eigen::Index n = es.values.size();
    for (Eigen::Index k = 0; k < n;) {
        Eigen::Index end = k + 1;
        while (end < n && es.values(end) - es.values(end - 1) < gap) ++end;
        if (end - k > 1) detail::canonicalize_cluster(es.vectors, k, end - k);
        k = end;
    }
    for (Eigen::Index k = 0; k < n; ++k) detail::fix_phase(es.vectors.col(k));
    return es;
}

inline EigenSystem eigendecompose(const HermitianOperator& h) { return eigendecompose(h.matrix(), h.basis()); }

/// exp(-i H dt) through the eigendecomposition of H.
inline Matrix matrix_exponential_step(const Matrix& h, double dt) {
    if (!std::isfinite(dt)) throw ContractViolation("matrix_exponential_step: dt is not finite");
    if (h.size() == 0) return h;
    require_hermitian(h, "matrix_exponential_step");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
    if (solver.info() != Eigen::Success) throw NumericalError("matrix_exponential_step: eigensolver failed");
    const auto& v = solver.eigenvectors();
    Vector phases(solver.eigenvalues().size());
    for (Eigen::Index k = 0; k < phases.size(); ++k) phases(k) = std::exp(-I * solver.eigenvalues()(k) * dt);
    return v * phases.asDiagonal() * v.adjoint();
}

inline Matrix matrix_exponential_step(const HermitianOperator& h, double dt) {
    return matrix_exponential_step(h.matrix(), dt);
}

}  // namespace stirap
