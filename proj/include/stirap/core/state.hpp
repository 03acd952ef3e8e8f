#pragma once

#include "stirap/core/basis.hpp"
#include "stirap/core/types.hpp"

#include <cmath>
#include <string>

namespace stirap {

inline constexpr double kStateNormTolerance = 1e-9;

/// Unit-norm amplitude vector over a labeled basis.
class QuantumState {
public:
    QuantumState(Basis basis, Vector amplitudes) : basis_(std::move(basis)), amps_(std::move(amplitudes)) {
        if (amps_.size() != basis_.dim()) {
            throw ContractViolation("QuantumState: amplitude count " + std::to_string(amps_.size()) +
                                    " does not match basis size " + std::to_string(basis_.size()));
        }
        const double n = amps_.norm();
        if (std::abs(n - 1.0) > kStateNormTolerance) {
            throw ContractViolation("QuantumState: norm " + std::to_string(n) + " differs from 1");
        }
    }

    /// Normalizes a nonzero vector before construction.
    static QuantumState normalized(Basis basis, Vector amplitudes) {
        const double n = amplitudes.norm();
        if (n == 0.0) throw ContractViolation("QuantumState: cannot normalize the zero vector");
        return QuantumState(std::move(basis), amplitudes / n);
    }

    static QuantumState basis_state(Basis basis, const std::string& label) {
        Vector v = Vector::Zero(basis.dim());
        v(static_cast<Eigen::Index>(basis.index_of(label))) = 1.0;
        return QuantumState(std::move(basis), std::move(v));
    }

    const Basis& basis() const { return basis_; }
    const Vector& amplitudes() const { return amps_; }
    Eigen::Index dim() const { return amps_.size(); }

    Complex amplitude(const std::string& label) const {
        return amps_(static_cast<Eigen::Index>(basis_.index_of(label)));
    }
    double population(const std::string& label) const { return std::norm(amplitude(label)); }

    RealVector populations() const { return amps_.cwiseAbs2(); }

private:
    Basis basis_;
    Vector amps_;
};

}  // namespace stirap
