#pragma once

#include "stirap/core/eigen.hpp"
#include "stirap/core/operator.hpp"
#include "stirap/core/state.hpp"
#include "stirap/pulses/phase.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <sstream>

namespace stirap::lambda {

using pulses::RealFunction;
using ComplexFunction = std::function<Complex(double)>;

inline Basis lambda_basis() { return Basis{"0", "1", "2"}; }

/// Bare three-level artificial atom: energies and dipole matrix elements.
struct LambdaSystem {
    double e0 = 0.0, e1 = 0.0, e2 = 0.0;
    double q01 = 1.0, q02 = 1.0, q12 = 1.0;
    double q_diag = 0.0;

    /// Selection rules of a parity-symmetric bias point: no direct 0-2 coupling.
    bool at_symmetry_point() const { return q02 == 0.0 && q_diag == 0.0; }

    static LambdaSystem symmetry_point(double e1, double e2) {
        return LambdaSystem{0.0, e1, e2, 1.0, 0.0, 1.0, 0.0};
    }
};

/// RWA matrix in the doubly rotating frame, basis {0, 1, 2}.
inline Matrix lambda_matrix(Complex omega_p, Complex omega_s, double delta, double delta_p) {
    Matrix h = Matrix::Zero(3, 3);
    h(1, 1) = delta;
    h(2, 2) = delta_p;
    h(2, 0) = 0.5 * omega_p;
    h(0, 2) = 0.5 * std::conj(omega_p);
    h(2, 1) = 0.5 * omega_s;
    h(1, 2) = 0.5 * std::conj(omega_s);
    return h;
}

inline TimeDependentHamiltonian rwa_lambda_hamiltonian(ComplexFunction omega_p, ComplexFunction omega_s,
                                                       RealFunction delta, RealFunction delta_p) {
    return TimeDependentHamiltonian(lambda_basis(), [=](double t) {
        return lambda_matrix(omega_p(t), omega_s(t), delta(t), delta_p(t));
    });
}

inline TimeDependentHamiltonian rwa_lambda_hamiltonian(RealFunction omega_p, RealFunction omega_s,
                                                       RealFunction delta, RealFunction delta_p) {
    return rwa_lambda_hamiltonian(ComplexFunction([omega_p](double t) { return Complex(omega_p(t)); }),
                                  ComplexFunction([omega_s](double t) { return Complex(omega_s(t)); }),
                                  std::move(delta), std::move(delta_p));
}

/// Zero-energy eigenvector at two-photon resonance: (Os|0> - Op|1>)/sqrt(Os^2 + Op^2).
inline QuantumState dark_state(double omega_p, double omega_s) {
    const double n = std::hypot(omega_p, omega_s);
    if (n == 0.0) throw ParameterError("dark_state: pump and Stokes amplitudes are both zero");
    Vector v(3);
    v << omega_s / n, -omega_p / n, 0.0;
    return QuantumState(lambda_basis(), v);
}

inline double autler_townes(double omega_p, double omega_s, double delta_p) {
    return std::sqrt(omega_p * omega_p + omega_s * omega_s + delta_p * delta_p);
}

// ---------------------------------------------------------------------------
// Two-photon pump

/// Ladder-driven three-level matrix with a detuned two-photon pump, basis {0, 1, 2}.
inline Matrix two_photon_pump_matrix(double omega_p1, double omega_p2, double delta2, double delta_p) {
    Matrix h = Matrix::Zero(3, 3);
    h(1, 1) = delta2;
    h(2, 2) = delta_p;
    h(0, 1) = h(1, 0) = 0.5 * omega_p1;
    h(1, 2) = h(2, 1) = 0.5 * omega_p2;
    return h;
}

inline TimeDependentHamiltonian two_photon_pump_hamiltonian(RealFunction omega_p1, RealFunction omega_p2,
                                                            double delta2, double delta_p) {
    return TimeDependentHamiltonian(lambda_basis(), [=](double t) {
        return two_photon_pump_matrix(omega_p1(t), omega_p2(t), delta2, delta_p);
    });
}

/// Second-order quantities of the eliminated level 1.
struct StarkShifts {
    double omega_p_eff = 0.0;  // effective 0-2 Rabi frequency
    double s1 = 0.0;           // shift of |0>
    double s2 = 0.0;           // shift of |2>

    /// Net displacement of |1> relative to |0> seen by the Stokes two-photon resonance.
    double two_photon_shift() const { return pulses::stark_compensation_rate(s1, s2); }
};

inline StarkShifts stark_shifts(double omega_p1, double omega_p2, double delta2, double delta_p) {
    if (delta2 == 0.0) {
        throw ParameterError("stark_shifts: delta2 = 0, the pump must be well detuned from one-photon resonance");
    }
    if (delta2 == delta_p) {
        throw ParameterError(
            "stark_shifts: delta2 = delta_p, the pump must be well detuned from one-photon resonance");
    }
    return {-omega_p1 * omega_p2 / (2.0 * delta2), -omega_p1 * omega_p1 / (4.0 * delta2),
            -omega_p2 * omega_p2 / (4.0 * (delta2 - delta_p))};
}

/// Averaged (coarse-grained) Hamiltonian with level 1 eliminated from the pump
/// path and a phase-modulated Stokes field on 1-2.
///
/// Entries: (0,2) omega_p_eff/2, (1,2) omega_s/2, (1,1) delta - (2 S1 + S2) + phidot,
/// (2,2) delta_p.
inline Matrix average_matrix(double omega_p1, double omega_p2, double omega_s, double delta2, double delta,
                             double delta_p, double phidot) {
    const StarkShifts s = stark_shifts(omega_p1, omega_p2, delta2, delta_p);
    Matrix h = Matrix::Zero(3, 3);
    h(0, 2) = h(2, 0) = 0.5 * s.omega_p_eff;
    h(1, 2) = h(2, 1) = 0.5 * omega_s;
    h(1, 1) = delta - s.two_photon_shift() + phidot;
    h(2, 2) = delta_p;
    return h;
}

}  // namespace stirap::lambda
