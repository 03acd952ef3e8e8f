#pragma once

#include "stirap/core/operator.hpp"
#include "stirap/pulses/phase.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace stirap::cqed {

using pulses::RealFunction;

/// Three-level atom {b, g, e} with energies {-eps_b, 0, eps} and one cavity mode.
struct CavityAtomSystem {
    double eps = 1.0;
    double eps_b = 5.0;
    double omega_c = 1.0;
    double g = 0.01;
    int n_max = 10;

    void check() const {
        if (n_max < 2) throw ParameterError("CavityAtomSystem: N_max must be at least 2");
    }

    std::vector<std::string> warnings() const {
        std::vector<std::string> w;
        if (g != 0.0 && std::abs(eps_b - omega_c) < 10.0 * std::abs(g)) {
            std::ostringstream os;
            os << "|eps_b - omega_c| / g = " << std::abs(eps_b - omega_c) / std::abs(g)
               << " < 10: auxiliary level not well detuned from the cavity";
            w.push_back(os.str());
        }
        return w;
    }
};

inline std::string fock_label(int n, char atom) { return std::to_string(n) + atom; }

/// {0g, 0e, 1g, 1e, ...} up to N_max photons.
inline Basis jc_basis(int n_max) {
    std::vector<std::string> names;
    for (int n = 0; n <= n_max; ++n) {
        names.push_back(fock_label(n, 'g'));
        names.push_back(fock_label(n, 'e'));
    }
    return Basis(names);
}

/// {0b, 0g, 0e, 1b, 1g, 1e, ...} up to N_max photons.
inline Basis jc3_basis(int n_max) {
    std::vector<std::string> names;
    for (int n = 0; n <= n_max; ++n) {
        names.push_back(fock_label(n, 'b'));
        names.push_back(fock_label(n, 'g'));
        names.push_back(fock_label(n, 'e'));
    }
    return Basis(names);
}

namespace detail {

inline Eigen::Index at(const Basis& b, int n, char atom) {
    return static_cast<Eigen::Index>(b.index_of(fock_label(n, atom)));
}

inline void fill_jc(Matrix& h, const Basis& b, const CavityAtomSystem& s) {
    for (int n = 0; n <= s.n_max; ++n) {
        h(at(b, n, 'g'), at(b, n, 'g')) = n * s.omega_c;
        h(at(b, n, 'e'), at(b, n, 'e')) = n * s.omega_c + s.eps;
        if (n >= 1) {
            const double c = s.g * std::sqrt(static_cast<double>(n));
            h(at(b, n, 'g'), at(b, n - 1, 'e')) = c;
            h(at(b, n - 1, 'e'), at(b, n, 'g')) = c;
        }
    }
}

}  // namespace detail

inline HermitianOperator jc_hamiltonian(const CavityAtomSystem& s) {
    s.check();
    const Basis b = jc_basis(s.n_max);
    Matrix h = Matrix::Zero(b.dim(), b.dim());
    detail::fill_jc(h, b, s);
    return HermitianOperator(b, h);
}

/// JC block plus the uncoupled ladder |n b> at n omega_c - eps_b.
inline HermitianOperator jc3_hamiltonian(const CavityAtomSystem& s) {
    s.check();
    const Basis b = jc3_basis(s.n_max);
    Matrix h = Matrix::Zero(b.dim(), b.dim());
    detail::fill_jc(h, b, s);
    for (int n = 0; n <= s.n_max; ++n) h(detail::at(b, n, 'b'), detail::at(b, n, 'b')) = n * s.omega_c - s.eps_b;
    return HermitianOperator(b, h);
}

/// Lab-frame jc3 plus a pump Omega_p(t) cos(omega_p t) on b-e for every photon number.
inline TimeDependentHamiltonian jc3_driven_lab(const CavityAtomSystem& s, RealFunction omega_p, double omega_p_freq) {
    const HermitianOperator h0 = jc3_hamiltonian(s);
    const Basis b = h0.basis();
    std::vector<std::pair<Eigen::Index, Eigen::Index>> links;
    for (int n = 0; n <= s.n_max; ++n) links.emplace_back(detail::at(b, n, 'b'), detail::at(b, n, 'e'));
    return TimeDependentHamiltonian(b, [m0 = h0.matrix(), links, omega_p, omega_p_freq](double t) {
        Matrix h = m0;
        const double a = omega_p(t) * std::cos(omega_p_freq * t);
        for (auto [r, c] : links) {
            h(r, c) += a;
            h(c, r) += a;
        }
        return h;
    });
}

/// Pump-and-cavity rotating frame of the full truncated space after the RWA:
/// |n b> at 0, |m g> at delta(t) = delta_p - delta_s, |n e> at delta_p, couplings
/// g sqrt(m) on |m g>-|m-1 e> and Omega_p/2 on |n b>-|n e>.
inline TimeDependentHamiltonian vstirap_full_hamiltonian(const CavityAtomSystem& s, RealFunction omega_p,
                                                         RealFunction delta_p, RealFunction delta_s) {
    s.check();
    const Basis b = jc3_basis(s.n_max);
    const int nmax = s.n_max;
    const double g = s.g;
    return TimeDependentHamiltonian(b, [b, nmax, g, omega_p, delta_p, delta_s](double t) {
        const double dp = delta_p(t), d = dp - delta_s(t), op = 0.5 * omega_p(t);
        Matrix h = Matrix::Zero(b.dim(), b.dim());
        for (int n = 0; n <= nmax; ++n) {
            const auto ib = detail::at(b, n, 'b'), ig = detail::at(b, n, 'g'), ie = detail::at(b, n, 'e');
            h(ig, ig) = d;
            h(ie, ie) = dp;
            h(ib, ie) = h(ie, ib) = op;
            if (n >= 1) {
                const auto je = detail::at(b, n - 1, 'e');
                h(ig, je) = h(je, ig) = g * std::sqrt(static_cast<double>(n));
            }
        }
        return h;
    });
}

inline std::vector<std::string> sector_labels(int n) {
    return {fock_label(n, 'b'), fock_label(n + 1, 'g'), fock_label(n, 'e')};
}

/// Lambda-form sector {|n b>, |n+1 g>, |n e>} with Stokes Rabi frequency 2 g sqrt(n+1).
inline TimeDependentHamiltonian vstirap_sector_hamiltonian(const CavityAtomSystem& s, int n, RealFunction omega_p,
                                                           RealFunction delta_p, RealFunction delta_s) {
    if (n < 0 || n + 1 > s.n_max) {
        std::ostringstream os;
        os << "vstirap_sector_hamiltonian: sector n = " << n << " needs n + 1 <= N_max = " << s.n_max;
        throw ParameterError(os.str());
    }
    const double os = 2.0 * s.g * std::sqrt(static_cast<double>(n + 1));
    return TimeDependentHamiltonian(Basis(sector_labels(n)), [=](double t) {
        const double dp = delta_p(t);
        Matrix h = Matrix::Zero(3, 3);
        h(1, 1) = dp - delta_s(t);
        h(2, 2) = dp;
        h(0, 2) = h(2, 0) = 0.5 * omega_p(t);
        h(1, 2) = h(2, 1) = 0.5 * os;
        return h;
    });
}

/// Sector with the b-e pump replaced by a two-photon pump through |n g>:
/// basis {|n b>, |n g>, |n e>, |n+1 g>}, |n g> detuned by delta2.
inline TimeDependentHamiltonian vstirap_two_photon_sector_hamiltonian(const CavityAtomSystem& s, int n,
                                                                      RealFunction omega_p1, RealFunction omega_p2,
                                                                      double delta2, RealFunction delta_p,
                                                                      RealFunction delta_s) {
    if (n < 0 || n + 1 > s.n_max) throw ParameterError("vstirap_two_photon_sector_hamiltonian: sector beyond N_max");
    const double gc = s.g * std::sqrt(static_cast<double>(n + 1));
    Basis b(std::vector<std::string>{fock_label(n, 'b'), fock_label(n, 'g'), fock_label(n, 'e'), fock_label(n + 1, 'g')});
    return TimeDependentHamiltonian(b, [=](double t) {
        const double dp = delta_p(t);
        Matrix h = Matrix::Zero(4, 4);
        h(1, 1) = delta2;
        h(2, 2) = dp;
        h(3, 3) = dp - delta_s(t);
        h(0, 1) = h(1, 0) = 0.5 * omega_p1(t);
        h(1, 2) = h(2, 1) = 0.5 * omega_p2(t);
        h(2, 3) = h(3, 2) = gc;
        return h;
    });
}

// ---------------------------------------------------------------------------
// Five-level switchable coupling

inline Basis five_level_basis() { return Basis{"0g", "0e", "1b", "1g", "1e"}; }

/// Static detuning knobs of the five-level frame. With both zero the diagonal is
/// (0, 0, 0, delta2, delta2).
struct FiveLevelDetunings {
    double stokes = 0.0;  // shifts 0e, 1g by this and 1e by twice it
    double b = 0.0;       // shifts 1b
};

inline Matrix five_level_matrix(double g, double omega_p1, double omega_s, double delta2, FiveLevelDetunings det = {},
                                double p1_phase = 0.0) {
    Matrix h = Matrix::Zero(5, 5);
    h(1, 1) = det.stokes;
    h(2, 2) = det.b;
    h(3, 3) = delta2 + det.stokes;
    h(4, 4) = delta2 + 2.0 * det.stokes;
    h(0, 1) = h(1, 0) = 0.5 * omega_s;
    h(3, 4) = h(4, 3) = 0.5 * omega_s;
    h(1, 3) = h(3, 1) = g;
    const Complex p = 0.5 * omega_p1 * std::exp(-I * p1_phase);
    h(2, 3) = p;
    h(3, 2) = std::conj(p);
    return h;
}

inline TimeDependentHamiltonian five_level_hamiltonian(const CavityAtomSystem& s, RealFunction omega_p1,
                                                       RealFunction omega_s, double delta2) {
    const double g = s.g;
    return TimeDependentHamiltonian(five_level_basis(), [=](double t) {
        return five_level_matrix(g, omega_p1(t), omega_s(t), delta2);
    });
}

struct EffectiveCouplings {
    double s_g = 0.0;
    RealFunction s_p1;
    RealFunction g_tilde;
};

inline double switchable_shift_g(double g, double delta2) { return -g * g / delta2; }
inline double switchable_shift_p1(double omega_p1, double delta2) { return -omega_p1 * omega_p1 / (4.0 * delta2); }
inline double switchable_coupling(double g, double omega_p1, double delta2) { return -g * omega_p1 / (2.0 * delta2); }

inline Matrix five_level_effective_matrix(double g, double omega_p1, double omega_s, double delta2) {
    const double sg = switchable_shift_g(g, delta2), sp = switchable_shift_p1(omega_p1, delta2);
    const double gt = switchable_coupling(g, omega_p1, delta2);
    Matrix h = Matrix::Zero(5, 5);
    h(0, 1) = h(1, 0) = 0.5 * omega_s;
    h(1, 1) = sg;
    h(1, 2) = h(2, 1) = gt;
    h(2, 2) = sp;
    h(3, 3) = delta2 - (sg + sp);
    h(3, 4) = h(4, 3) = 0.5 * omega_s;
    h(4, 4) = delta2;
    return h;
}

struct EffectiveFiveLevel {
    TimeDependentHamiltonian hamiltonian;
    EffectiveCouplings couplings;
};

/// Level |1g> adiabatically eliminated from the pump and cavity paths.
inline EffectiveFiveLevel effective_five_level(const CavityAtomSystem& s, RealFunction omega_p1, double delta2,
                                               RealFunction omega_s = [](double) { return 0.0; }) {
    if (delta2 == 0.0) throw ParameterError("effective_five_level: delta2 = 0, level 1g cannot be eliminated");
    const double g = s.g;
    EffectiveCouplings c;
    c.s_g = switchable_shift_g(g, delta2);
    c.s_p1 = [=](double t) { return switchable_shift_p1(omega_p1(t), delta2); };
    c.g_tilde = [=](double t) { return switchable_coupling(g, omega_p1(t), delta2); };
    TimeDependentHamiltonian h(five_level_basis(), [=](double t) {
        return five_level_effective_matrix(g, omega_p1(t), omega_s(t), delta2);
    });
    return {std::move(h), std::move(c)};
}

}  // namespace stirap::cqed
