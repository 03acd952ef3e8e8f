#pragma once

#include "stirap/core/eigen.hpp"
#include "stirap/core/operator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

namespace stirap::usc {

/// Two-level atom {g, e} plus an auxiliary |b> at -eps_b, coupled to one mode
/// with the full dipole interaction.
struct RabiSystem {
    double eps = 1.0;
    double eps_b = 5.0;
    double omega_c = 1.0;
    double g = 0.2;
    int n_max = 30;

    void check() const {
        if (n_max < 2) throw ParameterError("RabiSystem: N_max must be at least 2");
    }

    std::vector<std::string> warnings() const {
        std::vector<std::string> w;
        if (std::abs(eps_b) < 3.0 * std::abs(omega_c)) {
            std::ostringstream os;
            os << "eps_b / omega_c = " << eps_b / omega_c << " < 3: auxiliary level not far detuned from the cavity";
            w.push_back(os.str());
        }
        return w;
    }

    RabiSystem with_g(double gg) const {
        RabiSystem s = *this;
        s.g = gg;
        return s;
    }
    RabiSystem with_n_max(int n) const {
        RabiSystem s = *this;
        s.n_max = n;
        return s;
    }
};

inline std::string fock(int n, char atom) { return std::to_string(n) + atom; }

/// {0g, 0e, 1g, 1e, ...}
inline Basis rabi_block_basis(int n_max) {
    std::vector<std::string> names;
    for (int n = 0; n <= n_max; ++n) {
        names.push_back(fock(n, 'g'));
        names.push_back(fock(n, 'e'));
    }
    return Basis(names);
}

/// {0b, 0g, 0e, 1b, ...}
inline Basis rabi3_basis(int n_max) {
    std::vector<std::string> names;
    for (int n = 0; n <= n_max; ++n) {
        names.push_back(fock(n, 'b'));
        names.push_back(fock(n, 'g'));
        names.push_back(fock(n, 'e'));
    }
    return Basis(names);
}

namespace detail {

/// Rabi coupling written into any basis with "ng"/"ne" labels.
inline void fill_rabi(Matrix& h, const Basis& b, const RabiSystem& s, bool counter_rotating = true) {
    auto at = [&](int n, char a) { return static_cast<Eigen::Index>(b.index_of(fock(n, a))); };
    for (int n = 0; n <= s.n_max; ++n) {
        h(at(n, 'g'), at(n, 'g')) = n * s.omega_c;
        h(at(n, 'e'), at(n, 'e')) = n * s.omega_c + s.eps;
        if (n >= 1) {
            const double c = s.g * std::sqrt(static_cast<double>(n));
            // a^dagger |g><e| : |n-1 e> -> |n g>
            h(at(n, 'g'), at(n - 1, 'e')) += c;
            h(at(n - 1, 'e'), at(n, 'g')) += c;
            // a^dagger |e><g| : |n-1 g> -> |n e>
            if (counter_rotating) {
                h(at(n, 'e'), at(n - 1, 'g')) += c;
                h(at(n - 1, 'g'), at(n, 'e')) += c;
            }
        }
    }
}

}  // namespace detail

/// Rabi model on the {g, e} block.
inline HermitianOperator rabi_block_hamiltonian(const RabiSystem& s, bool counter_rotating = true) {
    s.check();
    const Basis b = rabi_block_basis(s.n_max);
    Matrix h = Matrix::Zero(b.dim(), b.dim());
    detail::fill_rabi(h, b, s, counter_rotating);
    return HermitianOperator(b, h);
}

/// Rabi block plus the uncoupled ladder |n b> at n omega_c - eps_b.
inline HermitianOperator rabi_hamiltonian(const RabiSystem& s) {
    s.check();
    const Basis b = rabi3_basis(s.n_max);
    Matrix h = Matrix::Zero(b.dim(), b.dim());
    detail::fill_rabi(h, b, s);
    for (int n = 0; n <= s.n_max; ++n) {
        const auto i = static_cast<Eigen::Index>(b.index_of(fock(n, 'b')));
        h(i, i) = n * s.omega_c - s.eps_b;
    }
    return HermitianOperator(b, h);
}

/// exp(i pi [a^dagger a + |e><e|]) on the {g, e} block.
inline Matrix parity_operator(int n_max) {
    const Basis b = rabi_block_basis(n_max);
    Matrix p = Matrix::Zero(b.dim(), b.dim());
    for (int n = 0; n <= n_max; ++n) {
        p(2 * n, 2 * n) = (n % 2 == 0) ? 1.0 : -1.0;
        p(2 * n + 1, 2 * n + 1) = (n % 2 == 0) ? -1.0 : 1.0;
    }
    return p;
}

inline EigenSystem rabi_eigensystem(const RabiSystem& s) { return eigendecompose(rabi_block_hamiltonian(s)); }

// ---------------------------------------------------------------------------
// Dressed spectrum

enum class LevelKind { Ladder, Dressed };

struct DressedLevel {
    double energy = 0.0;
    LevelKind kind = LevelKind::Dressed;
    int index = 0;  // n for |n b>, j for Phi_j

    std::string label() const { return kind == LevelKind::Ladder ? fock(index, 'b') : "Phi" + std::to_string(index); }
};

/// Merged, ascending list of b-ladder and Rabi levels, truncated to `count`.
inline std::vector<DressedLevel> dressed_levels(const RabiSystem& s, const RealVector& rabi_values, std::size_t count) {
    std::vector<DressedLevel> lv;
    for (int n = 0; n <= s.n_max; ++n) lv.push_back({n * s.omega_c - s.eps_b, LevelKind::Ladder, n});
    for (Eigen::Index j = 0; j < rabi_values.size(); ++j)
        lv.push_back({rabi_values(j), LevelKind::Dressed, static_cast<int>(j)});
    std::stable_sort(lv.begin(), lv.end(), [](const DressedLevel& a, const DressedLevel& b) {
        if (a.energy != b.energy) return a.energy < b.energy;
        return a.kind == LevelKind::Ladder && b.kind == LevelKind::Dressed;
    });
    if (count < lv.size()) lv.resize(count);
    return lv;
}

struct DressedSpectrum {
    std::vector<double> g;
    /// energies[k][i]: i-th level at g[k], ascending.
    std::vector<std::vector<double>> energies;
    std::vector<std::vector<LevelKind>> kinds;
    /// Largest energy change of the reported levels when N_max grows by 5.
    double truncation_error = 0.0;
};

/// Spectrum of the b-extended Rabi model on a grid of g values.
/// The b ladder is uncoupled, so the two blocks are diagonalized separately.
inline DressedSpectrum spectrum_vs_g(const RabiSystem& s, const std::vector<double>& g_grid, std::size_t levels = 16,
                                     double tol = 1e-8) {
    s.check();
    DressedSpectrum out;
    for (double gr : g_grid) {
        if (!(gr >= 0.0 && gr <= 1.0)) throw ParameterError("spectrum_vs_g: g/omega_c must lie in [0, 1]");
        const double g = gr * s.omega_c;
        const RabiSystem sg = s.with_g(g);
        const auto lv = dressed_levels(sg, rabi_eigensystem(sg).values, levels);
        const RabiSystem big = sg.with_n_max(s.n_max + 5);
        const auto ref = dressed_levels(big, rabi_eigensystem(big).values, levels);
        std::vector<double> e;
        std::vector<LevelKind> k;
        for (std::size_t i = 0; i < lv.size(); ++i) {
            e.push_back(lv[i].energy);
            k.push_back(lv[i].kind);
            out.truncation_error = std::max(out.truncation_error, std::abs(lv[i].energy - ref[i].energy));
        }
        out.g.push_back(gr);
        out.energies.push_back(std::move(e));
        out.kinds.push_back(std::move(k));
    }
    if (out.truncation_error > tol * std::max(1.0, std::abs(s.omega_c))) {
        std::ostringstream os;
        os << "spectrum_vs_g: levels move by " << out.truncation_error
           << " when N_max grows by 5; raise N_max or report fewer levels";
        throw NumericalError(os.str());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Amplitudes of the dressed states

struct GroundStateAmplitudes {
    std::vector<int> states;               // Rabi eigenstate indices j
    std::vector<std::vector<double>> c;    // c[j][n] = <n g|Phi_j>
    std::vector<std::vector<double>> d;    // d[j][n] = <n e|Phi_j>
};

/// Amplitudes of Phi_j; j = 0 is the ground state, j = 1, 2 the lowest doublet (1-, 1+).
inline GroundStateAmplitudes ground_state_amplitudes(const RabiSystem& s, const std::vector<int>& states = {0, 1, 2}) {
    const EigenSystem es = rabi_eigensystem(s);
    GroundStateAmplitudes out;
    for (int j : states) {
        if (j < 0 || j >= es.values.size()) throw ParameterError("ground_state_amplitudes: state index out of range");
        std::vector<double> c, d;
        for (int n = 0; n <= s.n_max; ++n) {
            // Real Hamiltonian and phase convention give real eigenvectors.
            c.push_back(es.vectors(2 * n, j).real());
            d.push_back(es.vectors(2 * n + 1, j).real());
        }
        out.states.push_back(j);
        out.c.push_back(std::move(c));
        out.d.push_back(std::move(d));
    }
    return out;
}

/// kappa_p for STIRAP through Phi_0: c02 / c00.
inline double optimal_pump_attenuation(const RabiSystem& s) {
    const auto a = ground_state_amplitudes(s, {0});
    return a.c[0][2] / a.c[0][0];
}

/// Attenuation ratios d_{j,2} / d_{j,0} for the lowest doublet Phi_{1-}, Phi_{1+}.
inline std::pair<double, double> v_scheme_attenuation(const RabiSystem& s) {
    const auto a = ground_state_amplitudes(s, {1, 2});
    return {a.d[0][2] / a.d[0][0], a.d[1][2] / a.d[1][0]};
}

}  // namespace stirap::usc
