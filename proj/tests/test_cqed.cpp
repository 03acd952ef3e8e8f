#include <gtest/gtest.h>

#include "oracles.hpp"
#include "stirap/cqed/protocols.hpp"

#include <random>

using namespace stirap;
using namespace stirap::cqed;

namespace {

CavityAtomSystem cavity(double g = 0.0025, int n_max = 10) {
    CavityAtomSystem s;
    s.g = g;
    s.n_max = n_max;
    return s;
}

// c-STIRAP timing in units of Omega0 = 2g.
VStirapConfig vstirap(const CavityAtomSystem& s, bool full = false) {
    VStirapConfig c;
    auto& q = c.protocol;
    q.omega0 = 2.0 * s.g;
    q.T = 40.0 / q.omega0;
    q.tau = 2.0 * q.T;
    lambda::CStirapFamily f;
    f.t_c = 0.8 * q.tau;
    f.tau_ch = 0.6 * q.T;
    q.family = f;
    q.points = 201;
    c.full_space = full;
    return c;
}

}  // namespace

TEST(Cavity, DoubletSplittingFollowsSqrtN) {
    const auto s = cavity(0.01, 8);
    const auto h = jc_hamiltonian(s);
    const Eigen::VectorXd e = Eigen::SelfAdjointEigenSolver<Matrix>(h.matrix()).eigenvalues();
    // Resonant: ground 0, then pairs n omega_c +- g sqrt(n) from n = 1.
    EXPECT_NEAR(e(0), 0.0, 1e-12);
    for (int n = 1; n <= 8; ++n) {
        const double lo = e(2 * n - 1), hi = e(2 * n);
        EXPECT_NEAR(hi - lo, 2.0 * s.g * std::sqrt(n), 1e-12) << n;
        EXPECT_NEAR(0.5 * (hi + lo), n * s.omega_c, 1e-12);
    }
}

TEST(Cavity, SectorStokesCoupling) {
    const auto s = cavity(0.03, 6);
    auto zero = [](double) { return 0.0; };
    for (int n = 0; n < 6; ++n) {
        const Matrix m = vstirap_sector_hamiltonian(s, n, zero, zero, zero).matrix(0.0);
        EXPECT_DOUBLE_EQ(m(1, 2).real(), s.g * std::sqrt(n + 1.0));
    }
    EXPECT_THROW(vstirap_sector_hamiltonian(s, 6, zero, zero, zero), ParameterError);
}

TEST(Cavity, FullSpaceSectorsAreInvariant) {
    const auto s = cavity(0.02, 5);
    auto f = [](double t) { return 0.3 + 0.1 * t; };
    const auto h = vstirap_full_hamiltonian(s, f, f, [](double t) { return 0.2 * t; });
    const Matrix m = h.matrix(1.3);
    for (int n = 0; n < 5; ++n) EXPECT_EQ(leakage_coupling(m, h.basis(), sector_labels(n)), 0.0) << n;
    // The sector model is the projection.
    const Matrix p = project_subspace(h, sector_labels(2)).matrix(1.3);
    const Matrix q = vstirap_sector_hamiltonian(s, 2, f, f, [](double t) { return 0.2 * t; }).matrix(1.3);
    EXPECT_LT((p - q).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Cavity, AuxiliaryDetuningWarning) {
    auto s = cavity(0.1);
    s.eps_b = 1.5;
    EXPECT_EQ(s.warnings().size(), 1u);
    EXPECT_TRUE(cavity().warnings().empty());
    EXPECT_THROW(cavity(0.1, 1).check(), ParameterError);
}

TEST(VStirap, InjectsOnePhoton) {
    const auto s = cavity();
    const auto r = run_vstirap(s, vstirap(s));
    EXPECT_GE(r.transfer_efficiency, 0.9);
    EXPECT_GE(r.scalars.at("photon_number"), 0.9);
    EXPECT_LE(r.peak_transient, 0.05);
    EXPECT_LT(r.scalars.at("max_norm_drift"), 1e-9);
}

TEST(VStirap, FullSpaceAgreesWithSectorAndTruncation) {
    const auto s = cavity(0.0025, 4);
    const double sec = run_vstirap(s, vstirap(s)).transfer_efficiency;
    const double full = run_vstirap(s, vstirap(s, true)).transfer_efficiency;
    const auto big = cavity(0.0025, 9);
    const double full9 = run_vstirap(big, vstirap(big, true)).transfer_efficiency;
    EXPECT_NEAR(sec, full, 1e-8);
    EXPECT_NEAR(full, full9, 1e-8);
}

TEST(VStirap, RejectsSectorBeyondTruncation) {
    const auto s = cavity(0.0025, 3);
    auto c = vstirap(s);
    c.sector = 3;
    EXPECT_THROW(run_vstirap(s, c), ParameterError);
}

TEST(FockPumping, TwoCyclesReachFockTwo) {
    const auto s = cavity(0.0025, 4);
    const auto f = fock_pumping_cycle(s, 2, vstirap(s));
    ASSERT_EQ(f.distribution.size(), 5u);
    EXPECT_GE(f.distribution[2], 0.8);
    ASSERT_EQ(f.cycle_efficiency.size(), 2u);
    double sum = 0.0;
    for (double p : f.distribution) sum += p;
    EXPECT_NEAR(sum, 1.0, 1e-9);
    EXPECT_THROW(fock_pumping_cycle(s, 4, vstirap(s)), ParameterError);
    EXPECT_THROW(fock_pumping_cycle(s, -1, vstirap(s)), ParameterError);
}

TEST(FockPumping, RelabelKeepsPhotonDistribution) {
    std::mt19937 rng(3);
    std::normal_distribution<double> nd;
    const int n_max = 4;
    const Basis b = jc3_basis(n_max);
    Vector v(b.dim());
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(nd(rng), nd(rng));
    v.normalize();
    const Vector w = relabel_g_to_b(b, v, n_max);
    EXPECT_NEAR(w.norm(), 1.0, 1e-14);
    const auto p0 = photon_distribution(b, v, n_max), p1 = photon_distribution(b, w, n_max);
    for (int n = 0; n <= n_max; ++n) {
        EXPECT_NEAR(p0[n], p1[n], 1e-14);
        EXPECT_EQ(w(static_cast<Eigen::Index>(b.index_of(fock_label(n, 'g')))), Complex(0.0));
    }
}

TEST(FiveLevel, EffectiveCouplingValues) {
    EXPECT_DOUBLE_EQ(switchable_coupling(0.1, 0.2, 1.0), -0.01);
    EXPECT_DOUBLE_EQ(switchable_shift_g(0.1, 1.0), -0.01);
    EXPECT_DOUBLE_EQ(switchable_shift_p1(0.2, 1.0), -0.01);
    EXPECT_THROW(effective_five_level(cavity(0.1), [](double) { return 0.2; }, 0.0), ParameterError);
}

TEST(FiveLevel, EffectiveSpectrumMatchesExact) {
    // delta2 / g = 20
    const double g = 0.05, d2 = 1.0, op = 0.1;
    const Eigen::VectorXd ex = oracle::dense_eigenvalues(five_level_matrix(g, op, 0.0, d2).real());
    const Eigen::VectorXd ef = oracle::dense_eigenvalues(five_level_effective_matrix(g, op, 0.0, d2).real());
    const double tol = 0.05 * std::abs(switchable_shift_g(g, d2));
    for (int i = 0; i < 5; ++i) EXPECT_NEAR(ex(i), ef(i), tol) << i;
}

TEST(PhotonAbsorption, CompensationRestoresTransfer) {
    const auto s = cavity(0.1);
    PhotonAbsorptionConfig c;
    c.points = 201;
    const auto on = run_photon_absorption_stirap(s, c);
    c.compensate = false;
    const auto off = run_photon_absorption_stirap(s, c);
    EXPECT_GE(on.transfer_efficiency, 0.95);
    EXPECT_GT(on.transfer_efficiency, off.transfer_efficiency);
    EXPECT_LT(on.scalars.at("peak_1g"), 0.05);
}

TEST(PhotonAbsorption, EmissionIsTheReverse) {
    const auto s = cavity(0.1);
    PhotonAbsorptionConfig c;
    c.points = 201;
    c.absorption = false;
    const auto r = run_photon_absorption_stirap(s, c);
    EXPECT_EQ(r.target, "1b");
    EXPECT_GE(r.transfer_efficiency, 0.95);
}
