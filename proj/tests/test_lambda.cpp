#include <gtest/gtest.h>

#include "oracles.hpp"
#include "stirap/lambda/protocols.hpp"

#include <random>

using namespace stirap;
using namespace stirap::lambda;

namespace {

StirapConfig standard(double T = 20.0) {
    StirapConfig c;
    c.omega0 = 1.0;
    c.T = T;
    c.tau = 0.6 * T;
    c.points = 401;
    return c;
}

StirapConfig two_plus_one(AlwaysOn on) {
    StirapConfig c;
    TwoPlusOneFamily f;
    f.always_on = on;
    f.delta2 = 5.0;
    c.T = 50.0 / f.effective_peak();
    c.tau = 0.6 * c.T;
    c.family = f;
    return c;
}

StirapConfig cstirap() {
    StirapConfig c;
    c.T = 40.0;
    c.tau = 2.0 * c.T;
    CStirapFamily f;
    f.t_c = 0.8 * c.tau;
    f.tau_ch = 0.6 * c.T;
    c.family = f;
    c.points = 401;
    return c;
}

}  // namespace

TEST(LambdaSystem, DarkStateIsNullVector) {
    std::mt19937 rng(1);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int k = 0; k < 50; ++k) {
        const double op = u(rng), os = u(rng), dp = u(rng);
        const Matrix h = lambda_matrix(op, os, 0.0, dp);
        const auto d = dark_state(op, os);
        EXPECT_LT((h * d.amplitudes()).norm(), 1e-12);
    }
    EXPECT_THROW(dark_state(0.0, 0.0), ParameterError);
}

TEST(LambdaSystem, AutlerTownesMatchesEigenGap) {
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int k = 0; k < 50; ++k) {
        const double op = u(rng), os = u(rng), dp = u(rng);
        const Eigen::VectorXd e = Eigen::SelfAdjointEigenSolver<Matrix>(lambda_matrix(op, os, 0.0, dp)).eigenvalues();
        // Bright pair at (dp +- sqrt(...))/2, so the outer gap is the splitting.
        EXPECT_NEAR(e(2) - e(0), autler_townes(op, os, dp), 1e-10);
    }
}

TEST(LambdaSystem, SymmetryPointSelectionRules) {
    EXPECT_TRUE(LambdaSystem::symmetry_point(1.0, 2.0).at_symmetry_point());
    EXPECT_FALSE(LambdaSystem{}.at_symmetry_point());
}

TEST(TwoPhoton, StarkShiftsMatchExactEigenvalues) {
    const double op1 = 0.2, op2 = 0.3, d2 = 20.0;
    const auto s = stark_shifts(op1, op2, d2, 0.0);
    EXPECT_DOUBLE_EQ(s.omega_p_eff, -op1 * op2 / (2.0 * d2));
    // Off-resonant legs only: 0-1 shift of |0>.
    const Eigen::VectorXd e =
        Eigen::SelfAdjointEigenSolver<Matrix>(two_photon_pump_matrix(op1, 0.0, d2, 0.0)).eigenvalues();
    EXPECT_NEAR(e(0), s.s1, 1e-3 * std::abs(s.s1));
    const Eigen::VectorXd e2 =
        Eigen::SelfAdjointEigenSolver<Matrix>(two_photon_pump_matrix(0.0, op2, d2, 0.0)).eigenvalues();
    EXPECT_NEAR(e2(0), s.s2, 1e-3 * std::abs(s.s2));
    EXPECT_THROW(stark_shifts(1.0, 1.0, 0.0, 0.0), ParameterError);
    EXPECT_THROW(stark_shifts(1.0, 1.0, 0.5, 0.5), ParameterError);
}

TEST(TwoPhoton, CompensatedAverageMatrixHasNoNetShift) {
    const double op1 = 0.7, op2 = 1.3, d2 = 5.0, dp = 0.2;
    const auto s = stark_shifts(op1, op2, d2, dp);
    const Matrix h = average_matrix(op1, op2, 0.1, d2, 0.0, dp, 2.0 * s.s1 + s.s2);
    EXPECT_EQ(h(1, 1), Complex(0.0));
    const Matrix bare = average_matrix(op1, op2, 0.1, d2, 0.0, dp, 0.0);
    EXPECT_DOUBLE_EQ(bare(1, 1).real(), -(2.0 * s.s1 + s.s2));
}

TEST(Stirap, CounterintuitiveTransferAndDarkPassage) {
    const auto r = run_stirap({}, standard());
    EXPECT_GE(r.transfer_efficiency, 0.99);
    EXPECT_LE(r.peak_transient, 0.05);
    EXPECT_NEAR(r.final_sum(), 1.0, 1e-9);
    EXPECT_LT(r.scalars.at("max_norm_drift"), 1e-9);
}

TEST(Stirap, MatchesExponentialOracle) {
    auto c = standard();
    c.points = 13;
    const auto r = run_stirap({}, c);
    const auto pair = pulses::gaussian_pair(c.omega0, c.kappa_p, c.tau, c.T);
    const auto& t = r.trajectory->times();
    oracle::CVec psi0 = oracle::CVec::Zero(3);
    psi0(0) = 1.0;
    const auto ref = oracle::exp_propagate(
        [&](double s) { return oracle::CMat(lambda_matrix(pair.pump(s), pair.stokes(s), 0.0, 0.0)); }, psi0, t, 600);
    for (std::size_t k = 0; k < t.size(); ++k)
        EXPECT_LT((r.trajectory->states()[k].cwiseAbs2() - ref[k].cwiseAbs2()).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Stirap, IntuitiveOrderFails) {
    auto c = standard();
    c.order = PulseOrder::Intuitive;
    const auto r = run_stirap({}, c);
    EXPECT_LT(r.transfer_efficiency, 0.5);
    EXPECT_GT(r.peak_transient, 0.1);
}

TEST(Stirap, EfficiencyFallsWithTwoPhotonDetuning) {
    double last = 2.0;
    for (double dT : {0.0, 1.0, 2.0, 5.0}) {
        auto c = standard();
        c.delta = dT / c.T;
        const double e = run_stirap({}, c).transfer_efficiency;
        EXPECT_LT(e, last) << "|delta| T = " << dT;
        last = e;
    }
}

TEST(Stirap, TimeReversedReturnsPopulation) {
    auto c = standard();
    c.time_reversed = true;
    const auto r = run_stirap({}, c);
    EXPECT_EQ(r.target, "0");
    EXPECT_GE(r.transfer_efficiency, 0.99);
    // Reversal maps H(t) -> H(-t); the 0 <-> 1 transfer is the mirror image.
    const auto f = run_stirap({}, standard());
    EXPECT_NEAR(r.transfer_efficiency, f.transfer_efficiency, 1e-8);
}

TEST(Stirap, RejectsBadConfig) {
    auto c = standard();
    c.T = 0.0;
    EXPECT_THROW(run_stirap({}, c), ParameterError);
    EXPECT_THROW(run_stirap({}, cstirap()), ContractViolation);
}

TEST(StirapTwoPlusOne, AlwaysOnP2TracksEffectiveModel) {
    const auto r = run_stirap_2plus1({}, two_plus_one(AlwaysOn::P2));
    EXPECT_GE(r.transfer_efficiency, 0.9);
    ASSERT_TRUE(r.effective_deviation.has_value());
    EXPECT_LT(*r.effective_deviation, 0.05);
    EXPECT_LT(r.scalars.at("max_norm_drift"), 1e-9);
    ASSERT_TRUE(r.effective_trajectory);
}

TEST(StirapTwoPlusOne, UncompensatedStarkShiftSpoilsTransfer) {
    auto c = two_plus_one(AlwaysOn::P2);
    std::get<TwoPlusOneFamily>(c.family).compensate = false;
    EXPECT_LT(run_stirap_2plus1({}, c).transfer_efficiency, 0.5);
}

TEST(CStirap, TransfersWithoutIntermediatePopulation) {
    const auto r = run_cstirap({}, cstirap());
    EXPECT_GE(r.transfer_efficiency, 0.9);
    EXPECT_LE(r.peak_transient, 0.05);
    EXPECT_TRUE(r.warnings.empty());
    EXPECT_LT(r.scalars.at("max_norm_drift"), 1e-9);
}

TEST(CStirap, WarnsOnWeakDetuning) {
    auto c = cstirap();
    std::get<CStirapFamily>(c.family).h_delta = 1.0;
    const auto r = run_cstirap({}, c);
    ASSERT_EQ(r.warnings.size(), 1u);
    EXPECT_EQ(r.warnings[0], kWeakDetuningWarning);
}

TEST(CStirap, DetuningScheduleIsConsistent) {
    const auto c = cstirap();
    const auto h = cstirap_hamiltonian(c);
    const auto& f = std::get<CStirapFamily>(c.family);
    const auto det = pulses::cstirap_detunings(c.omega0, f.h_delta, f.kappa_delta, c.tau, f.tau_ch);
    for (double t : {-150.0, -20.0, 0.0, 60.0, 190.0}) {
        const Matrix m = h.matrix(t);
        EXPECT_NEAR(m(2, 2).real(), det.pump(t), 1e-12);
        EXPECT_NEAR(m(1, 1).real(), det.pump(t) - det.stokes(t), 1e-12);
    }
}
