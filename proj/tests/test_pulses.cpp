#include <gtest/gtest.h>

#include "oracles.hpp"
#include "stirap/pulses/envelope.hpp"
#include "stirap/pulses/phase.hpp"
#include "stirap/pulses/schedule.hpp"

using namespace stirap;
using namespace stirap::pulses;

TEST(Envelope, GaussianPairCentersAndPeaks) {
    // Stokes first: Stokes peaks at -tau, pump at +tau.
    const auto ci = gaussian_pair(1.0, 1.0, 0.6, 1.0, PulseOrder::Counterintuitive);
    EXPECT_DOUBLE_EQ(ci.stokes(-0.6), 1.0);
    EXPECT_DOUBLE_EQ(ci.pump(0.6), 1.0);
    // Printed placement of the pair.
    const auto pr = gaussian_pair(1.0, 1.0, 0.6, 1.0, PulseOrder::Intuitive);
    EXPECT_DOUBLE_EQ(pr.stokes(0.6), 1.0);
    EXPECT_DOUBLE_EQ(pr.pump(-0.6), 1.0);
    const auto k = gaussian_pair(2.0, 0.5, 0.6, 1.0);
    EXPECT_DOUBLE_EQ(k.pump.peak(), 1.0);
    EXPECT_NEAR(k.stokes(-0.6 + 1.0), 2.0 * std::exp(-1.0), 1e-15);
}

TEST(Envelope, RejectsBadWidth) {
    EXPECT_THROW(Envelope(Gaussian{1.0, 0.0, 0.0}), ParameterError);
    EXPECT_THROW(Envelope(TanhPair{1.0, 1.0, -1.0}), ParameterError);
    EXPECT_THROW(gaussian_pair(1.0, 1.0, 0.6, -2.0), ParameterError);
}

TEST(Envelope, ReversalAndScaling) {
    const Envelope e(Gaussian{1.5, 2.0, 0.7});
    for (double t : {-3.0, -1.0, 0.0, 0.4, 2.5}) {
        EXPECT_DOUBLE_EQ(e.reversed()(t), e(-t));
        EXPECT_DOUBLE_EQ(e.scaled(-2.0)(t), -2.0 * e(t));
        EXPECT_DOUBLE_EQ(e.reversed().reversed()(t), e(t));
    }
}

TEST(Envelope, TanhPairLimitsAndFlatStage) {
    const Envelope e(TanhPair{3.0, 10.0, 0.5});
    EXPECT_NEAR(e(-100.0), -3.0, 1e-12);
    EXPECT_NEAR(e(100.0), 3.0, 1e-12);
    EXPECT_NEAR(e(0.0), 0.0, 1e-15);
    EXPECT_LT(std::abs(e(5.0)), 1e-7);
}

TEST(Schedule, CStirapDetuningRatio) {
    const auto d = cstirap_detunings(1.0, 10.0, 1.2, 80.0, 24.0);
    for (double t = -300.0; t <= 300.0; t += 7.3) {
        if (std::abs(d.stokes(t)) > 1e-12) EXPECT_NEAR(d.pump(t) / d.stokes(t), 1.2, 1e-12);
    }
    EXPECT_NEAR(d.stokes(1e4), 10.0, 1e-12);
    EXPECT_THROW(cstirap_detunings(1.0, 10.0, 1.2, 80.0, 0.0), ParameterError);
}

TEST(Schedule, TwoPhotonDetuningIsDifference) {
    ControlSchedule s;
    s.set_single_photon_detunings([](double t) { return std::sin(t); }, [](double t) { return t * t; }, 0.05);
    for (double t : {-2.0, 0.0, 1.5}) EXPECT_DOUBLE_EQ(s.detuning("delta", t), std::sin(t) - t * t + 0.05);
    EXPECT_NO_THROW(s.validate({-1.0, 0.0, 1.0}));
    s.set_detuning("delta", [](double) { return 3.0; });
    EXPECT_THROW(s.validate({0.5}), ContractViolation);
}

TEST(Schedule, DriveToneField) {
    DriveTone tone(Envelope(Constant{2.0}), 3.0, {"0", "1"}, PhaseModulation([](double) { return 0.5; }, 0.0, 10.0));
    EXPECT_NEAR(tone.field(1.0), 2.0 * std::cos(3.0 + 0.5), 1e-12);
    EXPECT_THROW(DriveTone(Envelope(Constant{1.0}), -1.0, {"0", "1"}), ParameterError);
}

TEST(Phase, IntegralMatchesSimpsonOracle) {
    auto rate = [](double t) { return 0.3 * std::exp(-t * t / 40.0) + 0.01 * t; };
    const PhaseModulation p(rate, -50.0, 50.0, 2001);
    for (double t : {-50.0, -17.3, 0.0, 3.1, 49.0}) {
        const double ref = oracle::simpson(rate, -50.0, t, 20000);
        EXPECT_NEAR(p.phase(t), ref, 1e-9) << t;
    }
    EXPECT_DOUBLE_EQ(p.rate(2.0), rate(2.0));
    // Linear continuation outside the window.
    EXPECT_NEAR(p.phase(60.0) - p.phase(50.0), 10.0 * rate(50.0), 1e-12);
}

TEST(Phase, CompensationLawUsesTwiceS1PlusS2) {
    EXPECT_DOUBLE_EQ(stark_compensation_rate(0.3, -0.1), 0.5);
    const auto p = phase_from_shifts([](double) { return 0.25; }, [](double) { return -0.5; }, 0.0, 4.0, 11);
    EXPECT_NEAR(p.phase(4.0), 0.0, 1e-15);
    EXPECT_THROW(PhaseModulation([](double) { return 0.0; }, 1.0, 1.0), ParameterError);
}
