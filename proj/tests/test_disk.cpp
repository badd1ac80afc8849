#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "qorder/disk.hpp"
#include "qorder/specfun.hpp"
#include "oracles.hpp"

using namespace qorder;
using namespace qorder::disk;

TEST(PhaseShift, ZeroAtOriginAndAtJ0Root)
{
    EXPECT_EQ(phase_shift(3, 0.0).delta, 0.0);
    // Root located on the long-double series oracle.
    long double lo = 2.3L;
    long double hi = 2.5L;
    for (int i = 0; i < 200; ++i)
    {
        long double mid = (lo + hi) / 2;
        (test::series_j(0, mid) > 0 ? lo : hi) = mid;
    }
    EXPECT_LT(std::abs(std::sin(phase_shift(0, static_cast<double>(lo)).delta)), 1e-6);
    EXPECT_LT(std::abs(std::sin(phase_shift(0, 2.404825557).delta)), 1e-6);
}

TEST(PhaseShift, MatchesIndependentOracle)
{
    for (int m : {0, 1, 2, 5})
    {
        for (double ka : {0.05, 0.8, 3.0, 10.0, 27.0})
        {
            EXPECT_NEAR(phase_shift(m, ka).delta, test::oracle_phase_shift(m, ka), 1e-9)
                << "m=" << m << " ka=" << ka;
        }
    }
}

TEST(PhaseShift, SmallKaDipole)
{
    double const expected = pi * 0.005 * 0.005;
    EXPECT_NEAR(expected, 7.854e-5, 1e-8);
    EXPECT_NEAR(phase_shift(1, 0.01).delta / expected, 1.0, 0.02);
}

TEST(PhaseShift, BatchAgreesWithSingle)
{
    auto const all = phase_shifts(12, 17.3);
    ASSERT_EQ(all.size(), 13u);
    for (auto const& s : all)
    {
        EXPECT_NEAR(s.delta, phase_shift(s.m, 17.3).delta, 1e-12);
        EXPECT_EQ(s.ka, 17.3);
    }
}

TEST(PhaseShift, TangentInvariantAndContinuity)
{
    for (int m : {0, 1, 3, 8})
    {
        double previous = 0;
        for (int i = 1; i <= 200; ++i)
        {
            double const ka = branch_step * i;
            double const delta = phase_shift(m, ka).delta;
            double const ratio = specfun::bessel_j(m, ka) / specfun::bessel_y(m, ka);
            EXPECT_LT(std::abs(std::tan(delta) + ratio), 1e-8 * (1 + std::abs(ratio)))
                << "m=" << m << " ka=" << ka;
            EXPECT_LT(std::abs(delta - previous), pi / 2);
            previous = delta;
        }
    }
}

TEST(RegimeForms, SmallKa)
{
    // arctan(pi / (2 ln 1000))
    EXPECT_NEAR(small_ka_shift(0, 1e-3), 0.22359, 1e-3);
    EXPECT_THROW(small_ka_shift(0, 0.1), regime_error);
    EXPECT_THROW(small_ka_shift(1, 0.0), regime_error);
    for (double ka : {1e-6, 1e-4, 5e-3})
    {
        EXPECT_NEAR(phase_shift(0, ka).delta / small_ka_shift(0, ka), 1.0, 0.05) << ka;
        EXPECT_NEAR(phase_shift(1, ka).delta / small_ka_shift(1, ka), 1.0, 0.05) << ka;
        EXPECT_NEAR(phase_shift(2, ka).delta / small_ka_shift(2, ka), 1.0, 0.05) << ka;
    }
    double const tan0 = std::tan(phase_shift(0, 1e-3).delta);
    EXPECT_NEAR(tan0 / (-pi / (2 * std::log(1e-3))), 1.0, 0.05);
}

TEST(RegimeForms, LargeKaFormula)
{
    EXPECT_DOUBLE_EQ(large_ka_shift(0, 200), 200 - pi / 4);
    EXPECT_THROW(large_ka_shift(2, 20), regime_error);
    EXPECT_NO_THROW(large_ka_shift(2, 20.5));
}

TEST(RegimeForms, LargeKaBranchSitsAQuarterTurnFromFormula)
{
    // With tan(delta) = -J/N the Hankel asymptotics give
    // delta -> ka - (pi/2)(m - 1/2), a quarter period from the formula.
    for (auto [m, ka] : {std::pair{0, 100.0}, {2, 300.0}, {1, 150.0}, {4, 400.0}})
    {
        double const branch = phase_shift(m, ka).delta;
        EXPECT_NEAR(distance_mod_pi(branch, large_ka_shift(m, ka)), pi / 2, 0.05)
            << "m=" << m;
        EXPECT_LT(distance_mod_pi(branch, ka - (pi / 2) * (m - 0.5)), 0.05) << "m=" << m;
    }
    EXPECT_NEAR(phase_shift(0, 100).delta, 100.784, 2e-3);
}

TEST(ShiftRatio, Limits)
{
    EXPECT_LT(shift_ratio(1e-3), 0.1);
    EXPECT_NEAR(shift_ratio(100), 1.0, 0.02);
    double const r10 = shift_ratio(10);
    EXPECT_GT(r10, 0.8);
    EXPECT_LT(r10, 1.1);
    double const oracle
        = test::oracle_phase_shift(1, 10.0) / test::oracle_phase_shift(0, 10.0);
    EXPECT_NEAR(r10, oracle, 1e-9);
    EXPECT_NEAR(r10, 0.8592, 1e-3);
    EXPECT_THROW(shift_ratio(0), std::domain_error);
}

TEST(ShiftRatio, MonotoneAboveOne)
{
    double previous = shift_ratio(0.1);
    for (int i = 1; i <= 60; ++i)
    {
        double const ka = 0.1 * std::pow(1000.0, i / 60.0);
        double const value = shift_ratio(ka);
        EXPECT_GE(value, previous * 0.99) << ka;
        previous = std::max(previous, value);
    }
}

TEST(PartialWaveSum, Truncation)
{
    PartialWaveSum const pw(2.0, 5.0);
    EXPECT_GE(pw.m_max(), 10 + 8 * std::cbrt(10.0) + 10);
    EXPECT_EQ(pw.shifts().size(), static_cast<std::size_t>(pw.m_max()) + 1);
    EXPECT_FALSE(pw.truncation_warning());
    EXPECT_THROW(PartialWaveSum(0.0, 1.0), std::invalid_argument);
}

TEST(CrossSection, SmallKaIsotropicMagnitude)
{
    PartialWaveSum const pw(1.0, 1e-3);
    auto const profile = cross_section_profile(pw, 360);
    double lo = 1e300;
    double hi = 0;
    for (double v : profile.values)
    {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    EXPECT_LT(hi / lo, 1.05);
    double const expected = pi / (2 * std::pow(std::log(1e-3), 2));
    for (double theta : {0.0, 1.0, pi})
    {
        EXPECT_NEAR(differential_cross_section(theta, pw) / expected, 1.0, 0.1);
    }
    EXPECT_NEAR(total_cross_section(pw) / (pi * pi / std::pow(std::log(1e-3), 2)), 1.0,
                0.1);
}

TEST(CrossSection, BackscatterAtLargeKa)
{
    double const a = 50.0;
    PartialWaveSum const pw(1.0, a);
    // Mean over a small window at theta = pi smooths the interference ripple.
    int const n = 201;
    double mean = 0;
    for (int i = 0; i < n; ++i)
    {
        double const theta = pi - 0.2 + 0.4 * i / (n - 1);
        mean += differential_cross_section(theta, pw) / (a / 2 * std::sin(theta / 2));
    }
    mean /= n;
    EXPECT_NEAR(mean, 1.0, 0.15);
}

TEST(CrossSection, TotalApproachesTwiceDiameter)
{
    PartialWaveSum const pw(1.0, 200.0);
    EXPECT_NEAR(total_cross_section(pw) / (4 * 200.0), 1.0, 0.1);
}

TEST(CrossSection, TotalEqualsAngularIntegral)
{
    for (double ka : {1e-3, 0.5, 4.0, 30.0})
    {
        PartialWaveSum const pw(1.3, ka / 1.3);
        auto const profile = cross_section_profile(pw, 4 * static_cast<std::size_t>(pw.m_max()) + 16);
        EXPECT_NEAR(profile.total / total_cross_section(pw), 1.0, 1e-6) << ka;
        for (double v : profile.values)
        {
            EXPECT_GE(v, 0.0);
        }
    }
}

TEST(ShadowSharpness, Trend)
{
    PartialWaveSum const tiny(1.0, 1e-3);
    EXPECT_NEAR(shadow_sharpness(tiny), 0.5, 0.02);
    double const s5 = shadow_sharpness(PartialWaveSum(1.0, 5.0));
    double const s50 = shadow_sharpness(PartialWaveSum(1.0, 50.0));
    EXPECT_GT(s50, s5);
    for (double ka : {1e-3, 1.0, 5.0, 50.0})
    {
        PartialWaveSum const pw(1.0, ka);
        auto const h = hemisphere_fractions(pw);
        EXPECT_NEAR(h.forward + h.backward, 1.0, 1e-12);
        // Midpoint oracle over the backward half.
        int const n = 20000;
        double back = 0;
        for (int i = 0; i < n; ++i)
        {
            back += differential_cross_section(pi / 2 + pi * (i + 0.5) / n, pw);
        }
        back *= pi / n;
        EXPECT_NEAR(h.backward, back / total_cross_section(pw), 1e-6) << ka;
    }
}
