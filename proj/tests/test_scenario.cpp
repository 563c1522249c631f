#include <algorithm>
#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "fblsec/scenario.hpp"

using namespace fblsec;

namespace {

constexpr double kSecrecyRate = 0.57328469996294083846;

// Chi-square(1) CDF: P(X <= x) = erf(sqrt(x/2)).
double chi2_1_cdf(double x) { return x <= 0.0 ? 0.0 : std::erf(std::sqrt(0.5 * x)); }

Scenario make(double ab, double ae, double ba, double be, ScenarioTemplate t = {})
{
    return Scenario(Snr(ab), Snr(ae), Snr(ba), Snr(be), t);
}

} // namespace

TEST(SnrFromGeometry, UnitIdentity) { EXPECT_DOUBLE_EQ(snr_from_geometry({1.0, 1.0, 1.0}, 1.0).value(), 1.0); }

TEST(SnrFromGeometry, LinearScaling) { EXPECT_DOUBLE_EQ(snr_from_geometry({4.0, 2.0, 1.0}, 1.0).value(), 2.0); }

TEST(SnrFromGeometry, ZeroGainIsDegenerate)
{
    EXPECT_THROW(snr_from_geometry({1.0, 1.0, 1.0}, 0.0), DegenerateChannel);
    EXPECT_THROW(snr_from_fading_power({1.0, 1.0, 1.0}, 0.0), DegenerateChannel);
}

TEST(SnrFromGeometry, InvalidGeometry)
{
    EXPECT_THROW(snr_from_geometry({-1.0, 1.0, 1.0}, 1.0), std::invalid_argument);
    EXPECT_THROW(snr_from_geometry({1.0, 0.0, 1.0}, 1.0), std::invalid_argument);
}

TEST(SnrFromGeometry, MeanOverFadingIsOne)
{
    Rng rng(2024);
    const int n = 100000;
    std::vector<double> g(n);
    for (auto& v : g) {
        v = snr_from_geometry({1.0, 1.0, 1.0}, rng.normal()).value();
    }
    double mean = 0.0;
    for (double v : g) {
        mean += v;
    }
    mean /= n;
    double var = 0.0;
    for (double v : g) {
        var += (v - mean) * (v - mean);
    }
    const double se = std::sqrt(var / (n - 1) / n);
    EXPECT_LT(std::abs(mean - 1.0), 3.0 * se);
}

TEST(Rng, Deterministic)
{
    Rng a(7);
    Rng b(7);
    for (int i = 0; i < 100; ++i) {
        EXPECT_EQ(a.uniform(), b.uniform());
        EXPECT_EQ(a.normal(), b.normal());
    }
}

TEST(Rng, UniformInUnitInterval)
{
    Rng r(1);
    for (int i = 0; i < 10000; ++i) {
        const double u = r.uniform();
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
    }
}

TEST(SampleScenario, SameSeedSameScenario)
{
    const std::array<LinkGeometry, 4> geoms{};
    EXPECT_EQ(sample_scenario(geoms, 42, {}), sample_scenario(geoms, 42, {}));
    EXPECT_EQ(sample_scenario(geoms, 42, {}, FadingModel::complex_normal),
              sample_scenario(geoms, 42, {}, FadingModel::complex_normal));
}

TEST(SampleScenario, AdjacentSeedsDiffer)
{
    const std::array<LinkGeometry, 4> geoms{};
    for (std::uint64_t s = 0; s < 50; ++s) {
        const Scenario a = sample_scenario(geoms, s, {});
        const Scenario b = sample_scenario(geoms, s + 1, {});
        EXPECT_FALSE(a.gamma_ab == b.gamma_ab && a.gamma_ae == b.gamma_ae && a.gamma_ba == b.gamma_ba &&
                     a.gamma_be == b.gamma_be);
    }
}

TEST(SampleScenario, FadingPowerIsChiSquareOne)
{
    const std::array<LinkGeometry, 4> geoms{};
    const int n = 10000;
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) {
        x[i] = sample_scenario(geoms, static_cast<std::uint64_t>(i) + 1000, {}).gamma_ab.value();
    }
    std::sort(x.begin(), x.end());
    double d = 0.0;
    for (int i = 0; i < n; ++i) {
        const double f = chi2_1_cdf(x[i]);
        d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
    }
    // Asymptotic Kolmogorov-Smirnov critical value at alpha = 0.01.
    EXPECT_LT(d, 1.6276 / std::sqrt(static_cast<double>(n)));
}

TEST(SampleScenario, ComplexFadingHasUnitMean)
{
    Rng rng(5);
    const int n = 100000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        sum += draw_fading_power(rng, FadingModel::complex_normal);
    }
    // Exp(1): variance 1.
    EXPECT_LT(std::abs(sum / n - 1.0), 3.0 / std::sqrt(static_cast<double>(n)));
}

TEST(ScenarioTemplate, Validation)
{
    ScenarioTemplate t;
    t.M = 1;
    EXPECT_THROW(t.validate(), std::invalid_argument);
    t = {};
    t.eps_e_max = 1.0;
    EXPECT_THROW(t.validate(), std::invalid_argument);
    t = {};
    t.d_m1 = 0;
    EXPECT_THROW(make(3, 1, 3, 1, t), std::invalid_argument);
}

TEST(Scenario, Accessors)
{
    ScenarioTemplate t;
    t.d_m1 = 5;
    t.d_m2 = 7;
    t.eps_ab_max = 0.1;
    t.eps_ba_max = 0.2;
    const Scenario s = make(3, 1, 4, 2, t);
    EXPECT_EQ(s.legit(1).value(), 3.0);
    EXPECT_EQ(s.eave(2).value(), 2.0);
    EXPECT_EQ(s.message_bits(2), 7);
    EXPECT_EQ(s.reliability_max(1), 0.1);
    EXPECT_EQ(s.reliability_max(2), 0.2);
    EXPECT_TRUE(s.warnings().empty());
}

TEST(Scenario, DegenerateLinkWarns)
{
    const Scenario s = make(1, 2, 3, 1);
    EXPECT_TRUE(s.degenerate(1));
    EXPECT_FALSE(s.degenerate(2));
    ASSERT_EQ(s.warnings().size(), 1u);
}

TEST(SecrecyRate, HalfTargetsGiveSecrecyCapacity)
{
    const Scenario s = make(3, 1, 3, 1);
    EXPECT_NEAR(secrecy_rate_fbl(s, 1, 100.0, 0.5, 0.5), 1.0, 1e-15);
}

TEST(SecrecyRate, EqualSnrsGiveZero)
{
    const Scenario s = make(2, 2, 2, 2);
    EXPECT_NEAR(secrecy_rate_fbl(s, 2, 100.0, 0.5, 0.5), 0.0, 1e-15);
}

TEST(SecrecyRate, MatchesOracle)
{
    const Scenario s = make(3, 1, 3, 1);
    const double r = secrecy_rate_fbl(s, 1, 100.0, 0.01, 0.01);
    EXPECT_LT(r, 1.0);
    EXPECT_NEAR(r, kSecrecyRate, 1e-10);
}
