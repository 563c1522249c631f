#include <cmath>
#include <limits>
#include <stdexcept>

#include <gtest/gtest.h>

#include "fblsec/fbl_core.hpp"

using namespace fblsec;

namespace {

// Reference values from tests/oracles/fbl_oracle.py (mpmath, 50 digits).
constexpr double kQ1959964 = 0.024999999096442404302;
constexpr double kQ71582 = 4.0871620248131909788e-13;
constexpr double kQinv0025 = 1.9599639845400542355;
constexpr double kCapacity10 = 3.4594316186372972562;
constexpr double kDispersion01 = 0.17355371900826446281;
constexpr double kArg3_100_100 = 7.1587932980781161792;
constexpr double kEps3_100_100 = 4.0695148989333603403e-13;

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

} // namespace

TEST(QFunc, SymmetryPoint) { EXPECT_DOUBLE_EQ(q_func(0.0), 0.5); }

TEST(QFunc, MatchesOracle)
{
    EXPECT_NEAR(q_func(1.959964), kQ1959964, 1e-9);
    EXPECT_LT(rel_err(q_func(1.959964), kQ1959964), 1e-13);
    EXPECT_LT(rel_err(q_func(7.1582), kQ71582), 1e-12);
}

TEST(QFunc, TailComplement)
{
    for (double x : {-8.0, -1.0, 0.3, 2.0, 12.0}) {
        EXPECT_NEAR(q_func(x) + q_func(-x), 1.0, 1e-15);
    }
}

TEST(QFunc, RejectsNonFinite)
{
    EXPECT_THROW(q_func(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
    EXPECT_THROW(q_func(std::numeric_limits<double>::infinity()), std::domain_error);
}

TEST(QInv, Median) { EXPECT_DOUBLE_EQ(q_inv(0.5), 0.0); }

TEST(QInv, MatchesOracle) { EXPECT_LT(rel_err(q_inv(0.025), kQinv0025), 1e-14); }

TEST(QInv, RoundTrip) { EXPECT_NEAR(q_inv(q_func(3.7)), 3.7, 1e-10); }

TEST(QInv, RoundTripLogGrid)
{
    double worst = 0.0;
    for (double lp = -10.0; lp <= -1e-9; lp += 0.01) {
        const double p = std::pow(10.0, lp);
        worst = std::max(worst, rel_err(q_func(q_inv(p)), p));
        const double r = 1.0 - p;
        if (r < 1.0) {
            worst = std::max(worst, rel_err(q_func(q_inv(r)), r));
        }
    }
    EXPECT_LE(worst, 1e-12);
}

TEST(QInv, DomainErrors)
{
    EXPECT_THROW(q_inv(0.0), std::domain_error);
    EXPECT_THROW(q_inv(1.0), std::domain_error);
    EXPECT_THROW(q_inv(-0.1), std::domain_error);
    EXPECT_THROW(q_inv(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
}

TEST(Capacity, Values)
{
    EXPECT_DOUBLE_EQ(capacity(Snr(1.0)), 1.0);
    EXPECT_DOUBLE_EQ(capacity(Snr(3.0)), 2.0);
    EXPECT_LT(rel_err(capacity(Snr(10.0)), kCapacity10), 1e-15);
}

TEST(Dispersion, Values)
{
    EXPECT_DOUBLE_EQ(dispersion(Snr(1.0)), 0.75);
    EXPECT_DOUBLE_EQ(dispersion(Snr(3.0)), 0.9375);
    EXPECT_LT(rel_err(dispersion(Snr(0.1)), kDispersion01), 1e-15);
}

TEST(Dispersion, IncreasingTowardOne)
{
    double prev = 0.0;
    for (double g = 1e-3; g < 1e6; g *= 1.7) {
        const double v = dispersion(Snr(g));
        EXPECT_GT(v, prev);
        EXPECT_LT(v, 1.0);
        prev = v;
    }
    EXPECT_GT(prev, 0.999999);
}

TEST(Snr, RejectsNonPositive)
{
    EXPECT_THROW(Snr(0.0), std::domain_error);
    EXPECT_THROW(Snr(-1.0), std::domain_error);
    EXPECT_THROW(Snr(std::numeric_limits<double>::infinity()), std::domain_error);
    EXPECT_NEAR(Snr::from_db(10.0).value(), 10.0, 1e-12);
    EXPECT_NEAR(Snr(100.0).db(), 20.0, 1e-12);
}

TEST(CodeParams, Validation)
{
    EXPECT_THROW(CodeParams(0.5, 10.0), std::domain_error);
    EXPECT_THROW(CodeParams(10.0, -1.0), std::domain_error);
    EXPECT_NO_THROW(CodeParams(1.0, 0.0));
}

TEST(DecodeError, AtCapacityIsHalf)
{
    EXPECT_DOUBLE_EQ(decode_error_prob(Snr(3.0), CodeParams(100.0, 200.0)), 0.5);
}

TEST(DecodeError, MatchesOracle)
{
    const CodeParams code(100.0, 100.0);
    EXPECT_LT(rel_err(fbl_argument(Snr(3.0), code), kArg3_100_100), 1e-14);
    EXPECT_NEAR(std::sqrt(100.0 / 0.9375), 10.3280, 1e-4);
    const ErrorProb e = decode_error(Snr(3.0), code);
    EXPECT_LT(rel_err(e.value, kEps3_100_100), 1e-12);
    EXPECT_DOUBLE_EQ(e.complement, 1.0 - e.value);
}

TEST(DecodeError, AboveCapacity) { EXPECT_GT(decode_error_prob(Snr(1.0), CodeParams(100.0, 150.0)), 0.5); }

TEST(DecodeError, StaysInsideOpenInterval)
{
    const ErrorProb tiny = decode_error(Snr(100.0), CodeParams(1000.0, 1.0));
    EXPECT_GT(tiny.value, 0.0);
    EXPECT_LT(tiny.complement, 1.0 + 1e-16);
    const ErrorProb huge = decode_error(Snr(0.01), CodeParams(1000.0, 5000.0));
    EXPECT_LT(huge.value, 1.0);
    EXPECT_GT(huge.complement, 0.0);
}

TEST(ErrorPartials, Signs)
{
    const ErrorPartials p = error_prob_partials(Snr(3.0), CodeParams(100.0, 100.0));
    EXPECT_GT(p.d_eps_dd, 0.0);
    EXPECT_LT(p.d_eps_dm, 0.0);
}

TEST(ErrorPartials, MatchCentralDifferences)
{
    const Snr g(1.0);
    const double m = 200.0;
    const double d = 150.0;
    const double h = 1e-3;
    const ErrorPartials p = error_prob_partials(g, CodeParams(m, d));
    const double fd_d =
        (decode_error_prob(g, CodeParams(m, d + h)) - decode_error_prob(g, CodeParams(m, d - h))) / (2.0 * h);
    const double fd_m =
        (decode_error_prob(g, CodeParams(m + h, d)) - decode_error_prob(g, CodeParams(m - h, d))) / (2.0 * h);
    EXPECT_LT(rel_err(p.d_eps_dd, fd_d), 1e-5);
    EXPECT_LT(rel_err(p.d_eps_dm, fd_m), 1e-5);
}
