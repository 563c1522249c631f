#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "fblsec/fbl_core.hpp"
#include "fblsec/scenario.hpp"

namespace fblsec {

/// A candidate decision. Values are stored as reals in both modes; when
/// `integral` is set every field holds an integer value.
struct Allocation {
    double m1 = 0.0;
    double m2 = 0.0;
    double d_r1 = 0.0;
    double d_r2 = 0.0;
    bool integral = false;

    double blocklength(int direction) const { return direction == 1 ? m1 : m2; }
    double redundancy(int direction) const { return direction == 1 ? d_r1 : d_r2; }

    friend bool operator==(const Allocation&, const Allocation&) = default;
};

/// Total coded bits in one direction: message plus redundancy.
inline double total_bits(const Scenario& s, const Allocation& a, int direction)
{
    return s.message_bits(direction) + a.redundancy(direction);
}

struct RedundancyRange {
    double min = 0.0;
    double max = 0.0;

    bool empty() const { return !(min <= max) || max < 0.0; }
    bool contains(double d) const { return d >= min && d <= max; }
};

struct FeasibleBox {
    double d_r1_min = 0.0;
    double d_r1_max = 0.0;
    double d_r2_min = 0.0;
    double d_r2_max = 0.0;
    bool feasible = false;

    RedundancyRange range(int direction) const
    {
        return direction == 1 ? RedundancyRange{d_r1_min, d_r1_max} : RedundancyRange{d_r2_min, d_r2_max};
    }
};

struct LinkErrors {
    ErrorProb eps_ab;
    ErrorProb eps_ae;
    ErrorProb eps_ba;
    ErrorProb eps_be;
};

namespace detail {

inline void check_allocation(const Scenario& s, const Allocation& a)
{
    if (!(a.m1 >= 1.0) || !(a.m2 >= 1.0)) {
        throw std::domain_error("Allocation: blocklengths must be >= 1");
    }
    if (!(a.d_r1 >= 0.0) || !(a.d_r2 >= 0.0)) {
        throw std::domain_error("Allocation: redundancy must be >= 0");
    }
    if (a.m1 + a.m2 > s.M() * (1.0 + 1e-12)) {
        throw std::domain_error("Allocation: m1 + m2 exceeds the blocklength budget");
    }
}

// log(1 - u) given u and an independently accurate 1 - u.
inline double log_complement(double u, double one_minus_u) { return u < 0.5 ? std::log1p(-u) : std::log(one_minus_u); }

} // namespace detail

/// Error probabilities of the two legitimate and two eavesdropping links.
inline LinkErrors link_errors(const Scenario& s, const Allocation& a)
{
    detail::check_allocation(s, a);
    const CodeParams fwd(a.m1, total_bits(s, a, 1));
    const CodeParams bwd(a.m2, total_bits(s, a, 2));
    return {decode_error(s.gamma_ab, fwd), decode_error(s.gamma_ae, fwd), decode_error(s.gamma_ba, bwd),
            decode_error(s.gamma_be, bwd)};
}

/// Probability that the legitimate receiver decodes and the eavesdropper does not.
inline double direction_success(double eps_legit, double eps_eave) { return (1.0 - eps_legit) * eps_eave; }

/// log of the round-trip success probability (1-e_ab) e_ae (1-e_ba) e_be.
inline double log_round_trip_success(const LinkErrors& e)
{
    return detail::log_complement(e.eps_ab.value, e.eps_ab.complement) +
           detail::log_complement(e.eps_ae.complement, e.eps_ae.value) +
           detail::log_complement(e.eps_ba.value, e.eps_ba.complement) +
           detail::log_complement(e.eps_be.complement, e.eps_be.value);
}

/// log of the one-direction success probability (1 - e_legit) e_eave.
inline double log_direction_success(const Scenario& s, int direction, double m, double d_r)
{
    const CodeParams code(m, s.message_bits(direction) + d_r);
    const ErrorProb legit = decode_error(s.legit(direction), code);
    const ErrorProb eave = decode_error(s.eave(direction), code);
    return detail::log_complement(legit.value, legit.complement) + detail::log_complement(eave.complement, eave.value);
}

/// Leakage-failure probability 1 - (1-e_ab) e_ae (1-e_ba) e_be, evaluated
/// through expm1 so that values far below 1e-16 keep full relative precision.
inline double lfp(const LinkErrors& e) { return -std::expm1(log_round_trip_success(e)); }

inline double lfp(const Scenario& s, const Allocation& a) { return lfp(link_errors(s, a)); }

/// Redundancy bounds of one direction at blocklength m: the exact inversion
/// of the error probability at the reliability and leakage thresholds.
inline RedundancyRange redundancy_range(const Scenario& s, int direction, double m)
{
    if (!(m >= 1.0)) {
        throw std::domain_error("redundancy_range: blocklength must be >= 1");
    }
    const Snr b = s.legit(direction);
    const Snr e = s.eave(direction);
    const double dm = s.message_bits(direction);
    const double hi = m * capacity(b) - std::sqrt(m * dispersion(b)) * q_inv(s.reliability_max(direction)) / kLn2 - dm;
    const double lo = m * capacity(e) - std::sqrt(m * dispersion(e)) * q_inv(s.params.eps_e_max) / kLn2 - dm;
    return {std::max(0.0, lo), hi};
}

inline FeasibleBox redundancy_bounds(const Scenario& s, double m1, double m2)
{
    const RedundancyRange r1 = redundancy_range(s, 1, m1);
    const RedundancyRange r2 = redundancy_range(s, 2, m2);
    return {r1.min, r1.max, r2.min, r2.max, !r1.empty() && !r2.empty()};
}

/// Integer redundancy values admitted by a real range. A slack of 1e-9 bits
/// absorbs roundoff when a bound is an exact integer.
struct IntegerRange {
    long lo = 0;
    long hi = -1;

    bool empty() const { return lo > hi; }
    bool contains(long v) const { return v >= lo && v <= hi; }
};

inline IntegerRange integer_range(const RedundancyRange& r)
{
    if (r.empty()) {
        return {};
    }
    constexpr double slack = 1e-9;
    return {static_cast<long>(std::ceil(r.min - slack)), static_cast<long>(std::floor(r.max + slack))};
}

namespace detail {

// Positive root in s of c s^2 - a s - d = 0 (c > 0, d > 0).
inline double positive_root(double c, double a, double d)
{
    const double disc = std::sqrt(a * a + 4.0 * c * d);
    return a >= 0.0 ? (a + disc) / (2.0 * c) : 2.0 * d / (disc - a);
}

} // namespace detail

/// Range of blocklengths m for which redundancy d_r satisfies both thresholds
/// of one direction. Reliability gives a lower end, leakage an upper end.
inline std::pair<double, double> blocklength_range(const Scenario& s, int direction, double d_r)
{
    const Snr b = s.legit(direction);
    const Snr e = s.eave(direction);
    const double d = s.message_bits(direction) + d_r;
    const double a_b = std::sqrt(dispersion(b)) * q_inv(s.reliability_max(direction)) / kLn2;
    const double a_e = std::sqrt(dispersion(e)) * q_inv(s.params.eps_e_max) / kLn2;
    const double lo = detail::positive_root(capacity(b), a_b, d);
    const double hi = detail::positive_root(capacity(e), a_e, d);
    return {lo * lo, hi * hi};
}

/// Interval of m1 (with m2 = M - m1) keeping (d_r1, d_r2) feasible. Empty
/// when first > second.
inline std::pair<double, double> m1_feasible_range(const Scenario& s, double d_r1, double d_r2)
{
    const auto [lo1, hi1] = blocklength_range(s, 1, d_r1);
    const auto [lo2, hi2] = blocklength_range(s, 2, d_r2);
    const double M = s.M();
    return {std::max({1.0, lo1, M - hi2}), std::min({M - 1.0, hi1, M - lo2})};
}

struct ReducedGradient {
    double g_m1;
    double g_dr1;
    double g_dr2;
};

/// Gradient of lfp in (m1, d_r1, d_r2) with m2 = M - m1 eliminated.
inline ReducedGradient lfp_gradient_reduced(const Scenario& s, double m1, double d_r1, double d_r2)
{
    const double M = s.M();
    if (!(m1 > 1.0 && m1 < M - 1.0)) {
        throw std::domain_error("lfp_gradient_reduced: m1 must lie in (1, M-1)");
    }
    const double m2 = M - m1;
    const Allocation a{m1, m2, d_r1, d_r2, false};
    const LinkErrors e = link_errors(s, a);
    const CodeParams fwd(m1, total_bits(s, a, 1));
    const CodeParams bwd(m2, total_bits(s, a, 2));
    const ErrorPartials p_ab = error_prob_partials(s.gamma_ab, fwd);
    const ErrorPartials p_ae = error_prob_partials(s.gamma_ae, fwd);
    const ErrorPartials p_ba = error_prob_partials(s.gamma_ba, bwd);
    const ErrorPartials p_be = error_prob_partials(s.gamma_be, bwd);

    // S_j = (1 - e_legit) e_eave and its partials
    const double s1 = e.eps_ab.complement * e.eps_ae.value;
    const double s2 = e.eps_ba.complement * e.eps_be.value;
    const double ds1_dm = -p_ab.d_eps_dm * e.eps_ae.value + e.eps_ab.complement * p_ae.d_eps_dm;
    const double ds1_dd = -p_ab.d_eps_dd * e.eps_ae.value + e.eps_ab.complement * p_ae.d_eps_dd;
    const double ds2_dm = -p_ba.d_eps_dm * e.eps_be.value + e.eps_ba.complement * p_be.d_eps_dm;
    const double ds2_dd = -p_ba.d_eps_dd * e.eps_be.value + e.eps_ba.complement * p_be.d_eps_dd;

    return {-(ds1_dm * s2 - s1 * ds2_dm), -ds1_dd * s2, -s1 * ds2_dd};
}

/// Infinite-blocklength reference: a link decodes iff its rate is below
/// capacity (error 1/2 exactly at capacity).
inline double ibl_error(Snr gamma, double bits, double m)
{
    const double rate = bits / m;
    const double c = capacity(gamma);
    if (rate < c) {
        return 0.0;
    }
    return rate > c ? 1.0 : 0.5;
}

inline double lfp_ibl(const Scenario& s, const Allocation& a)
{
    const double d1 = total_bits(s, a, 1);
    const double d2 = total_bits(s, a, 2);
    return 1.0 - direction_success(ibl_error(s.gamma_ab, d1, a.m1), ibl_error(s.gamma_ae, d1, a.m1)) *
                     direction_success(ibl_error(s.gamma_ba, d2, a.m2), ibl_error(s.gamma_be, d2, a.m2));
}

} // namespace fblsec
