#pragma once

#include <chrono>
#include <cmath>
#include <vector>

#include "fblsec/lfp_model.hpp"
#include "fblsec/solvers/types.hpp"

namespace fblsec {

namespace detail {

struct DirectionBest {
    bool feasible = false;
    long d_r = 0;
    double log_success = 0.0;
};

// For every blocklength 1..max_m, the redundancy maximizing one direction's
// success probability (smallest value on ties).
inline std::vector<DirectionBest> best_per_blocklength(const Scenario& s, int direction, int max_m, long& evals)
{
    std::vector<DirectionBest> out(static_cast<std::size_t>(max_m) + 1);
    for (int m = 1; m <= max_m; ++m) {
        const IntegerRange range = integer_range(redundancy_range(s, direction, m));
        DirectionBest& best = out[static_cast<std::size_t>(m)];
        for (long d = range.lo; d <= range.hi; ++d) {
            const double v = log_direction_success(s, direction, m, static_cast<double>(d));
            ++evals;
            if (!best.feasible || v > best.log_success) {
                best = {true, d, v};
            }
        }
    }
    return out;
}

} // namespace detail

/// Global integer optimum by enumeration. For fixed (m1, m2) the objective
/// 1 - S1(d_r1) S2(d_r2) separates, so each direction's redundancy is
/// enumerated once per blocklength and the products are combined afterwards.
/// Ties go to the lexicographically smallest (m1, d_r1, d_r2), and to the
/// larger m2 when the full budget is not imposed.
inline SolverReport solve_exhaustive(const Scenario& s, const SolverConfig& config = {})
{
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    const int M = s.M();
    SolverReport report;
    report.method = Method::exhaustive;

    const auto fwd = detail::best_per_blocklength(s, 1, M - 1, report.evaluations);
    const auto bwd = detail::best_per_blocklength(s, 2, M - 1, report.evaluations);

    bool found = false;
    double best_lfp = 0.0;
    for (int m1 = 1; m1 <= M - 1; ++m1) {
        const auto& b1 = fwd[static_cast<std::size_t>(m1)];
        if (!b1.feasible) {
            continue;
        }
        const int m2_min = config.full_budget_only ? M - m1 : 1;
        for (int m2 = M - m1; m2 >= m2_min; --m2) {
            const auto& b2 = bwd[static_cast<std::size_t>(m2)];
            if (!b2.feasible) {
                continue;
            }
            const double value = -std::expm1(b1.log_success + b2.log_success);
            if (!found || value < best_lfp) {
                found = true;
                best_lfp = value;
                report.alloc = {static_cast<double>(m1), static_cast<double>(m2), static_cast<double>(b1.d_r),
                                static_cast<double>(b2.d_r), true};
            }
        }
    }

    if (found) {
        report.status = SolverStatus::converged;
        report.lfp_final = lfp(s, report.alloc);
        report.trace.push_back({0, report.lfp_final});
    }
    report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

} // namespace fblsec
