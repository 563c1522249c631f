#pragma once

#include <chrono>
#include <optional>

#include "fblsec/solvers/iterative.hpp"

namespace fblsec {

/// Block coordinate descent on the relaxed problem: cycles m1, d_r1, d_r2,
/// each a golden-section search over its feasible interval with m2 = M - m1.
/// Stops on a relative objective change below rel_tol. In integer mode the
/// relaxed end point is rounded by comparing its feasible integer corners.
inline SolverReport solve_bcd(const Scenario& s, const SolverConfig& config = {},
                              const std::optional<Allocation>& init = std::nullopt)
{
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    SolverReport report;
    report.method = Method::bcd;
    detail::CountedObjective f(s);

    const auto p0 = detail::resolve_start(s, init, f);
    if (!p0) {
        report.status = SolverStatus::infeasible;
        report.evaluations = f.evaluations;
        report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return report;
    }

    detail::Point p = *p0;
    double value = f(p);
    report.trace.push_back({0, value});
    report.status = SolverStatus::max_iters;
    for (int k = 1; k <= config.max_outer_iters; ++k) {
        const double previous = value;
        detail::minimize_m1(p, value, f, config);
        detail::minimize_redundancy(p, 1, value, f, config);
        detail::minimize_redundancy(p, 2, value, f, config);
        report.trace.push_back({k, value});
        if (detail::relative_change_below(previous, value, config.rel_tol)) {
            report.status = SolverStatus::converged;
            break;
        }
    }

    detail::finish_report(report, s, p, value, f, config);
    report.evaluations = f.evaluations;
    report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

} // namespace fblsec
