#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <tuple>

#include "fblsec/lfp_model.hpp"
#include "fblsec/solvers/scalar_min.hpp"
#include "fblsec/solvers/types.hpp"

// Pieces shared by the BCD and MM solvers: start point, the m1 block, the
// per-direction redundancy block and the integer reconstruction.

namespace fblsec::detail {

/// Relaxed iterate in the reduced space; m2 is always M - m1.
struct Point {
    double m1;
    double d_r1;
    double d_r2;

    Allocation allocation(const Scenario& s) const { return {m1, s.M() - m1, d_r1, d_r2, false}; }
};

class CountedObjective {
public:
    explicit CountedObjective(const Scenario& s) : s_(s) {}

    double operator()(const Point& p)
    {
        ++evaluations;
        const double v = lfp(s_, p.allocation(s_));
        if (!std::isfinite(v)) {
            throw NumericalError("objective is not finite");
        }
        return v;
    }

    const Scenario& scenario() const { return s_; }

    long evaluations = 0;

private:
    const Scenario& s_;
};

inline std::optional<Point> midpoint_start(const Scenario& s, double m1)
{
    const FeasibleBox box = redundancy_bounds(s, m1, s.M() - m1);
    if (!box.feasible) {
        return std::nullopt;
    }
    return Point{m1, 0.5 * (box.d_r1_min + box.d_r1_max), 0.5 * (box.d_r2_min + box.d_r2_max)};
}

/// Start point: m1 = round(M/2) with box midpoints, else the best of 16
/// equispaced m1 values whose box is nonempty.
inline std::optional<Point> default_start(const Scenario& s, CountedObjective& f)
{
    const int M = s.M();
    if (auto p = midpoint_start(s, std::round(0.5 * M))) {
        return p;
    }
    std::optional<Point> best;
    double best_value = 0.0;
    constexpr int grid = 16;
    for (int i = 0; i < grid; ++i) {
        const double m1 = std::round(1.0 + (M - 2.0) * i / (grid - 1));
        if (auto p = midpoint_start(s, m1)) {
            const double v = f(*p);
            if (!best || v < best_value) {
                best = p;
                best_value = v;
            }
        }
    }
    return best;
}

/// Accepts a caller-provided start if its redundancy lies in the box at its
/// m1, otherwise falls back to default_start.
inline std::optional<Point> resolve_start(const Scenario& s, const std::optional<Allocation>& init,
                                          CountedObjective& f)
{
    if (init) {
        const double m1 = std::clamp(init->m1, 1.0, s.M() - 1.0);
        const FeasibleBox box = redundancy_bounds(s, m1, s.M() - m1);
        if (box.feasible && box.range(1).contains(init->d_r1) && box.range(2).contains(init->d_r2)) {
            return Point{m1, init->d_r1, init->d_r2};
        }
        if (auto p = midpoint_start(s, m1)) {
            return p;
        }
    }
    return default_start(s, f);
}

/// Minimizes over m1 with the redundancy fixed, inside the m1 interval that
/// keeps both redundancies feasible. Never returns a worse point.
inline void minimize_m1(Point& p, double& value, CountedObjective& f, const SolverConfig& config)
{
    auto [lo, hi] = m1_feasible_range(f.scenario(), p.d_r1, p.d_r2);
    lo = std::min(lo, p.m1);
    hi = std::max(hi, p.m1);
    if (!(hi > lo)) {
        return;
    }
    const ScalarMin r = golden_section(
        [&](double m1) {
            Point q = p;
            q.m1 = m1;
            return f(q);
        },
        lo, hi, config.line_search_tol);
    if (r.fx < value) {
        p.m1 = r.x;
        value = r.fx;
    }
}

/// Minimizes over one direction's redundancy within its box at the current m1.
inline void minimize_redundancy(Point& p, int direction, double& value, CountedObjective& f,
                                const SolverConfig& config)
{
    const Scenario& s = f.scenario();
    const double m = direction == 1 ? p.m1 : s.M() - p.m1;
    RedundancyRange range = redundancy_range(s, direction, m);
    double& coord = direction == 1 ? p.d_r1 : p.d_r2;
    range.min = std::min(range.min, coord);
    range.max = std::max(range.max, coord);
    if (!(range.max > range.min)) {
        return;
    }
    const ScalarMin r = golden_section(
        [&](double d) {
            Point q = p;
            (direction == 1 ? q.d_r1 : q.d_r2) = d;
            return f(q);
        },
        range.min, range.max, config.line_search_tol);
    if (r.fx < value) {
        coord = r.x;
        value = r.fx;
    }
}

inline bool relative_change_below(double previous, double current, double tol)
{
    return std::abs(previous - current) <= tol * std::abs(previous);
}

/// Integer solution from a relaxed one: the best feasible point among the
/// floor/ceil corners. If no corner is feasible, redundancy is clamped into
/// the integer box at floor/ceil of m1, widening the m1 search outward until
/// some box is nonempty.
inline std::optional<Allocation> integer_reconstruction(const Scenario& s, const Point& relaxed, CountedObjective& f)
{
    const int M = s.M();
    std::optional<Allocation> best;
    double best_value = 0.0;
    auto consider = [&](long m1, long d1, long d2) {
        const Allocation a{static_cast<double>(m1), static_cast<double>(M - m1), static_cast<double>(d1),
                           static_cast<double>(d2), true};
        const double v = f(Point{a.m1, a.d_r1, a.d_r2});
        const auto key = std::tuple(a.m1, a.d_r1, a.d_r2);
        if (!best || v < best_value ||
            (v == best_value && key < std::tuple(best->m1, best->d_r1, best->d_r2))) {
            best = a;
            best_value = v;
        }
    };

    const long m_floor = std::clamp(static_cast<long>(std::floor(relaxed.m1)), 1L, static_cast<long>(M - 1));
    const long m_ceil = std::clamp(static_cast<long>(std::ceil(relaxed.m1)), 1L, static_cast<long>(M - 1));
    for (long m1 : {m_floor, m_ceil}) {
        const IntegerRange r1 = integer_range(redundancy_range(s, 1, static_cast<double>(m1)));
        const IntegerRange r2 = integer_range(redundancy_range(s, 2, static_cast<double>(M - m1)));
        for (long d1 : {static_cast<long>(std::floor(relaxed.d_r1)), static_cast<long>(std::ceil(relaxed.d_r1))}) {
            for (long d2 :
                 {static_cast<long>(std::floor(relaxed.d_r2)), static_cast<long>(std::ceil(relaxed.d_r2))}) {
                if (r1.contains(d1) && r2.contains(d2)) {
                    consider(m1, d1, d2);
                }
            }
        }
    }
    if (best) {
        return best;
    }

    for (long offset = 0; offset < M; ++offset) {
        for (long m1 : {m_floor - offset, m_ceil + offset}) {
            if (m1 < 1 || m1 > M - 1) {
                continue;
            }
            const IntegerRange r1 = integer_range(redundancy_range(s, 1, static_cast<double>(m1)));
            const IntegerRange r2 = integer_range(redundancy_range(s, 2, static_cast<double>(M - m1)));
            if (r1.empty() || r2.empty()) {
                continue;
            }
            consider(m1, std::clamp(std::lround(relaxed.d_r1), r1.lo, r1.hi),
                     std::clamp(std::lround(relaxed.d_r2), r2.lo, r2.hi));
        }
        if (best) {
            return best;
        }
    }
    return std::nullopt;
}

/// Fills the allocation part of a report from the relaxed end point.
inline void finish_report(SolverReport& report, const Scenario& s, const Point& relaxed, double relaxed_value,
                          CountedObjective& f, const SolverConfig& config)
{
    if (!config.integer_mode) {
        report.alloc = relaxed.allocation(s);
        report.lfp_final = relaxed_value;
        return;
    }
    if (auto a = integer_reconstruction(s, relaxed, f)) {
        report.alloc = *a;
        report.lfp_final = lfp(s, *a);
    } else {
        report.status = SolverStatus::infeasible;
    }
}

} // namespace fblsec::detail
