#pragma once

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "fblsec/solvers/iterative.hpp"

namespace fblsec {

/// Power mean of the four reciprocals A = 1/(1-e_ab), B = 1/e_ae,
/// C = 1/(1-e_ba), D = 1/e_be:  ((A + B + C + D) / 4)^exponent.
/// With exponent 4 this bounds f = ABCD from above (AM-GM); with exponent 2
/// it does not in general.
inline double surrogate_g(const LinkErrors& e, int exponent)
{
    if (exponent != 2 && exponent != 4) {
        throw std::invalid_argument("surrogate_g: exponent must be 2 or 4");
    }
    const std::array<double, 4> p{e.eps_ab.complement, e.eps_ae.value, e.eps_ba.complement, e.eps_be.value};
    double sum = 0.0;
    for (double v : p) {
        if (!(v > 0.0 && v < 1.0)) {
            throw std::domain_error("surrogate_g: error probabilities must lie in (0,1)");
        }
        sum += 1.0 / v;
    }
    return std::pow(0.25 * sum, exponent);
}

/// The reciprocal objective f = 1 / ((1-e_ab) e_ae (1-e_ba) e_be).
inline double reciprocal_success(const LinkErrors& e) { return std::exp(-log_round_trip_success(e)); }

/// Surrogate anchored at a point with errors `anchor`: the same power mean
/// applied to the reciprocals normalized by their anchor values, scaled by
/// f(anchor). It equals f at the anchor and, for exponent 4, majorizes f.
inline double anchored_surrogate(const LinkErrors& e, const LinkErrors& anchor, int exponent)
{
    if (exponent != 2 && exponent != 4) {
        throw std::invalid_argument("anchored_surrogate: exponent must be 2 or 4");
    }
    // Reciprocal ratios A/A_hat, B/B_hat, C/C_hat, D/D_hat.
    const double sum = anchor.eps_ab.complement / e.eps_ab.complement + anchor.eps_ae.value / e.eps_ae.value +
                       anchor.eps_ba.complement / e.eps_ba.complement + anchor.eps_be.value / e.eps_be.value;
    return reciprocal_success(anchor) * std::pow(0.25 * sum, exponent);
}

namespace detail {

// Failure probabilities u_i of one direction (legit error, eavesdropper
// success) and their derivatives in the redundancy.
struct DirectionFailures {
    std::array<double, 2> u;
    std::array<double, 2> one_minus_u;
    std::array<double, 2> du;
};

inline DirectionFailures direction_failures(const Scenario& s, int direction, double m, double d_r)
{
    const CodeParams code(m, s.message_bits(direction) + d_r);
    const ErrorProb legit = decode_error(s.legit(direction), code);
    const ErrorProb eave = decode_error(s.eave(direction), code);
    const double dl = error_prob_partials(s.legit(direction), code).d_eps_dd;
    const double de = error_prob_partials(s.eave(direction), code).d_eps_dd;
    return {{legit.value, eave.complement}, {legit.complement, eave.value}, {dl, -de}};
}

// The anchored surrogate is ((1/4) sum_i r_i)^p times f(anchor) with
// r_i = (1 - u_i(anchor)) / (1 - u_i) = 1 + (u_i - u_i(anchor)) / (1 - u_i).
// It is minimized through excess(d) = sum_i (u_i - u_i(anchor)) / (1 - u_i),
// which shares the minimizer for either exponent and keeps full precision
// when every u_i is tiny.
class SurrogateBlock {
public:
    SurrogateBlock(const Scenario& s, double m1, std::array<double, 2> anchor) : s_(s), m_{m1, s.M() - m1}
    {
        for (int j = 0; j < 2; ++j) {
            const DirectionFailures a = direction_failures(s_, j + 1, m_[j], anchor[j]);
            anchor_u_[j] = a.u;
        }
    }

    // Per-direction excess and its derivative.
    std::pair<double, double> term(int j, double d_r, long& evals) const
    {
        ++evals;
        const DirectionFailures f = direction_failures(s_, j + 1, m_[j], d_r);
        double value = 0.0;
        double slope = 0.0;
        for (int i = 0; i < 2; ++i) {
            const double q = f.one_minus_u[i];
            value += (f.u[i] - anchor_u_[j][i]) / q;
            slope += f.du[i] * (1.0 - anchor_u_[j][i]) / (q * q);
        }
        return {value, slope};
    }

private:
    const Scenario& s_;
    std::array<double, 2> m_;
    std::array<std::array<double, 2>, 2> anchor_u_{};
};

// Projected gradient on the anchored surrogate over the redundancy box, with
// a diagonal Barzilai-Borwein scaling and backtracking by halving until the
// Armijo condition holds.
inline std::array<double, 2> minimize_surrogate(const SurrogateBlock& block, std::array<double, 2> x,
                                                const std::array<RedundancyRange, 2>& box,
                                                const SolverConfig& config, long& evals)
{
    auto evaluate = [&](const std::array<double, 2>& y, std::array<double, 2>& grad) {
        double total = 0.0;
        for (int j = 0; j < 2; ++j) {
            const auto [v, g] = block.term(j, y[j], evals);
            total += v;
            grad[j] = g;
        }
        return total;
    };
    auto project = [&](std::array<double, 2> y) {
        for (int j = 0; j < 2; ++j) {
            y[j] = std::clamp(y[j], box[j].min, box[j].max);
        }
        return y;
    };

    std::array<double, 2> grad{};
    double value = evaluate(x, grad);
    std::array<double, 2> scale{};
    for (int j = 0; j < 2; ++j) {
        const double width = std::max(box[j].max - box[j].min, config.line_search_tol);
        scale[j] = grad[j] != 0.0 ? 0.25 * width / std::abs(grad[j]) : 0.0;
    }

    constexpr double armijo = 1e-4;
    for (int it = 0; it < config.max_inner_iters; ++it) {
        std::array<double, 2> trial{};
        std::array<double, 2> trial_grad{};
        double trial_value = value;
        bool accepted = false;
        for (double t = 1.0; t > 1e-30; t *= 0.5) {
            trial = project({x[0] - t * scale[0] * grad[0], x[1] - t * scale[1] * grad[1]});
            const double decrease = grad[0] * (trial[0] - x[0]) + grad[1] * (trial[1] - x[1]);
            if (decrease == 0.0) {
                break;
            }
            trial_value = evaluate(trial, trial_grad);
            if (trial_value <= value + armijo * decrease) {
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            break;
        }

        const double step = std::max(std::abs(trial[0] - x[0]), std::abs(trial[1] - x[1]));
        const double change = value - trial_value;
        for (int j = 0; j < 2; ++j) {
            const double sj = trial[j] - x[j];
            const double yj = trial_grad[j] - grad[j];
            if (sj * yj > 0.0) {
                scale[j] = sj / yj;
            } else if (trial_grad[j] != 0.0 && scale[j] == 0.0) {
                const double width = std::max(box[j].max - box[j].min, config.line_search_tol);
                scale[j] = 0.25 * width / std::abs(trial_grad[j]);
            }
        }
        x = trial;
        grad = trial_grad;
        value = trial_value;
        if (step < config.line_search_tol || change <= config.rel_tol * std::abs(value)) {
            break;
        }
    }
    return x;
}

// Block 2 of the MM scheme: repeatedly anchor the surrogate at the current
// redundancy and minimize it, until the true objective settles.
inline Point mm_redundancy_block(const Point& p, CountedObjective& f, const SolverConfig& config)
{
    const Scenario& s = f.scenario();
    const std::array<RedundancyRange, 2> box{redundancy_range(s, 1, p.m1), redundancy_range(s, 2, s.M() - p.m1)};
    Point current = p;
    double value = f(current);
    for (int t = 0; t < config.max_inner_iters; ++t) {
        const SurrogateBlock block(s, p.m1, {current.d_r1, current.d_r2});
        const auto next = minimize_surrogate(block, {current.d_r1, current.d_r2}, box, config, f.evaluations);
        const Point candidate{p.m1, next[0], next[1]};
        const double candidate_value = f(candidate);
        const double step = std::max(std::abs(next[0] - current.d_r1), std::abs(next[1] - current.d_r2));
        const double previous = value;
        current = candidate;
        value = candidate_value;
        if (step < config.line_search_tol || relative_change_below(previous, value, config.rel_tol)) {
            break;
        }
    }
    return current;
}

} // namespace detail

/// Nested BCD-MM: the outer loop alternates the m1 block (golden section on
/// the true objective) and the joint redundancy block, which is minimized by
/// majorization-minimization on the AM-GM surrogate. With the safeguard on, a
/// redundancy block that raises the true objective is discarded in favour of
/// a coordinate-wise golden-section pass.
inline SolverReport solve_mm(const Scenario& s, const SolverConfig& config = {},
                             const std::optional<Allocation>& init = std::nullopt)
{
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    SolverReport report;
    report.method = Method::mm;
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

        const detail::Point candidate = detail::mm_redundancy_block(p, f, config);
        const double candidate_value = f(candidate);
        if (!config.mm_safeguard || candidate_value <= value) {
            p = candidate;
            value = candidate_value;
        } else {
            detail::minimize_redundancy(p, 1, value, f, config);
            detail::minimize_redundancy(p, 2, value, f, config);
        }

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
