#pragma once

#include <cmath>
#include <numbers>
#include <string>

#include "fblsec/solvers/types.hpp"

namespace fblsec {

struct ScalarMin {
    double x;
    double fx;
    long evaluations;
};

/// Golden-section search for the minimizer of a unimodal function on
/// [lo, hi]. Both endpoints are evaluated as well, so a minimum sitting on
/// the boundary is returned exactly.
template <class F>
ScalarMin golden_section(F&& f, double lo, double hi, double tol)
{
    long evals = 0;
    auto eval = [&](double x) {
        const double v = f(x);
        ++evals;
        if (!std::isfinite(v)) {
            throw NumericalError("golden_section: objective is not finite at x = " + std::to_string(x));
        }
        return v;
    };
    if (hi < lo) {
        throw std::invalid_argument("golden_section: empty interval");
    }
    if (hi == lo) {
        return {lo, eval(lo), evals};
    }

    constexpr double inv_phi = std::numbers::phi - 1.0;
    double a = lo;
    double b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = eval(c);
    double fd = eval(d);
    while (b - a > tol) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = eval(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = eval(d);
        }
    }

    ScalarMin best{fc <= fd ? c : d, std::min(fc, fd), 0};
    for (double x : {lo, hi}) {
        const double v = eval(x);
        if (v < best.fx) {
            best.x = x;
            best.fx = v;
        }
    }
    best.evaluations = evals;
    return best;
}

/// Minimizer of a unimodal function on [lo, hi] to within `tol`.
template <class F>
double bcd_scalar_min(F&& f, double lo, double hi, double tol)
{
    if (!(lo < hi)) {
        throw std::invalid_argument("bcd_scalar_min: requires lo < hi");
    }
    return golden_section(std::forward<F>(f), lo, hi, tol).x;
}

} // namespace fblsec
