#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fblsec/lfp_model.hpp"

namespace fblsec {

/// Raised when an objective evaluation is not finite.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Method { exhaustive, bcd, mm };

inline std::string_view to_string(Method m)
{
    switch (m) {
    case Method::exhaustive: return "exhaustive";
    case Method::bcd: return "bcd";
    case Method::mm: return "mm";
    }
    return "?";
}

inline Method parse_method(std::string_view name)
{
    if (name == "exhaustive") return Method::exhaustive;
    if (name == "bcd") return Method::bcd;
    if (name == "mm") return Method::mm;
    throw std::invalid_argument("unknown method '" + std::string(name) + "' (expected exhaustive, bcd or mm)");
}

struct SolverConfig {
    double rel_tol = 1e-8;
    int max_outer_iters = 500;
    int max_inner_iters = 200;
    double line_search_tol = 1e-6;
    int surrogate_exponent = 4;
    bool mm_safeguard = true;
    bool integer_mode = true;
    /// Exhaustive search only: restrict to m2 = M - m1. When false every
    /// m1 + m2 <= M is enumerated.
    bool full_budget_only = true;

    void validate() const
    {
        if (!(rel_tol > 0.0) || !(line_search_tol > 0.0)) {
            throw std::invalid_argument("SolverConfig: tolerances must be > 0");
        }
        if (max_outer_iters < 1 || max_inner_iters < 1) {
            throw std::invalid_argument("SolverConfig: iteration caps must be >= 1");
        }
        if (surrogate_exponent != 2 && surrogate_exponent != 4) {
            throw std::invalid_argument("SolverConfig: surrogate exponent must be 2 or 4");
        }
    }
};

enum class SolverStatus { converged, max_iters, infeasible };

inline std::string_view to_string(SolverStatus s)
{
    switch (s) {
    case SolverStatus::converged: return "converged";
    case SolverStatus::max_iters: return "max_iters";
    case SolverStatus::infeasible: return "infeasible";
    }
    return "?";
}

struct TracePoint {
    int k;
    double lfp;
};

struct SolverReport {
    Method method = Method::exhaustive;
    SolverStatus status = SolverStatus::infeasible;
    Allocation alloc;
    double lfp_final = 1.0;
    /// True objective at the start point (k = 0) and after every outer iteration.
    std::vector<TracePoint> trace;
    long evaluations = 0;
    double wall_time = 0.0;

    int outer_iterations() const { return trace.empty() ? 0 : trace.back().k; }
};

} // namespace fblsec
