#pragma once

#include "fblsec/solvers/bcd.hpp"
#include "fblsec/solvers/exhaustive.hpp"
#include "fblsec/solvers/mm.hpp"
#include "fblsec/solvers/scalar_min.hpp"
#include "fblsec/solvers/types.hpp"

namespace fblsec {

inline SolverReport solve(Method method, const Scenario& s, const SolverConfig& config = {})
{
    switch (method) {
    case Method::exhaustive: return solve_exhaustive(s, config);
    case Method::bcd: return solve_bcd(s, config);
    case Method::mm: return solve_mm(s, config);
    }
    throw std::invalid_argument("solve: unknown method");
}

} // namespace fblsec
