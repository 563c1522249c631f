#pragma once

#include <cstdint>
#include <optional>

#include "fblsec/lfp_model.hpp"
#include "fblsec/scenario.hpp"
#include "fblsec/solvers.hpp"

namespace fblsec::testing {

inline Scenario make_scenario(double ab, double ae, double ba, double be, ScenarioTemplate t = {})
{
    return Scenario(Snr(ab), Snr(ae), Snr(ba), Snr(be), t);
}

inline Scenario make_scenario_db(double ab, double ae, double ba, double be, ScenarioTemplate t = {})
{
    return Scenario(Snr::from_db(ab), Snr::from_db(ae), Snr::from_db(ba), Snr::from_db(be), t);
}

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

/// Small random scenario: gamma_b in [0, 10] dB, gamma_e in [-10, 0] dB,
/// d_m = 4, thresholds 0.5, M in [40, max_M].
inline Scenario random_scenario(Rng& rng, int max_M = 200)
{
    ScenarioTemplate t;
    t.d_m1 = 4;
    t.d_m2 = 4;
    t.M = 40 + static_cast<int>(rng.uniform() * (max_M - 39));
    t.eps_ab_max = t.eps_ba_max = t.eps_e_max = 0.5;
    const double ab = uniform(rng, 0.0, 10.0);
    const double ae = uniform(rng, -10.0, 0.0);
    const double ba = uniform(rng, 0.0, 10.0);
    const double be = uniform(rng, -10.0, 0.0);
    return make_scenario_db(ab, ae, ba, be, t);
}

/// Draws random scenarios until the exhaustive optimum exists.
inline Scenario random_feasible_scenario(Rng& rng, int max_M = 200)
{
    for (;;) {
        Scenario s = random_scenario(rng, max_M);
        SolverConfig c;
        if (solve_exhaustive(s, c).status != SolverStatus::infeasible) {
            return s;
        }
    }
}

/// A random interior point (m1, d_r1, d_r2) with both redundancies strictly
/// inside their ranges, or nothing after a few attempts.
inline std::optional<Allocation> random_interior_point(const Scenario& s, Rng& rng, double margin = 1.0)
{
    const double M = s.M();
    for (int attempt = 0; attempt < 50; ++attempt) {
        const double m1 = uniform(rng, 2.0 + margin, M - 2.0 - margin);
        const RedundancyRange r1 = redundancy_range(s, 1, m1);
        const RedundancyRange r2 = redundancy_range(s, 2, M - m1);
        if (r1.max - r1.min <= 2.0 * margin || r2.max - r2.min <= 2.0 * margin) {
            continue;
        }
        return Allocation{m1, M - m1, uniform(rng, r1.min + margin, r1.max - margin),
                          uniform(rng, r2.min + margin, r2.max - margin), false};
    }
    return std::nullopt;
}

} // namespace fblsec::testing
