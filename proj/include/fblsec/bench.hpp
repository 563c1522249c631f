#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "fblsec/lfp_model.hpp"
#include "fblsec/scenario_json.hpp"
#include "fblsec/solvers.hpp"

namespace fblsec {

/// Exit codes shared by every CLI subcommand.
enum ExitCode : int { exit_ok = 0, exit_input_error = 1, exit_infeasible = 2 };

inline std::string format_number(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// ---------------------------------------------------------------------------
// Solve reports
// ---------------------------------------------------------------------------

inline nlohmann::json report_to_json(const SolverReport& r, const Scenario& s)
{
    nlohmann::json j;
    j["method"] = std::string(to_string(r.method));
    j["status"] = std::string(to_string(r.status));
    j["warnings"] = s.warnings();
    j["evaluations"] = r.evaluations;
    j["iterations"] = r.outer_iterations();
    j["wall_time"] = r.wall_time;
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& t : r.trace) {
        trace.push_back({{"k", t.k}, {"lfp", t.lfp}});
    }
    j["trace"] = trace;
    if (r.status == SolverStatus::infeasible) {
        j["lfp"] = nullptr;
        j["allocation"] = nullptr;
        return j;
    }
    const Allocation& a = r.alloc;
    j["lfp"] = r.lfp_final;
    j["allocation"] = {{"m1", a.m1}, {"m2", a.m2}, {"d_r1", a.d_r1}, {"d_r2", a.d_r2}, {"integral", a.integral}};
    const LinkErrors e = link_errors(s, a);
    j["link_errors"] = {{"eps_ab", e.eps_ab.value},
                        {"eps_ae", e.eps_ae.value},
                        {"eps_ba", e.eps_ba.value},
                        {"eps_be", e.eps_be.value}};
    const FeasibleBox box = redundancy_bounds(s, a.m1, a.m2);
    j["feasible_box"] = {{"d_r1_min", box.d_r1_min},
                         {"d_r1_max", box.d_r1_max},
                         {"d_r2_min", box.d_r2_min},
                         {"d_r2_max", box.d_r2_max},
                         {"feasible", box.feasible}};
    return j;
}

// ---------------------------------------------------------------------------
// Parameter sweeps
// ---------------------------------------------------------------------------

struct SweepSpec {
    std::string vary;
    double from = 0.0;
    double to = 0.0;
    double step = 0.0;
    std::vector<Method> methods;

    void validate() const
    {
        static const std::array<std::string, 6> fields{"gamma_ab_db", "gamma_ae_db", "gamma_ba_db",
                                                       "gamma_be_db", "M",           "tx_power"};
        if (std::find(fields.begin(), fields.end(), vary) == fields.end()) {
            throw InputError("sweep: cannot vary '" + vary +
                             "' (expected gamma_ab_db, gamma_ae_db, gamma_ba_db, gamma_be_db, M or tx_power)");
        }
        if (!(from < to) || !(step > 0.0) || !std::isfinite(from) || !std::isfinite(to)) {
            throw InputError("sweep: requires from < to and step > 0");
        }
        if (methods.empty()) {
            throw InputError("sweep: at least one method is required");
        }
    }

    /// Grid from, from + step, ... up to and including `to` (within 1e-9 steps).
    std::vector<double> values() const
    {
        const auto n = static_cast<long>(std::floor((to - from) / step + 1e-9));
        std::vector<double> out;
        out.reserve(static_cast<std::size_t>(n) + 1);
        for (long i = 0; i <= n; ++i) {
            out.push_back(from + static_cast<double>(i) * step);
        }
        return out;
    }
};

inline ScenarioSpec with_swept_value(ScenarioSpec spec, const std::string& vary, double value)
{
    for (std::size_t i = 0; i < 4; ++i) {
        if (vary == std::string("gamma_") + kLinkNames[i] + "_db") {
            spec.links[i].snr_db = value;
            return spec;
        }
    }
    if (vary == "M") {
        spec.params.M = static_cast<int>(std::lround(value));
    } else if (vary == "tx_power") {
        spec.tx_power = value;
    } else {
        throw InputError("sweep: unknown field '" + vary + "'");
    }
    return spec;
}

/// One (grid point, method) result. `report` is empty when the point could
/// not be evaluated; `error` then holds the reason.
struct ResultRow {
    double value = 0.0;
    Method method = Method::exhaustive;
    std::optional<SolverReport> report;
    std::optional<double> lfp_ibl;
    std::string error;

    std::string status() const { return report ? std::string(to_string(report->status)) : "error"; }
};

/// Worker count: FBLSEC_THREADS if set to a positive integer, else all cores.
inline unsigned sweep_threads()
{
    if (const char* env = std::getenv("FBLSEC_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n > 0) {
            return static_cast<unsigned>(n);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

inline ResultRow evaluate_point(const ScenarioSpec& base, const std::string& vary, double value, Method method,
                                const SolverConfig& config)
{
    ResultRow row;
    row.value = value;
    row.method = method;
    try {
        const Scenario s = materialize(with_swept_value(base, vary, value));
        row.report = solve(method, s, config);
        if (row.report->status != SolverStatus::infeasible) {
            row.lfp_ibl = lfp_ibl(s, row.report->alloc);
        }
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    return row;
}

/// Evaluates every grid point with every method. Points run concurrently;
/// rows come back in sweep order (value-major, then method order).
inline std::vector<ResultRow> run_sweep(const ScenarioSpec& base, const SweepSpec& sweep,
                                        const SolverConfig& config = {}, unsigned threads = sweep_threads())
{
    sweep.validate();
    const std::vector<double> grid = sweep.values();
    const std::size_t per_point = sweep.methods.size();
    std::vector<ResultRow> rows(grid.size() * per_point);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < rows.size(); i = next++) {
            rows[i] = evaluate_point(base, sweep.vary, grid[i / per_point], sweep.methods[i % per_point], config);
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(rows.size())));
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 1; t < n; ++t) {
            pool.emplace_back(worker);
        }
        worker();
    }
    return rows;
}

inline void write_sweep_csv(std::ostream& out, const std::string& vary, const std::vector<ResultRow>& rows)
{
    out << "vary,value,method,status,lfp,m1,m2,d_r1,d_r2,iterations,evaluations,wall_time,lfp_ibl\n";
    for (const auto& row : rows) {
        out << vary << ',' << format_number(row.value) << ',' << to_string(row.method) << ',' << row.status();
        const bool has_numbers = row.report && row.report->status != SolverStatus::infeasible;
        if (has_numbers) {
            const SolverReport& r = *row.report;
            out << ',' << format_number(r.lfp_final) << ',' << format_number(r.alloc.m1) << ','
                << format_number(r.alloc.m2) << ',' << format_number(r.alloc.d_r1) << ','
                << format_number(r.alloc.d_r2) << ',' << r.outer_iterations() << ',' << r.evaluations << ','
                << format_number(r.wall_time) << ',' << (row.lfp_ibl ? format_number(*row.lfp_ibl) : "");
        } else {
            out << ",,,,,,,,,";
        }
        out << '\n';
    }
}

/// A standalone matplotlib script plotting LFP (log scale) against the swept
/// variable, one line per method, with the IBL reference dashed.
inline std::string sweep_plot_script(const std::string& csv_path, const std::string& vary)
{
    std::string s;
    s += "# Generated by fblsec sweep. Usage: python3 <this file>\n";
    s += "import csv\nimport collections\nimport matplotlib\nmatplotlib.use('Agg')\n";
    s += "import matplotlib.pyplot as plt\n\n";
    s += "CSV = " + nlohmann::json(csv_path).dump() + "\n";
    s += "series = collections.defaultdict(list)\nibl = collections.defaultdict(list)\n";
    s += "with open(CSV, newline='') as f:\n";
    s += "    for row in csv.DictReader(f):\n";
    s += "        if row['lfp']:\n";
    s += "            series[row['method']].append((float(row['value']), float(row['lfp'])))\n";
    s += "        if row['lfp_ibl']:\n";
    s += "            ibl[row['method']].append((float(row['value']), float(row['lfp_ibl'])))\n";
    s += "fig, ax = plt.subplots()\n";
    s += "for method, pts in sorted(series.items()):\n";
    s += "    ax.semilogy([p[0] for p in pts], [max(p[1], 1e-300) for p in pts], marker='o', label=method)\n";
    s += "for method, pts in sorted(ibl.items()):\n";
    s += "    ax.semilogy([p[0] for p in pts], [max(p[1], 1e-300) for p in pts], linestyle='--',\n";
    s += "                label=method + ' IBL (reconstructed)')\n";
    s += "ax.set_xlabel(" + nlohmann::json(vary).dump() + ")\nax.set_ylabel('minimized LFP')\n";
    s += "ax.grid(True, which='both')\nax.legend()\n";
    s += "fig.savefig(CSV.rsplit('.', 1)[0] + '.png', dpi=150)\n";
    return s;
}

// ---------------------------------------------------------------------------
// Convergence traces
// ---------------------------------------------------------------------------

struct ConvergenceRun {
    SolverReport benchmark; // exhaustive optimum
    std::vector<SolverReport> runs;
};

inline ConvergenceRun run_convergence(const Scenario& s, const std::vector<Method>& methods,
                                      const SolverConfig& config = {})
{
    ConvergenceRun out;
    out.benchmark = solve_exhaustive(s, config);
    for (Method m : methods) {
        if (m != Method::exhaustive) {
            out.runs.push_back(solve(m, s, config));
        }
    }
    return out;
}

/// Columns method,k,lfp. The exhaustive optimum is written as a constant
/// series spanning the longest iterative trace.
inline void write_trace_csv(std::ostream& out, const ConvergenceRun& run)
{
    out << "method,k,lfp\n";
    int k_max = 0;
    for (const auto& r : run.runs) {
        for (const auto& t : r.trace) {
            out << to_string(r.method) << ',' << t.k << ',' << format_number(t.lfp) << '\n';
        }
        k_max = std::max(k_max, r.outer_iterations());
    }
    if (run.benchmark.status != SolverStatus::infeasible) {
        for (int k = 0; k <= k_max; ++k) {
            out << "exhaustive," << k << ',' << format_number(run.benchmark.lfp_final) << '\n';
        }
    }
}

// ---------------------------------------------------------------------------
// Monte-Carlo check of the LFP composition
// ---------------------------------------------------------------------------

/// LinkErrors from plain probabilities, complements by subtraction.
inline LinkErrors make_link_errors(double eps_ab, double eps_ae, double eps_ba, double eps_be)
{
    return {{eps_ab, 1.0 - eps_ab}, {eps_ae, 1.0 - eps_ae}, {eps_ba, 1.0 - eps_ba}, {eps_be, 1.0 - eps_be}};
}

struct ValidationResult {
    double analytic = 0.0;
    double empirical = 0.0;
    double std_error = 0.0;
    double band = 0.0;
    long failures = 0;
    long trials = 0;
    std::uint64_t seed = 0;
    bool pass = false;
};

/// Simulates independent decode events per trial: Bob decodes with
/// probability 1 - e_ab, Eve fails with probability e_ae, and likewise
/// backwards. A trial fails unless all four events go the right way.
/// Passes when |empirical - analytic| <= 4 sqrt(a (1 - a) / trials).
inline ValidationResult monte_carlo_lfp(const LinkErrors& e, long trials, std::uint64_t seed)
{
    if (trials < 1000) {
        throw InputError("validate: trials must be >= 1000");
    }
    const std::array<double, 4> ok{e.eps_ab.complement, e.eps_ae.value, e.eps_ba.complement, e.eps_be.value};
    Rng rng(seed);
    long failures = 0;
    for (long t = 0; t < trials; ++t) {
        bool success = true;
        for (double p : ok) {
            success = (rng.uniform() < p) && success;
        }
        failures += success ? 0 : 1;
    }
    ValidationResult r;
    r.analytic = lfp(e);
    r.trials = trials;
    r.seed = seed;
    r.failures = failures;
    r.empirical = static_cast<double>(failures) / static_cast<double>(trials);
    r.std_error = std::sqrt(r.empirical * (1.0 - r.empirical) / static_cast<double>(trials));
    r.band = 4.0 * std::sqrt(r.analytic * (1.0 - r.analytic) / static_cast<double>(trials));
    r.pass = std::abs(r.empirical - r.analytic) <= r.band;
    return r;
}

inline nlohmann::json to_json(const ValidationResult& r)
{
    return {{"analytic", r.analytic}, {"empirical", r.empirical}, {"std_error", r.std_error},
            {"band", r.band},         {"failures", r.failures},   {"trials", r.trials},
            {"seed", r.seed},         {"pass", r.pass}};
}

} // namespace fblsec
