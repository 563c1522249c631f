// fblsec: solve, trace, sweep and validate round-trip LFP allocations.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fblsec/fblsec.hpp"

namespace {

using namespace fblsec;

std::vector<Method> parse_methods(const std::string& list)
{
    std::vector<Method> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            try {
                out.push_back(parse_method(item));
            } catch (const std::invalid_argument& e) {
                throw InputError(e.what());
            }
        }
    }
    if (out.empty()) {
        throw InputError("no methods given");
    }
    return out;
}

std::ofstream open_output(const std::string& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw InputError("cannot write '" + path + "'");
    }
    return out;
}

struct SolveArgs {
    std::string scenario;
    std::string method = "bcd";
    int exponent = 4;
    bool no_safeguard = false;
    bool relaxed = false;
    bool all_budgets = false;
    int max_outer = SolverConfig{}.max_outer_iters;
    double rel_tol = SolverConfig{}.rel_tol;

    SolverConfig config() const
    {
        SolverConfig c;
        c.surrogate_exponent = exponent;
        c.mm_safeguard = !no_safeguard;
        c.integer_mode = !relaxed;
        c.full_budget_only = !all_budgets;
        c.max_outer_iters = max_outer;
        c.rel_tol = rel_tol;
        try {
            c.validate();
        } catch (const std::invalid_argument& e) {
            throw InputError(e.what());
        }
        return c;
    }
};

int cmd_solve(const SolveArgs& args)
{
    const Method method = parse_methods(args.method).front();
    const Scenario s = materialize(load_scenario(args.scenario));
    const SolverConfig config = args.config();
    if (method == Method::exhaustive && !config.integer_mode) {
        throw InputError("--relaxed does not apply to the exhaustive method");
    }
    const SolverReport report = solve(method, s, config);
    std::cout << report_to_json(report, s).dump(2) << '\n';
    return report.status == SolverStatus::infeasible ? exit_infeasible : exit_ok;
}

int cmd_converge(const SolveArgs& args, const std::string& methods, const std::string& out_path)
{
    const Scenario s = materialize(load_scenario(args.scenario));
    const ConvergenceRun run = run_convergence(s, parse_methods(methods), args.config());
    if (run.benchmark.status == SolverStatus::infeasible) {
        std::cerr << "scenario is infeasible\n";
        return exit_infeasible;
    }
    auto out = open_output(out_path);
    write_trace_csv(out, run);
    for (const auto& r : run.runs) {
        std::cerr << to_string(r.method) << ": " << to_string(r.status) << " after " << r.outer_iterations()
                  << " iterations, lfp " << format_number(r.lfp_final) << '\n';
    }
    std::cerr << "exhaustive: lfp " << format_number(run.benchmark.lfp_final) << '\n';
    return exit_ok;
}

int cmd_sweep(const SolveArgs& args, SweepSpec sweep, const std::string& methods, const std::string& out_path)
{
    const ScenarioSpec spec = load_scenario(args.scenario);
    sweep.methods = parse_methods(methods);
    sweep.validate();
    const auto rows = run_sweep(spec, sweep, args.config());
    auto out = open_output(out_path);
    write_sweep_csv(out, sweep.vary, rows);

    std::string plot_path = out_path;
    if (const auto dot = plot_path.rfind('.'); dot != std::string::npos && plot_path.find('/', dot) == std::string::npos) {
        plot_path.erase(dot);
    }
    plot_path += ".plot.py";
    auto plot = open_output(plot_path);
    plot << sweep_plot_script(out_path, sweep.vary);
    std::cerr << rows.size() << " rows written to " << out_path << ", plot script " << plot_path << '\n';
    return exit_ok;
}

int cmd_validate(const std::string& scenario_path, long m1, long dr1, long dr2, long trials, std::uint64_t seed)
{
    const Scenario s = materialize(load_scenario(scenario_path));
    if (m1 < 1 || m1 > s.M() - 1 || dr1 < 0 || dr2 < 0) {
        throw InputError("validate: need 1 <= m1 <= M-1 and nonnegative redundancy");
    }
    const Allocation a{static_cast<double>(m1), static_cast<double>(s.M() - m1), static_cast<double>(dr1),
                       static_cast<double>(dr2), true};
    const ValidationResult r = monte_carlo_lfp(link_errors(s, a), trials, seed);
    nlohmann::json j = to_json(r);
    j["allocation"] = {{"m1", a.m1}, {"m2", a.m2}, {"d_r1", a.d_r1}, {"d_r2", a.d_r2}};
    const FeasibleBox box = redundancy_bounds(s, a.m1, a.m2);
    j["feasible"] = box.feasible && box.range(1).contains(a.d_r1) && box.range(2).contains(a.d_r2);
    std::cout << j.dump(2) << '\n';
    return exit_ok;
}

void add_solver_flags(CLI::App* cmd, SolveArgs& args)
{
    cmd->add_option("--scenario", args.scenario, "Scenario JSON file")->required();
    cmd->add_option("--exponent", args.exponent, "Surrogate exponent for mm (2 or 4)")->check(CLI::IsMember({2, 4}));
    cmd->add_flag("--no-safeguard", args.no_safeguard, "Accept mm surrogate steps even if the LFP rises");
    cmd->add_flag("--relaxed", args.relaxed, "Report the relaxed (real-valued) solution");
    cmd->add_flag("--all-budgets", args.all_budgets, "Exhaustive: enumerate every m1 + m2 <= M");
    cmd->add_option("--max-outer", args.max_outer, "Outer iteration cap");
    cmd->add_option("--rel-tol", args.rel_tol, "Relative LFP change stopping tolerance");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Leakage-failure probability optimization for round-trip short-packet transmissions"};
    app.require_subcommand(1);

    SolveArgs solve_args;
    auto* solve_cmd = app.add_subcommand("solve", "Solve one scenario and print a JSON report");
    add_solver_flags(solve_cmd, solve_args);
    solve_cmd->add_option("--method", solve_args.method, "exhaustive | bcd | mm")->required();

    SolveArgs conv_args;
    std::string conv_methods = "bcd,mm";
    std::string conv_out;
    auto* conv_cmd = app.add_subcommand("converge", "Write per-iteration LFP traces with the exhaustive benchmark");
    add_solver_flags(conv_cmd, conv_args);
    conv_cmd->add_option("--methods", conv_methods, "Comma-separated iterative methods");
    conv_cmd->add_option("--out", conv_out, "Output CSV")->required();

    SolveArgs sweep_args;
    SweepSpec sweep;
    std::string sweep_methods = "bcd,mm";
    std::string sweep_out;
    auto* sweep_cmd = app.add_subcommand("sweep", "Sweep one parameter and write a CSV plus a plot script");
    add_solver_flags(sweep_cmd, sweep_args);
    sweep_cmd->add_option("--vary", sweep.vary, "gamma_ab_db | gamma_ae_db | gamma_ba_db | gamma_be_db | M | tx_power")
        ->required();
    sweep_cmd->add_option("--from", sweep.from)->required();
    sweep_cmd->add_option("--to", sweep.to)->required();
    sweep_cmd->add_option("--step", sweep.step)->required();
    sweep_cmd->add_option("--methods", sweep_methods, "Comma-separated methods");
    sweep_cmd->add_option("--out", sweep_out, "Output CSV")->required();

    std::string val_scenario;
    long val_m1 = 0;
    long val_dr1 = 0;
    long val_dr2 = 0;
    long val_trials = 1000000;
    std::uint64_t val_seed = 1;
    auto* val_cmd = app.add_subcommand("validate", "Monte-Carlo check of the analytic LFP at an allocation");
    val_cmd->add_option("--scenario", val_scenario, "Scenario JSON file")->required();
    val_cmd->add_option("--m1", val_m1)->required();
    val_cmd->add_option("--dr1", val_dr1)->required();
    val_cmd->add_option("--dr2", val_dr2)->required();
    val_cmd->add_option("--trials", val_trials);
    val_cmd->add_option("--seed", val_seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_input_error;
    }

    try {
        if (*solve_cmd) {
            return cmd_solve(solve_args);
        }
        if (*conv_cmd) {
            return cmd_converge(conv_args, conv_methods, conv_out);
        }
        if (*sweep_cmd) {
            return cmd_sweep(sweep_args, sweep, sweep_methods, sweep_out);
        }
        if (*val_cmd) {
            return cmd_validate(val_scenario, val_m1, val_dr1, val_dr2, val_trials, val_seed);
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input_error;
    }
    return exit_input_error;
}
