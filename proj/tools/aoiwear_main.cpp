// Command-line front end: solve, sweep, check, oracle, and simulate runs
// driven by a JSON experiment config. Each run writes its outputs plus a
// config.json snapshot into the output directory.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "aoiwear/experiment_io.hpp"
#include "aoiwear/model.hpp"
#include "aoiwear/oracle.hpp"
#include "aoiwear/simulator.hpp"
#include "aoiwear/solver.hpp"

namespace {

namespace fs = std::filesystem;
using aoiwear::ExperimentSpec;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInvalidConfig = 2;
constexpr int kExitNoConvergence = 3;

struct CommonOpts {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "experiment config (JSON)")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", opts.out_dir, "output directory (overrides config)");
    cmd->add_option("--seed", opts.seed, "simulation seed (overrides config)")
        ->each([&opts](const std::string&) { opts.seed_set = true; });
    cmd->add_flag("--quiet", opts.quiet, "suppress progress output");
}

ExperimentSpec load_spec(const CommonOpts& opts) {
    ExperimentSpec spec = aoiwear::load_experiment_spec(opts.config_path);
    if (!opts.out_dir.empty()) spec.output_dir = opts.out_dir;
    if (opts.seed_set) {
        if (!spec.sim) spec.sim.emplace();
        spec.sim->seed = opts.seed;
    }
    return spec;
}

fs::path prepare_run_dir(const ExperimentSpec& spec) {
    const fs::path dir(spec.output_dir);
    fs::create_directories(dir);
    std::ofstream out(dir / "config.json");
    out << aoiwear::experiment_spec_to_json(spec).dump(2) << "\n";
    return dir;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path.string());
    out << text;
}

std::string policy_csv_string(const aoiwear::ModelConfig& cfg,
                              const aoiwear::PolicyTable& policy) {
    std::ostringstream os;
    aoiwear::write_policy_csv(cfg, policy, os);
    return os.str();
}

int cmd_solve(const CommonOpts& opts) {
    const ExperimentSpec spec = load_spec(opts);
    const fs::path dir = prepare_run_dir(spec);
    const aoiwear::SolveResult result = aoiwear::rvi_solve(spec.model, spec.solver);
    write_text(dir / "policy.csv", policy_csv_string(spec.model, result.policy));
    write_text(dir / "solve.json", aoiwear::solve_result_to_json(result).dump(2) + "\n");
    if (!opts.quiet)
        std::cout << "lambda_star=" << aoiwear::format_double(result.lambda_star)
                  << " iters=" << result.iters << " residual=" << result.residual << "\n";
    return kExitOk;
}

int cmd_sweep(const CommonOpts& opts) {
    ExperimentSpec spec = load_spec(opts);
    if (!spec.sweep) {
        std::cerr << "error: config has no sweep section\n";
        return kExitInvalidConfig;
    }
    const fs::path dir = prepare_run_dir(spec);
    std::vector<aoiwear::SweepRow> rows;
    for (auto kind : spec.sweep->profiles) {
        for (int wear : spec.sweep->wear_values) {
            for (double pb : spec.sweep->token_probs) {
                aoiwear::ModelConfig cfg = spec.model;
                cfg.profile.kind = kind;
                cfg.wear_per_transmit = wear;
                cfg.token_prob = pb;
                aoiwear::SweepRow row;
                row.profile =
                    kind == aoiwear::SuccessProfile::Kind::Linear ? "linear" : "exponential";
                row.wear_per_transmit = wear;
                row.token_prob = pb;
                row.lambda_star = std::nan("");
                try {
                    row.lambda_star = aoiwear::rvi_solve(cfg, spec.solver).lambda_star;
                } catch (const std::exception& e) {
                    row.error = e.what();
                }
                if (!opts.quiet)
                    std::cout << row.profile << " T_D=" << wear << " P_B=" << pb << " -> "
                              << (row.error.empty() ? aoiwear::format_double(row.lambda_star)
                                                    : row.error)
                              << "\n";
                rows.push_back(std::move(row));
            }
        }
    }
    std::ostringstream os;
    aoiwear::write_sweep_csv(rows, os);
    write_text(dir / "sweep.csv", os.str());
    return kExitOk;
}

int cmd_check(const CommonOpts& opts) {
    const ExperimentSpec spec = load_spec(opts);
    const aoiwear::ReachabilityReport report = aoiwear::verify_reachability(spec.model);
    std::cout << "ok=" << (report.ok ? "true" : "false") << " m=" << report.m << "\n";
    if (!report.ok) {
        std::cout << "offending_states=" << report.offending_states.size() << "\n";
        if (!opts.quiet)
            for (const auto& s : report.offending_states)
                std::cout << "  " << aoiwear::to_string(s) << "\n";
        return kExitCheckFailed;
    }
    return kExitOk;
}

int cmd_oracle(const CommonOpts& opts) {
    const ExperimentSpec spec = load_spec(opts);
    const fs::path dir = prepare_run_dir(spec);

    std::ofstream audit(dir / "oracle_audit.csv");
    const aoiwear::BruteForceResult oracle =
        aoiwear::brute_force_optimal(spec.model, 10'000'000, &audit);
    const aoiwear::SolveResult rvi = aoiwear::rvi_solve(spec.model, spec.solver);
    const double gap = std::abs(rvi.lambda_star - oracle.best.average_cost);

    nlohmann::json j = {
        {"oracle",
         {{"lambda_star", oracle.best.average_cost},
          {"policies_evaluated", oracle.policies_evaluated},
          {"policy_csv", policy_csv_string(spec.model, oracle.best.policy)}}},
        {"rvi",
         {{"lambda_star", rvi.lambda_star},
          {"iters", rvi.iters},
          {"policy_csv", policy_csv_string(spec.model, rvi.policy)}}},
        {"gap", gap}};
    write_text(dir / "oracle.json", j.dump(2) + "\n");
    if (!opts.quiet)
        std::cout << "oracle=" << aoiwear::format_double(oracle.best.average_cost)
                  << " rvi=" << aoiwear::format_double(rvi.lambda_star) << " gap=" << gap
                  << "\n";
    return kExitOk;
}

int cmd_simulate(const CommonOpts& opts, const std::string& policy_path) {
    ExperimentSpec spec = load_spec(opts);
    if (!spec.sim) {
        std::cerr << "error: config has no sim section\n";
        return kExitInvalidConfig;
    }
    const fs::path dir = prepare_run_dir(spec);

    aoiwear::PolicyTable policy;
    if (!policy_path.empty()) {
        std::ifstream in(policy_path);
        if (!in) {
            std::cerr << "error: cannot open policy file " << policy_path << "\n";
            return kExitInvalidConfig;
        }
        policy = aoiwear::read_policy_csv(spec.model, in);
    } else {
        policy = aoiwear::rvi_solve(spec.model, spec.solver).policy;
    }

    const aoiwear::SimReport report = aoiwear::simulate(spec.model, policy, *spec.sim);
    write_text(dir / "sim.json", aoiwear::sim_report_to_json(report).dump(2) + "\n");
    if (spec.sim->record_trace) aoiwear::trace_export(report, (dir / "trace.csv").string());
    if (!opts.quiet)
        std::cout << "avg_cost_per_stage=" << aoiwear::format_double(report.avg_cost_per_stage)
                  << " avg_cost_per_slot=" << aoiwear::format_double(report.avg_cost_per_slot)
                  << " renewals=" << report.renewals << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"AoI-optimal scheduling over a wearing channel"};
    app.require_subcommand(1);

    CommonOpts solve_opts, sweep_opts, check_opts, oracle_opts, sim_opts;
    std::string policy_path;

    CLI::App* solve = app.add_subcommand("solve", "solve for the optimal policy");
    add_common(solve, solve_opts);
    CLI::App* sweep = app.add_subcommand("sweep", "solve over a parameter grid");
    add_common(sweep, sweep_opts);
    CLI::App* check = app.add_subcommand("check", "verify reference-state reachability");
    add_common(check, check_opts);
    CLI::App* oracle = app.add_subcommand("oracle", "brute-force validation of the solver");
    add_common(oracle, oracle_opts);
    CLI::App* simulate = app.add_subcommand("simulate", "Monte-Carlo rollout of a policy");
    add_common(simulate, sim_opts);
    simulate->add_option("--policy", policy_path, "policy.csv to roll out (default: solve)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(solve_opts);
        if (sweep->parsed()) return cmd_sweep(sweep_opts);
        if (check->parsed()) return cmd_check(check_opts);
        if (oracle->parsed()) return cmd_oracle(oracle_opts);
        if (simulate->parsed()) return cmd_simulate(sim_opts, policy_path);
    } catch (const aoiwear::SolveFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoConvergence;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitInvalidConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitInvalidConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidConfig;
    }
    return kExitOk;
}
