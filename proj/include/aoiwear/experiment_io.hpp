#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "aoiwear/model.hpp"
#include "aoiwear/simulator.hpp"
#include "aoiwear/solver.hpp"

namespace aoiwear {

struct SweepSpec {
    std::vector<double> token_probs = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    std::vector<int> wear_values = {2, 3};
    std::vector<SuccessProfile::Kind> profiles = {SuccessProfile::Kind::Linear,
                                                  SuccessProfile::Kind::Exponential};
};

struct ExperimentSpec {
    ModelConfig model;
    SolverParams solver;
    std::optional<SweepSpec> sweep;
    std::optional<SimParams> sim;
    std::string output_dir = "out";
};

ModelConfig model_config_from_json(const nlohmann::json& j);
nlohmann::json model_config_to_json(const ModelConfig& cfg);

/// Accepts either a bare ModelConfig document or an object with a `model`
/// key plus optional `solver`, `sweep`, `sim`, and `output_dir` sections.
ExperimentSpec experiment_spec_from_json(const nlohmann::json& j);
ExperimentSpec load_experiment_spec(const std::string& path);
nlohmann::json experiment_spec_to_json(const ExperimentSpec& spec);

nlohmann::json solve_result_to_json(const SolveResult& result);
nlohmann::json sim_report_to_json(const SimReport& report);

struct PolicyRow {
    State state;
    Action action;
};

/// policy.csv: columns d,delta,b,action with one row per state in
/// StateIndex order.
void write_policy_csv(const ModelConfig& cfg, const PolicyTable& policy,
                      std::ostream& out);
PolicyTable read_policy_csv(const ModelConfig& cfg, std::istream& in);

struct SweepRow {
    std::string profile;
    int wear_per_transmit;
    double token_prob;
    double lambda_star;  // NaN when the point failed
    std::string error;
};

/// sweep.csv: columns profile,T_D,P_B,lambda_star,error.
void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out);
std::vector<SweepRow> read_sweep_csv(std::istream& in);

std::string format_double(double v);

}  // namespace aoiwear
