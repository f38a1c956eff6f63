#include "aoiwear/experiment_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace aoiwear {

using nlohmann::json;

namespace {

SuccessProfile profile_from_json(const json& j) {
    SuccessProfile p;
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "linear") {
        p.kind = SuccessProfile::Kind::Linear;
        p.p_hi = j.at("p_hi").get<double>();
        p.p_lo = j.at("p_lo").get<double>();
    } else if (kind == "exponential") {
        p.kind = SuccessProfile::Kind::Exponential;
        p.alpha = j.at("alpha").get<double>();
        p.beta = j.at("beta").get<double>();
    } else {
        throw std::invalid_argument("profile kind must be \"linear\" or \"exponential\"");
    }
    return p;
}

json profile_to_json(const SuccessProfile& p) {
    if (p.kind == SuccessProfile::Kind::Linear)
        return {{"kind", "linear"}, {"p_hi", p.p_hi}, {"p_lo", p.p_lo}};
    return {{"kind", "exponential"}, {"alpha", p.alpha}, {"beta", p.beta}};
}

State state_from_json(const json& j) {
    if (!j.is_array() || j.size() != 3)
        throw std::invalid_argument("state must be a [d, delta, b] triple");
    return State{j[0].get<int>(), j[1].get<int>(), j[2].get<int>()};
}

}  // namespace

ModelConfig model_config_from_json(const json& j) {
    ModelConfig cfg;
    cfg.max_deterioration = j.at("D").get<int>();
    cfg.max_aoi = j.at("delta_max").get<int>();
    cfg.bucket_capacity = j.at("B").get<int>();
    cfg.wear_per_transmit = j.at("T_D").get<int>();
    cfg.renewal_slots = j.at("T_A").get<int>();
    cfg.transmit_cost = j.at("c").get<double>();
    cfg.token_prob = j.at("P_B").get<double>();
    cfg.profile = profile_from_json(j.at("profile"));
    if (j.contains("cost_cap_mode")) {
        const std::string mode = j.at("cost_cap_mode").get<std::string>();
        if (mode == "capped")
            cfg.cost_cap_mode = CostCapMode::Capped;
        else if (mode == "literal")
            cfg.cost_cap_mode = CostCapMode::Literal;
        else
            throw std::invalid_argument("cost_cap_mode must be \"capped\" or \"literal\"");
    }
    cfg.validate();
    return cfg;
}

json model_config_to_json(const ModelConfig& cfg) {
    return {{"D", cfg.max_deterioration},
            {"delta_max", cfg.max_aoi},
            {"B", cfg.bucket_capacity},
            {"T_D", cfg.wear_per_transmit},
            {"T_A", cfg.renewal_slots},
            {"c", cfg.transmit_cost},
            {"P_B", cfg.token_prob},
            {"profile", profile_to_json(cfg.profile)},
            {"cost_cap_mode",
             cfg.cost_cap_mode == CostCapMode::Capped ? "capped" : "literal"}};
}

ExperimentSpec experiment_spec_from_json(const json& j) {
    ExperimentSpec spec;
    const json& model = j.contains("model") ? j.at("model") : j;
    spec.model = model_config_from_json(model);

    if (j.contains("solver")) {
        const json& s = j.at("solver");
        if (s.contains("tau")) spec.solver.tau = s.at("tau").get<double>();
        if (s.contains("epsilon")) spec.solver.epsilon = s.at("epsilon").get<double>();
        if (s.contains("max_iters")) spec.solver.max_iters = s.at("max_iters").get<int>();
        if (s.contains("ref_state")) spec.solver.ref_state = state_from_json(s.at("ref_state"));
        if (spec.solver.tau <= 0 || spec.solver.tau >= 1)
            throw std::invalid_argument("solver.tau must be in (0,1)");
        if (spec.solver.epsilon <= 0)
            throw std::invalid_argument("solver.epsilon must be positive");
        if (!StateIndex(spec.model).contains(spec.solver.ref_state))
            throw std::invalid_argument("solver.ref_state outside the state space");
    }
    if (j.contains("sweep")) {
        const json& s = j.at("sweep");
        SweepSpec sweep;
        if (s.contains("P_B")) sweep.token_probs = s.at("P_B").get<std::vector<double>>();
        if (s.contains("T_D")) sweep.wear_values = s.at("T_D").get<std::vector<int>>();
        if (s.contains("profiles")) {
            sweep.profiles.clear();
            for (const auto& name : s.at("profiles")) {
                const std::string k = name.get<std::string>();
                if (k == "linear")
                    sweep.profiles.push_back(SuccessProfile::Kind::Linear);
                else if (k == "exponential")
                    sweep.profiles.push_back(SuccessProfile::Kind::Exponential);
                else
                    throw std::invalid_argument("unknown sweep profile " + k);
            }
        }
        if (sweep.token_probs.empty() || sweep.wear_values.empty() || sweep.profiles.empty())
            throw std::invalid_argument("sweep grids must be nonempty");
        spec.sweep = std::move(sweep);
    }
    if (j.contains("sim")) {
        const json& s = j.at("sim");
        SimParams sim;
        if (s.contains("steps")) sim.steps = s.at("steps").get<std::int64_t>();
        if (s.contains("seed")) sim.seed = s.at("seed").get<std::uint64_t>();
        if (s.contains("init")) sim.init = state_from_json(s.at("init"));
        if (s.contains("burn_in")) sim.burn_in = s.at("burn_in").get<std::int64_t>();
        if (s.contains("trace")) sim.record_trace = s.at("trace").get<bool>();
        if (sim.burn_in < 0 || sim.steps <= sim.burn_in)
            throw std::invalid_argument("sim.steps must exceed sim.burn_in >= 0");
        if (!StateIndex(spec.model).contains(sim.init))
            throw std::invalid_argument("sim.init outside the state space");
        spec.sim = sim;
    }
    if (j.contains("output_dir")) spec.output_dir = j.at("output_dir").get<std::string>();
    return spec;
}

ExperimentSpec load_experiment_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    json j;
    in >> j;
    return experiment_spec_from_json(j);
}

json experiment_spec_to_json(const ExperimentSpec& spec) {
    json j;
    j["model"] = model_config_to_json(spec.model);
    j["solver"] = {{"tau", spec.solver.tau},
                   {"epsilon", spec.solver.epsilon},
                   {"max_iters", spec.solver.max_iters},
                   {"ref_state", {spec.solver.ref_state.d, spec.solver.ref_state.delta,
                                  spec.solver.ref_state.b}}};
    if (spec.sweep) {
        json profiles = json::array();
        for (auto k : spec.sweep->profiles)
            profiles.push_back(k == SuccessProfile::Kind::Linear ? "linear" : "exponential");
        j["sweep"] = {{"P_B", spec.sweep->token_probs},
                      {"T_D", spec.sweep->wear_values},
                      {"profiles", profiles}};
    }
    if (spec.sim) {
        j["sim"] = {{"steps", spec.sim->steps},
                    {"seed", spec.sim->seed},
                    {"init", {spec.sim->init.d, spec.sim->init.delta, spec.sim->init.b}},
                    {"burn_in", spec.sim->burn_in},
                    {"trace", spec.sim->record_trace}};
    }
    // output_dir is deliberately not part of the snapshot: the snapshot
    // lives inside the run directory it would name.
    return j;
}

json solve_result_to_json(const SolveResult& result) {
    std::vector<int> codes;
    codes.reserve(result.policy.size());
    for (Action a : result.policy) codes.push_back(action_code(a));
    return {{"lambda_star", result.lambda_star},
            {"iters", result.iters},
            {"residual", result.residual},
            {"policy", codes},
            {"h", result.h}};
}

json sim_report_to_json(const SimReport& report) {
    return {{"avg_cost_per_stage", report.avg_cost_per_stage},
            {"avg_cost_per_slot", report.avg_cost_per_slot},
            {"avg_aoi", report.avg_aoi},
            {"action_counts",
             {{"wait", report.action_counts[0]},
              {"transmit", report.action_counts[1]},
              {"renew", report.action_counts[2]}}},
            {"renewals", report.renewals},
            {"stages", report.stages},
            {"slots", report.slots}};
}

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

void write_policy_csv(const ModelConfig& cfg, const PolicyTable& policy,
                      std::ostream& out) {
    const StateIndex idx(cfg);
    if (static_cast<int>(policy.size()) != idx.size())
        throw std::invalid_argument("policy table size does not match state space");
    out << "d,delta,b,action\n";
    for (int i = 0; i < idx.size(); ++i) {
        const State s = idx.state(i);
        out << s.d << "," << s.delta << "," << s.b << "," << action_code(policy[i]) << "\n";
    }
}

PolicyTable read_policy_csv(const ModelConfig& cfg, std::istream& in) {
    const StateIndex idx(cfg);
    PolicyTable policy(idx.size(), Action::Wait);
    std::vector<char> seen(idx.size(), 0);
    std::string line;
    if (!std::getline(in, line) || line != "d,delta,b,action")
        throw std::runtime_error("policy csv: bad header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        State s;
        int code;
        char comma;
        if (!(row >> s.d >> comma >> s.delta >> comma >> s.b >> comma >> code))
            throw std::runtime_error("policy csv: bad row \"" + line + "\"");
        if (!idx.contains(s))
            throw std::runtime_error("policy csv: state " + to_string(s) + " out of range");
        const int i = idx.index(s);
        if (seen[i]) throw std::runtime_error("policy csv: duplicate state " + to_string(s));
        seen[i] = 1;
        policy[i] = action_from_code(code);
    }
    for (int i = 0; i < idx.size(); ++i)
        if (!seen[i])
            throw std::runtime_error("policy csv: missing state " + to_string(idx.state(i)));
    return policy;
}

void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
    out << "profile,T_D,P_B,lambda_star,error\n";
    for (const auto& r : rows) {
        out << r.profile << "," << r.wear_per_transmit << "," << format_double(r.token_prob)
            << "," << (std::isnan(r.lambda_star) ? "" : format_double(r.lambda_star)) << ","
            << r.error << "\n";
    }
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
    std::vector<SweepRow> rows;
    std::string line;
    if (!std::getline(in, line) || line != "profile,T_D,P_B,lambda_star,error")
        throw std::runtime_error("sweep csv: bad header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        SweepRow r;
        std::string td, pb, lam;
        if (!std::getline(row, r.profile, ',') || !std::getline(row, td, ',') ||
            !std::getline(row, pb, ',') || !std::getline(row, lam, ','))
            throw std::runtime_error("sweep csv: bad row \"" + line + "\"");
        std::getline(row, r.error);
        r.wear_per_transmit = std::stoi(td);
        r.token_prob = std::stod(pb);
        r.lambda_star = lam.empty() ? std::nan("") : std::stod(lam);
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace aoiwear
