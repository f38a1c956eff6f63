#include "aoiwear/simulator.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

namespace aoiwear {

namespace {

// Uniform double in [0,1) from the raw engine output; avoids the
// implementation-defined std::bernoulli_distribution so seeded runs are
// reproducible across standard libraries.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(std::mt19937_64& rng, double p) {
    return uniform01(rng) < p;
}

std::string format_cost(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

}  // namespace

SimReport simulate(const ModelConfig& cfg, const PolicyTable& policy,
                   const SimParams& params) {
    cfg.validate();
    const StateIndex idx(cfg);
    if (static_cast<int>(policy.size()) != idx.size())
        throw std::invalid_argument("policy table size does not match state space");
    if (!idx.contains(params.init))
        throw std::invalid_argument("initial state outside the state space");
    if (params.burn_in < 0 || params.steps <= params.burn_in)
        throw std::invalid_argument("steps must exceed burn_in >= 0");

    std::mt19937_64 rng(params.seed);
    State s = params.init;
    SimReport report;
    report.stages = params.steps;
    if (params.record_trace) report.trace.reserve(static_cast<size_t>(params.steps));

    double cost_sum = 0.0;
    double aoi_sum = 0.0;
    std::int64_t slot_sum = 0;

    for (std::int64_t stage = 0; stage < params.steps; ++stage) {
        const Action a = policy[idx.index(s)];
        if (!is_feasible(cfg, s, a))
            throw std::invalid_argument("policy assigns infeasible action at " + to_string(s));
        const double g = stage_cost(cfg, s, a);
        const int slots = a == Action::Renew ? cfg.renewal_slots : 1;

        report.action_counts[action_code(a)] += 1;
        if (a == Action::Renew) report.renewals += 1;
        if (stage >= params.burn_in) {
            cost_sum += g;
            aoi_sum += s.delta;
            slot_sum += slots;
        }
        if (params.record_trace)
            report.trace.push_back({stage, s, a, g, slots});

        State next;
        next.d = next_deterioration(cfg, s.d, a);
        if (a == Action::Renew) {
            next.delta = 1;
            next.b = 0;
        } else {
            const bool delivered = a == Action::Transmit && bernoulli(rng, success_prob(cfg, s.d));
            next.delta = delivered ? 1 : std::min(s.delta + 1, cfg.max_aoi);
            next.b = bernoulli(rng, cfg.token_prob) ? std::min(s.b + 1, cfg.bucket_capacity)
                                                    : s.b;
        }
        s = next;
    }

    const double counted = static_cast<double>(params.steps - params.burn_in);
    report.avg_cost_per_stage = cost_sum / counted;
    report.avg_cost_per_slot = cost_sum / static_cast<double>(slot_sum);
    report.avg_aoi = aoi_sum / counted;
    report.slots = slot_sum;
    return report;
}

void trace_export(const SimReport& report, std::ostream& out) {
    out << "stage,d,delta,b,action,cost,slot_count\n";
    for (const auto& row : report.trace) {
        out << row.stage << "," << row.state.d << "," << row.state.delta << ","
            << row.state.b << "," << action_code(row.action) << ","
            << format_cost(row.cost) << "," << row.slot_count << "\n";
    }
}

void trace_export(const SimReport& report, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open trace file " + path);
    trace_export(report, out);
    if (!out.good()) throw std::runtime_error("write failure on trace file " + path);
}

}  // namespace aoiwear
