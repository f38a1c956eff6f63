#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "aoiwear/model.hpp"
#include "aoiwear/solver.hpp"

namespace aoiwear {

struct SimParams {
    std::int64_t steps = 1'000'000;  // decision stages to simulate
    std::uint64_t seed = 1;
    State init{1, 1, 0};
    std::int64_t burn_in = 10'000;   // stages discarded before averaging
    bool record_trace = false;
};

struct TraceRow {
    std::int64_t stage;
    State state;
    Action action;
    double cost;
    int slot_count;
};

struct SimReport {
    double avg_cost_per_stage = 0.0;
    double avg_cost_per_slot = 0.0;
    double avg_aoi = 0.0;
    std::int64_t action_counts[3] = {0, 0, 0};
    std::int64_t renewals = 0;
    std::int64_t stages = 0;
    std::int64_t slots = 0;  // counted slots after burn-in
    std::vector<TraceRow> trace;
};

/// Seeded rollout of a policy through the system dynamics. A renewal stage
/// accounts for T_A time slots, every other stage for one. Bit-identical
/// across runs for a fixed (cfg, policy, params).
SimReport simulate(const ModelConfig& cfg, const PolicyTable& policy,
                   const SimParams& params);

/// CSV trace with columns stage,d,delta,b,action,cost,slot_count.
void trace_export(const SimReport& report, std::ostream& out);
void trace_export(const SimReport& report, const std::string& path);

}  // namespace aoiwear
