#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "aoiwear/model.hpp"
#include "aoiwear/solver.hpp"

namespace aoiwear {

/// Long-run average cost and state occupancy of a fixed stationary policy.
struct PolicyEvaluation {
    PolicyTable policy;
    double average_cost = 0.0;
    std::vector<double> occupancy;  // stationary distribution over StateIndex
};

/// The chain induced by a policy is not unichain with (1,1,0) recurrent.
struct StructuralError : std::runtime_error {
    StructuralError(const std::string& msg, std::vector<State> states)
        : std::runtime_error(msg), disconnected_states(std::move(states)) {}
    std::vector<State> disconnected_states;
};

/// Brute-force enumeration would exceed the evaluation budget.
struct OracleSizeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BruteForceResult {
    PolicyEvaluation best;
    /// Per state: true when every cost-optimal policy pins down the same
    /// action there. States never visited by an optimal policy are not
    /// pinned down.
    std::vector<std::uint8_t> action_unique;
    std::uint64_t policies_evaluated = 0;
};

/// Stationary distribution of a dense row-stochastic matrix, solved as a
/// linear system with one balance equation replaced by normalization.
/// Throws StructuralError when the solve residual exceeds 1e-8.
std::vector<double> stationary_distribution(const std::vector<std::vector<double>>& P);

/// Builds the induced Markov chain and returns its occupancy-weighted
/// average stage cost. Requires the induced chain to reach (1,1,0) from
/// every state; otherwise throws StructuralError naming the cut-off states.
PolicyEvaluation evaluate_policy(const ModelConfig& cfg, const PolicyTable& policy);

/// Exhaustive minimum over all feasible deterministic stationary policies.
/// Enumerates policies restricted to the states reachable from (1,1,0)
/// under each candidate; assignments outside that closed set cannot change
/// the long-run average. If `audit` is non-null, writes a CSV of
/// (policy_id, average_cost) rows for every evaluated policy.
BruteForceResult brute_force_optimal(const ModelConfig& cfg,
                                     std::uint64_t max_evaluations = 10'000'000,
                                     std::ostream* audit = nullptr);

}  // namespace aoiwear
