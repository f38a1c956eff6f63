#pragma once

#include <utility>
#include <vector>

#include "aoiwear/model.hpp"

namespace aoiwear {

/// Action per state, dense over StateIndex.
using PolicyTable = std::vector<Action>;

struct SolverParams {
    double tau = 0.2;          // relaxation factor, in (0,1)
    double epsilon = 1e-9;     // sup-norm convergence tolerance
    int max_iters = 200000;
    State ref_state{1, 1, 0};  // subtracted fixed state
};

struct SolveResult {
    double lambda_star = 0.0;   // optimal average cost per decision stage
    std::vector<double> h;      // differential cost vector
    PolicyTable policy;
    int iters = 0;
    double residual = 0.0;
    std::vector<double> residual_tail;  // sup-norm residuals of the last iterations
};

/// Thrown when RVI fails to converge; carries the tail of the residual
/// trajectory for diagnosis.
struct SolveFailure : std::runtime_error {
    SolveFailure(const std::string& msg, std::vector<double> tail)
        : std::runtime_error(msg), residual_tail(std::move(tail)) {}
    std::vector<double> residual_tail;
};

struct ReachabilityReport {
    bool ok = false;
    int m = 0;                        // fixpoint rounds until coverage
    std::vector<State> offending_states;  // states that cannot force a visit
};

/// Relaxed Bellman backup at state i: minimum over feasible actions of
/// g(i,a) + tau * sum_j p_ij(a) h(j). Ties broken toward the smallest
/// action code.
std::pair<double, Action> bellman_backup(const Kernel& kernel,
                                         const std::vector<double>& h, int i,
                                         double tau);

PolicyTable extract_policy(const Kernel& kernel, const std::vector<double>& h,
                           double tau);

/// Relaxed relative value iteration from h = 0 until the sup-norm of
/// successive differences drops below params.epsilon.
SolveResult rvi_solve(const ModelConfig& cfg, const SolverParams& params);
SolveResult rvi_solve(const Kernel& kernel, const SolverParams& params);

/// Fixpoint check that the reference state (1,1,0) is reached with positive
/// probability from every state under every policy: a state joins the
/// covered set once each of its feasible actions has a positive-probability
/// successor already covered.
ReachabilityReport verify_reachability(const ModelConfig& cfg);

}  // namespace aoiwear
