#include "aoiwear/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace aoiwear {

std::pair<double, Action> bellman_backup(const Kernel& kernel,
                                         const std::vector<double>& h, int i,
                                         double tau) {
    double best = std::numeric_limits<double>::infinity();
    Action best_action = Action::Wait;
    for (const auto& ch : kernel.choices(i)) {
        double q = 0.0;
        for (const auto& [j, p] : ch.successors) q += p * h[j];
        q = ch.cost + tau * q;
        if (q < best) {
            best = q;
            best_action = ch.action;
        }
    }
    return {best, best_action};
}

PolicyTable extract_policy(const Kernel& kernel, const std::vector<double>& h,
                           double tau) {
    PolicyTable policy(kernel.size());
    for (int i = 0; i < kernel.size(); ++i)
        policy[i] = bellman_backup(kernel, h, i, tau).second;
    return policy;
}

SolveResult rvi_solve(const Kernel& kernel, const SolverParams& params) {
    if (params.tau <= 0.0 || params.tau >= 1.0)
        throw std::invalid_argument("tau must be in (0,1)");
    if (params.epsilon <= 0.0) throw std::invalid_argument("epsilon must be positive");
    if (!kernel.states().contains(params.ref_state))
        throw std::invalid_argument("reference state outside the state space");

    const int n = kernel.size();
    const int ref = kernel.states().index(params.ref_state);
    std::vector<double> h(n, 0.0), next(n, 0.0), backed(n);
    std::vector<double> residual_tail;

    double lambda = 0.0;
    double residual = std::numeric_limits<double>::infinity();
    int iter = 0;
    for (; iter < params.max_iters; ++iter) {
        for (int i = 0; i < n; ++i) backed[i] = bellman_backup(kernel, h, i, params.tau).first;
        lambda = backed[ref];
        residual = 0.0;
        for (int i = 0; i < n; ++i) {
            next[i] = (1.0 - params.tau) * h[i] + backed[i] - lambda;
            residual = std::max(residual, std::abs(next[i] - h[i]));
        }
        if (!std::isfinite(residual) || !std::isfinite(lambda))
            throw SolveFailure("RVI iterate became non-finite at iteration " +
                                   std::to_string(iter + 1),
                               residual_tail);
        std::swap(h, next);
        residual_tail.push_back(residual);
        if (residual_tail.size() > 32)
            residual_tail.erase(residual_tail.begin());
        if (residual < params.epsilon) break;
    }
    if (residual >= params.epsilon)
        throw SolveFailure("RVI did not converge within " +
                               std::to_string(params.max_iters) +
                               " iterations (residual " + std::to_string(residual) + ")",
                           residual_tail);

    SolveResult result;
    result.lambda_star = lambda;
    result.h = std::move(h);
    result.policy = extract_policy(kernel, result.h, params.tau);
    result.iters = iter + 1;
    result.residual = residual;
    result.residual_tail = std::move(residual_tail);
    return result;
}

SolveResult rvi_solve(const ModelConfig& cfg, const SolverParams& params) {
    cfg.validate();
    return rvi_solve(Kernel(cfg), params);
}

ReachabilityReport verify_reachability(const ModelConfig& cfg) {
    const Kernel kernel(cfg);
    const StateIndex& idx = kernel.states();
    const int n = kernel.size();
    std::vector<char> covered(n, 0);
    covered[idx.index(State{1, 1, 0})] = 1;

    ReachabilityReport report;
    report.m = 0;
    // Synchronous rounds: one round corresponds to one decision stage, so m
    // bounds the number of stages within which every policy must allow a
    // positive-probability visit to the reference state.
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<char> additions(n, 0);
        for (int i = 0; i < n; ++i) {
            if (covered[i]) continue;
            bool all_actions_reach = true;
            for (const auto& ch : kernel.choices(i)) {
                bool some_successor = false;
                for (const auto& [j, p] : ch.successors) {
                    if (p > 0.0 && covered[j]) {
                        some_successor = true;
                        break;
                    }
                }
                if (!some_successor) {
                    all_actions_reach = false;
                    break;
                }
            }
            if (all_actions_reach) additions[i] = 1;
        }
        for (int i = 0; i < n; ++i) {
            if (additions[i]) {
                covered[i] = 1;
                changed = true;
            }
        }
        if (changed) ++report.m;
    }
    for (int i = 0; i < n; ++i)
        if (!covered[i]) report.offending_states.push_back(idx.state(i));
    report.ok = report.offending_states.empty();
    if (report.m == 0) report.m = 1;  // reference state alone still needs one stage
    return report;
}

}  // namespace aoiwear
