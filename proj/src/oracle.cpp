#include "aoiwear/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <ostream>

namespace aoiwear {

namespace {

// Dense linear solve with partial pivoting; A is modified in place.
std::vector<double> solve_linear(std::vector<std::vector<double>>& A,
                                 std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(A[r][col]) > std::abs(A[pivot][col])) pivot = r;
        if (std::abs(A[pivot][col]) < 1e-14)
            throw StructuralError("singular linear system in stationary solve", {});
        std::swap(A[col], A[pivot]);
        std::swap(b[col], b[pivot]);
        for (int r = col + 1; r < n; ++r) {
            const double f = A[r][col] / A[col][col];
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c) A[r][c] -= f * A[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < n; ++c) s -= A[r][c] * x[c];
        x[r] = s / A[r][r];
    }
    return x;
}

std::vector<double> stationary_from_rows(const std::vector<std::vector<double>>& P) {
    const int n = static_cast<int>(P.size());
    // (P^T - I) pi = 0 with the last balance row replaced by sum(pi) = 1.
    std::vector<std::vector<double>> A(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A[j][i] = P[i][j] - (i == j ? 1.0 : 0.0);
    for (int j = 0; j < n; ++j) A[n - 1][j] = 1.0;
    std::vector<double> rhs(n, 0.0);
    rhs[n - 1] = 1.0;
    auto Acopy = A;
    std::vector<double> pi = solve_linear(Acopy, rhs);

    double residual = 0.0;
    for (int j = 0; j < n; ++j) {
        double balance = -pi[j];
        for (int i = 0; i < n; ++i) balance += pi[i] * P[i][j];
        residual = std::max(residual, std::abs(balance));
    }
    double total = 0.0;
    for (double& v : pi) {
        if (v < 0.0) {
            if (v < -1e-9)
                throw StructuralError("stationary distribution has a negative entry", {});
            v = 0.0;
        }
        total += v;
    }
    if (residual > 1e-8 || std::abs(total - 1.0) > 1e-8)
        throw StructuralError("stationary solve residual too large", {});
    for (double& v : pi) v /= total;
    return pi;
}

}  // namespace

std::vector<double> stationary_distribution(const std::vector<std::vector<double>>& P) {
    return stationary_from_rows(P);
}

namespace {

// Indices (into `members`) that cannot reach `target` through the induced
// edges. `succ[i]` lists local successor indices.
std::vector<int> unreaching(const std::vector<std::vector<int>>& succ, int target) {
    const int n = static_cast<int>(succ.size());
    std::vector<std::vector<int>> pred(n);
    for (int i = 0; i < n; ++i)
        for (int j : succ[i]) pred[j].push_back(i);
    std::vector<char> reaches(n, 0);
    std::deque<int> queue{target};
    reaches[target] = 1;
    while (!queue.empty()) {
        const int j = queue.front();
        queue.pop_front();
        for (int i : pred[j]) {
            if (!reaches[i]) {
                reaches[i] = 1;
                queue.push_back(i);
            }
        }
    }
    std::vector<int> missing;
    for (int i = 0; i < n; ++i)
        if (!reaches[i]) missing.push_back(i);
    return missing;
}

// Average cost of a policy restricted to a transition-closed set of states.
// `members` are global state indices, `actions[i]` the action at members[i].
double closed_set_average(const Kernel& kernel, const std::vector<int>& members,
                          const std::vector<Action>& actions) {
    const int n = static_cast<int>(members.size());
    std::vector<int> local(kernel.size(), -1);
    for (int i = 0; i < n; ++i) local[members[i]] = i;

    std::vector<std::vector<double>> P(n, std::vector<double>(n, 0.0));
    std::vector<std::vector<int>> succ(n);
    std::vector<double> cost(n, 0.0);
    for (int i = 0; i < n; ++i) {
        const auto& choices = kernel.choices(members[i]);
        const auto it = std::find_if(choices.begin(), choices.end(),
                                     [&](const auto& ch) { return ch.action == actions[i]; });
        if (it == choices.end())
            throw std::invalid_argument("infeasible action inside closed set");
        cost[i] = it->cost;
        for (const auto& [j, p] : it->successors) {
            P[i][local[j]] += p;
            succ[i].push_back(local[j]);
        }
    }
    // Unichain check: (1,1,0) is members[0] by construction.
    if (!unreaching(succ, 0).empty())
        throw StructuralError("induced chain is not unichain over the reachable set", {});
    const std::vector<double> pi = stationary_from_rows(P);
    double avg = 0.0;
    for (int i = 0; i < n; ++i) avg += pi[i] * cost[i];
    return avg;
}

}  // namespace

PolicyEvaluation evaluate_policy(const ModelConfig& cfg, const PolicyTable& policy) {
    const Kernel kernel(cfg);
    const StateIndex& idx = kernel.states();
    const int n = kernel.size();
    if (static_cast<int>(policy.size()) != n)
        throw std::invalid_argument("policy table size does not match state space");

    std::vector<std::vector<double>> P(n, std::vector<double>(n, 0.0));
    std::vector<std::vector<int>> succ(n);
    std::vector<double> cost(n, 0.0);
    for (int i = 0; i < n; ++i) {
        const State s = idx.state(i);
        if (!is_feasible(cfg, s, policy[i]))
            throw std::invalid_argument("policy assigns infeasible action at " + to_string(s));
        cost[i] = stage_cost(cfg, s, policy[i]);
        for (const auto& e : transitions(cfg, s, policy[i])) {
            P[i][idx.index(e.to)] += e.prob;
            succ[i].push_back(idx.index(e.to));
        }
    }
    const int ref = idx.index(State{1, 1, 0});
    const std::vector<int> missing = unreaching(succ, ref);
    if (!missing.empty()) {
        std::vector<State> states;
        for (int i : missing) states.push_back(idx.state(i));
        throw StructuralError("induced chain cannot reach (1,1,0) from " +
                                  std::to_string(states.size()) + " states",
                              std::move(states));
    }

    PolicyEvaluation eval;
    eval.policy = policy;
    eval.occupancy = stationary_from_rows(P);
    eval.average_cost = 0.0;
    for (int i = 0; i < n; ++i) eval.average_cost += eval.occupancy[i] * cost[i];
    return eval;
}

namespace {

constexpr double kTieTolerance = 1e-9;

struct Candidate {
    double cost;
    std::vector<std::pair<int, Action>> assignment;  // (state index, action)
};

struct Enumerator {
    const Kernel& kernel;
    std::uint64_t max_evaluations;
    std::ostream* audit;

    std::vector<int> assigned;        // per state index: action code or -1
    std::vector<char> reachable;      // discovered from (1,1,0) so far
    std::vector<int> members;         // reachable indices in discovery order
    std::uint64_t evaluations = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    std::vector<Candidate> near_optimal;

    Enumerator(const Kernel& k, std::uint64_t budget, std::ostream* out)
        : kernel(k), max_evaluations(budget), audit(out),
          assigned(k.size(), -1), reachable(k.size(), 0) {
        const int ref = k.states().index(State{1, 1, 0});
        reachable[ref] = 1;
        members.push_back(ref);
    }

    void run() { descend(); }

    void descend() {
        int pending = -1;
        for (int i : members) {
            if (assigned[i] < 0) {
                pending = i;
                break;
            }
        }
        if (pending < 0) {
            evaluate_leaf();
            return;
        }
        for (const auto& ch : kernel.choices(pending)) {
            assigned[pending] = action_code(ch.action);
            std::vector<int> newly;
            for (const auto& [j, p] : ch.successors) {
                if (p > 0.0 && !reachable[j]) {
                    reachable[j] = 1;
                    members.push_back(j);
                    newly.push_back(j);
                }
            }
            descend();
            for (int j : newly) reachable[j] = 0;
            members.resize(members.size() - newly.size());
            assigned[pending] = -1;
        }
    }

    void evaluate_leaf() {
        if (++evaluations > max_evaluations)
            throw OracleSizeError(
                "policy enumeration exceeded the evaluation budget (" +
                std::to_string(max_evaluations) + "); use the RVI solver instead");
        std::vector<Action> actions;
        actions.reserve(members.size());
        for (int i : members) actions.push_back(action_from_code(assigned[i]));
        const double cost = closed_set_average(kernel, members, actions);
        if (audit) *audit << evaluations << "," << cost << "\n";
        if (cost < best_cost) best_cost = cost;
        if (cost <= best_cost + kTieTolerance) {
            Candidate c;
            c.cost = cost;
            for (size_t i = 0; i < members.size(); ++i)
                c.assignment.emplace_back(members[i], actions[i]);
            near_optimal.push_back(std::move(c));
        }
    }
};

}  // namespace

BruteForceResult brute_force_optimal(const ModelConfig& cfg,
                                     std::uint64_t max_evaluations,
                                     std::ostream* audit) {
    cfg.validate();
    const Kernel kernel(cfg);
    const StateIndex& idx = kernel.states();
    if (audit) *audit << "policy_id,average_cost\n";

    Enumerator en(kernel, max_evaluations, audit);
    en.run();
    if (!std::isfinite(en.best_cost))
        throw StructuralError("no feasible policy induces a unichain", {});

    // Drop candidates that were only near the running minimum at the time
    // they were recorded.
    std::vector<Candidate> optimal;
    for (auto& c : en.near_optimal)
        if (c.cost <= en.best_cost + kTieTolerance) optimal.push_back(std::move(c));

    // Minimum cost; exact ties resolve to the first candidate in DFS
    // order, which is the lexicographically smallest assignment.
    const Candidate* best = &optimal.front();
    for (const auto& c : optimal)
        if (c.cost < best->cost) best = &c;

    BruteForceResult result;
    result.policies_evaluated = en.evaluations;

    // Complete the effective assignment to a full feasible table.
    PolicyTable full(idx.size());
    const State mandatory{cfg.max_deterioration, cfg.max_aoi, cfg.bucket_capacity};
    for (int i = 0; i < idx.size(); ++i)
        full[i] = idx.state(i) == mandatory ? Action::Renew : Action::Wait;
    for (const auto& [i, a] : best->assignment) full[i] = a;
    result.best = evaluate_policy(cfg, full);

    // A state's optimal action is pinned down only when every optimal
    // policy reaches it and agrees on it.
    result.action_unique.assign(idx.size(), 0);
    for (int i = 0; i < idx.size(); ++i) {
        int agreed = -1;
        bool unique = true;
        for (const auto& c : optimal) {
            int code = -1;
            for (const auto& [j, a] : c.assignment)
                if (j == i) code = action_code(a);
            if (code < 0 || (agreed >= 0 && code != agreed)) {
                unique = false;
                break;
            }
            agreed = code;
        }
        result.action_unique[i] = (unique && agreed >= 0) ? 1 : 0;
    }
    return result;
}

}  // namespace aoiwear
