#include "aoiwear/model.hpp"

#include <algorithm>
#include <cmath>

namespace aoiwear {

Action action_from_code(int code) {
    switch (code) {
    case 0: return Action::Wait;
    case 1: return Action::Transmit;
    case 2: return Action::Renew;
    default: throw std::invalid_argument("unknown action code " + std::to_string(code));
    }
}

const char* action_name(Action a) {
    switch (a) {
    case Action::Wait: return "wait";
    case Action::Transmit: return "transmit";
    case Action::Renew: return "renew";
    }
    return "?";
}

std::string to_string(const State& s) {
    return "(" + std::to_string(s.d) + "," + std::to_string(s.delta) + "," +
           std::to_string(s.b) + ")";
}

void ModelConfig::validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
    if (max_deterioration < 1) fail("D must be >= 1");
    if (max_aoi < 1) fail("delta_max must be >= 1");
    if (bucket_capacity < 1) fail("B must be >= 1");
    if (wear_per_transmit < 2) fail("T_D must be > 1");
    if (renewal_slots < 1) fail("T_A must be >= 1");
    if (transmit_cost < 0) fail("c must be nonnegative");
    if (token_prob < 0 || token_prob > 1) fail("P_B must be in [0,1]");
    if (profile.kind == SuccessProfile::Kind::Linear) {
        if (profile.p_hi <= 0 || profile.p_hi > 1 || profile.p_lo < 0 || profile.p_lo > 1)
            fail("linear profile endpoints must be probabilities");
        if (profile.p_lo > profile.p_hi)
            fail("linear profile must be nonincreasing (p_lo <= p_hi)");
    } else {
        if (profile.alpha > 0) fail("exponential profile must be nonincreasing (alpha <= 0)");
    }
    for (int d = 1; d <= max_deterioration; ++d) {
        const double p = success_prob(*this, d);
        if (p < 0 || p > 1) fail("P_s(" + std::to_string(d) + ") outside [0,1]");
    }
    if (success_prob(*this, 1) >= 1.0) fail("P_s(1) must be < 1");
}

double success_prob(const ModelConfig& cfg, int d) {
    if (d < 1 || d > cfg.max_deterioration)
        throw std::domain_error("deterioration level " + std::to_string(d) +
                                " outside [1," + std::to_string(cfg.max_deterioration) + "]");
    const SuccessProfile& p = cfg.profile;
    if (p.kind == SuccessProfile::Kind::Linear) {
        if (cfg.max_deterioration == 1) return p.p_hi;
        const double step = (p.p_lo - p.p_hi) / (cfg.max_deterioration - 1);
        return p.p_hi + (d - 1) * step;
    }
    return std::exp(p.alpha * d + p.beta);
}

std::vector<Action> feasible_actions(const ModelConfig& cfg, const State& s) {
    if (s.b < cfg.bucket_capacity) return {Action::Wait, Action::Transmit};
    if (s.d == cfg.max_deterioration && s.delta == cfg.max_aoi)
        return {Action::Renew};  // mandatory restoration
    return {Action::Wait, Action::Transmit, Action::Renew};
}

bool is_feasible(const ModelConfig& cfg, const State& s, Action a) {
    const auto acts = feasible_actions(cfg, s);
    return std::find(acts.begin(), acts.end(), a) != acts.end();
}

int next_deterioration(const ModelConfig& cfg, int d, Action a) {
    switch (a) {
    case Action::Wait: return std::min(d + 1, cfg.max_deterioration);
    case Action::Transmit: return std::min(d + cfg.wear_per_transmit, cfg.max_deterioration);
    case Action::Renew: return 1;
    }
    throw std::invalid_argument("bad action");
}

namespace {

void add_entry(TransitionDistribution& dist, const State& to, double prob) {
    if (prob <= 0.0) return;
    for (auto& e : dist) {
        if (e.to == to) {
            e.prob += prob;
            return;
        }
    }
    dist.push_back({to, prob});
}

}  // namespace

TransitionDistribution transitions(const ModelConfig& cfg, const State& s, Action a) {
    if (!is_feasible(cfg, s, a))
        throw std::invalid_argument("action " + std::string(action_name(a)) +
                                    " infeasible at state " + to_string(s));
    TransitionDistribution dist;
    const int next_b_arrival = std::min(s.b + 1, cfg.bucket_capacity);
    switch (a) {
    case Action::Wait: {
        const int nd = next_deterioration(cfg, s.d, a);
        const int ndelta = std::min(s.delta + 1, cfg.max_aoi);
        add_entry(dist, {nd, ndelta, next_b_arrival}, cfg.token_prob);
        add_entry(dist, {nd, ndelta, s.b}, 1.0 - cfg.token_prob);
        break;
    }
    case Action::Transmit: {
        const int nd = next_deterioration(cfg, s.d, a);
        const double ps = success_prob(cfg, s.d);
        const int stale = std::min(s.delta + 1, cfg.max_aoi);
        add_entry(dist, {nd, 1, next_b_arrival}, ps * cfg.token_prob);
        add_entry(dist, {nd, 1, s.b}, ps * (1.0 - cfg.token_prob));
        add_entry(dist, {nd, stale, next_b_arrival}, (1.0 - ps) * cfg.token_prob);
        add_entry(dist, {nd, stale, s.b}, (1.0 - ps) * (1.0 - cfg.token_prob));
        break;
    }
    case Action::Renew:
        // no token arrivals during restoration
        add_entry(dist, {1, 1, 0}, 1.0);
        break;
    }
    return dist;
}

double stage_cost(const ModelConfig& cfg, const State& s, Action a) {
    double g = s.delta;
    if (a == Action::Transmit) g += cfg.transmit_cost;
    if (a == Action::Renew) {
        for (int i = 1; i <= cfg.renewal_slots; ++i) {
            const int accrued = cfg.cost_cap_mode == CostCapMode::Capped
                                    ? std::min(s.delta + i, cfg.max_aoi)
                                    : std::max(s.delta + i, cfg.max_aoi);
            g += accrued;
        }
    }
    return g;
}

StateIndex enumerate_states(const ModelConfig& cfg) { return StateIndex(cfg); }

Kernel::Kernel(const ModelConfig& cfg) : index_(cfg) {
    rows_.resize(index_.size());
    for (int i = 0; i < index_.size(); ++i) {
        const State s = index_.state(i);
        for (Action a : feasible_actions(cfg, s)) {
            Choice ch;
            ch.action = a;
            ch.cost = stage_cost(cfg, s, a);
            for (const auto& e : transitions(cfg, s, a))
                ch.successors.emplace_back(index_.index(e.to), e.prob);
            rows_[i].push_back(std::move(ch));
        }
    }
}

}  // namespace aoiwear
