#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace aoiwear {

/// Actions available to the transmitter at each decision stage.
enum class Action : int { Wait = 0, Transmit = 1, Renew = 2 };

inline int action_code(Action a) { return static_cast<int>(a); }
Action action_from_code(int code);
const char* action_name(Action a);

/// Success-probability profile over deterioration levels.
struct SuccessProfile {
    enum class Kind { Linear, Exponential };
    Kind kind = Kind::Linear;
    // linear: evenly spaced from p_hi at d=1 down to p_lo at d=D
    double p_hi = 0.95;
    double p_lo = 0.001;
    // exponential: exp(alpha * d + beta)
    double alpha = -0.7618;
    double beta = 0.7105;
};

/// How the renewal term of the stage cost treats the AoI bound: clamp the
/// accrued AoI at delta_max (Capped) or take the literal max (Literal).
enum class CostCapMode { Capped, Literal };

struct ModelConfig {
    int max_deterioration = 10;   // D
    int max_aoi = 10;             // Delta
    int bucket_capacity = 8;      // B
    int wear_per_transmit = 2;    // T_D, must be >= 2
    int renewal_slots = 4;        // T_A
    double transmit_cost = 1.0;   // c
    double token_prob = 0.1;      // P_B
    SuccessProfile profile;
    CostCapMode cost_cap_mode = CostCapMode::Capped;

    /// Throws std::invalid_argument on any violated parameter constraint.
    void validate() const;
};

/// System state: deterioration level d in [1,D], AoI delta in [1,Delta],
/// token count b in [0,B].
struct State {
    int d = 1;
    int delta = 1;
    int b = 0;

    friend bool operator==(const State&, const State&) = default;
    auto operator<=>(const State&) const = default;
};

std::string to_string(const State& s);

/// Bijection between states and contiguous indices 0..n-1,
/// d-major, then delta, then b.
class StateIndex {
public:
    explicit StateIndex(const ModelConfig& cfg)
        : max_deterioration_(cfg.max_deterioration), max_aoi_(cfg.max_aoi),
          bucket_capacity_(cfg.bucket_capacity) {}

    int size() const {
        return max_deterioration_ * max_aoi_ * (bucket_capacity_ + 1);
    }

    int index(const State& s) const {
        return ((s.d - 1) * max_aoi_ + (s.delta - 1)) * (bucket_capacity_ + 1) + s.b;
    }

    State state(int i) const {
        const int nb = bucket_capacity_ + 1;
        return State{i / (max_aoi_ * nb) + 1, (i / nb) % max_aoi_ + 1, i % nb};
    }

    bool contains(const State& s) const {
        return s.d >= 1 && s.d <= max_deterioration_ && s.delta >= 1 &&
               s.delta <= max_aoi_ && s.b >= 0 && s.b <= bucket_capacity_;
    }

private:
    int max_deterioration_;
    int max_aoi_;
    int bucket_capacity_;
};

struct TransitionEntry {
    State to;
    double prob;
};

/// Distribution over distinct successor states; probabilities sum to 1.
using TransitionDistribution = std::vector<TransitionEntry>;

/// P_s(d). Throws std::domain_error for d outside [1, D].
double success_prob(const ModelConfig& cfg, int d);

/// Feasible action set at s. Renewal requires a full bucket; at
/// (D, Delta, B) renewal is the only option.
std::vector<Action> feasible_actions(const ModelConfig& cfg, const State& s);

bool is_feasible(const ModelConfig& cfg, const State& s, Action a);

/// Deterioration update: wait adds 1, transmit adds T_D (both clamped at D),
/// renewal resets to 1.
int next_deterioration(const ModelConfig& cfg, int d, Action a);

/// Merged successor distribution for (s, a). Coinciding saturated branches
/// are aggregated and zero-probability branches dropped.
/// Throws std::invalid_argument if a is infeasible at s.
TransitionDistribution transitions(const ModelConfig& cfg, const State& s, Action a);

/// Stage cost g(s, a): AoI, plus c when transmitting, plus the AoI accrued
/// over the T_A restoration slots when renewing.
double stage_cost(const ModelConfig& cfg, const State& s, Action a);

StateIndex enumerate_states(const ModelConfig& cfg);

/// Precomputed transition kernel: per state, the feasible actions with their
/// stage costs and index-resolved successor distributions.
class Kernel {
public:
    struct Choice {
        Action action;
        double cost;
        std::vector<std::pair<int, double>> successors;  // (state index, prob)
    };

    explicit Kernel(const ModelConfig& cfg);

    const StateIndex& states() const { return index_; }
    int size() const { return index_.size(); }
    const std::vector<Choice>& choices(int i) const { return rows_[i]; }

    /// Adds a uniform offset to every stage cost; shifts the optimal average
    /// cost by the same amount without changing the optimal policy.
    void shift_costs(double offset) {
        for (auto& row : rows_)
            for (auto& ch : row) ch.cost += offset;
    }

private:
    StateIndex index_;
    std::vector<std::vector<Choice>> rows_;
};

}  // namespace aoiwear
