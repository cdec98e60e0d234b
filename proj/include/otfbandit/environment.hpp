#pragma once

#include "otfbandit/delay_model.hpp"
#include "otfbandit/types.hpp"

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

namespace otf {

// Finite set of actions offered in one round. Every action has the same
// dimension and Euclidean norm at most 1.
class ActionSet {
public:
    explicit ActionSet(std::vector<Vector> actions);

    std::size_t size() const { return actions_.size(); }
    Eigen::Index dim() const { return actions_.front().size(); }
    const Vector& operator[](std::size_t i) const { return actions_[i]; }
    const std::vector<Vector>& actions() const { return actions_; }

    // Standard basis {e_1, ..., e_K} in R^K.
    static ActionSet standard_basis(std::size_t K);

private:
    std::vector<Vector> actions_;
};

// K vectors drawn uniformly from {0,1}^d minus the origin, each scaled to unit norm.
ActionSet generate_action_set(Rng& rng, std::size_t d, std::size_t K);

// A revealed conversion: the reward of the action played in round `round` was 1.
struct ConversionEvent {
    Round round;
    int value = 1;

    friend bool operator==(const ConversionEvent&, const ConversionEvent&) = default;
};

// Result of one environment round. `events` is what the learner sees; `reward`
// and `delay` are ground truth for the current round, kept for diagnostics and
// for the undelayed baseline.
struct StepOutcome {
    std::vector<ConversionEvent> events;
    int reward = 0;
    std::int64_t delay = 0;
};

// Bernoulli linear bandit with stochastically delayed, censored positive
// feedback. Rounds are numbered from 1. A reward X_s = 1 drawn in round s with
// delay D_s is revealed exactly once, at the end of round s + D_s; zero rewards
// are never signalled.
class Environment {
public:
    Environment(Vector theta, DelayDistribution delays, Rng rng);

    // Plays `chosen` in the current round, then returns every conversion whose
    // reveal round is the current one (including the current round's own reward
    // when its delay is 0). Throws ConfigError if some action in the set has a
    // mean reward outside [0, 1].
    StepOutcome step(std::size_t chosen, const ActionSet& action_set);

    // max_a <theta, a> - <theta, chosen>; never negative.
    double instantaneous_regret(const Vector& chosen, const ActionSet& action_set) const;

    // Index of the best action, lowest index on ties.
    std::size_t best_action(const ActionSet& action_set) const;

    Round round() const { return t_; }
    const Vector& theta() const { return theta_; }
    const DelayDistribution& delays() const { return delays_; }
    std::size_t pending_count() const;

private:
    Vector theta_;
    DelayDistribution delays_;
    Rng rng_;
    Round t_ = 1;
    // Reveal round -> originating rounds. Only X_s = 1 entries are queued.
    std::map<Round, std::vector<Round>> pending_;
};

// Hard instance pair for the K-armed minimax argument:
// theta = (1/2 + gap, 1/2, ..., 1/2) and phi equal to theta except
// phi_i = 1/2 + 2 gap, with arm index i in [2, K] (1-based) and gap in (0, 1/4).
std::pair<Vector, Vector> make_k_armed_hard_pair(std::size_t K, double gap, std::size_t arm);

} // namespace otf
