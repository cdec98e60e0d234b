#pragma once

#include "otfbandit/environment.hpp"
#include "otfbandit/estimator.hpp"
#include "otfbandit/types.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

namespace otf {

enum class PolicyKind { otf_linucb, otf_lints, oracle_linucb, random };

PolicyKind parse_policy_kind(std::string_view text);
std::string_view to_string(PolicyKind kind);

struct PolicyConfig {
    PolicyKind kind = PolicyKind::otf_linucb;
    double delta = 0.05;
    double lambda = 1.0;
    std::int64_t window = 100;
    WidthMode width_mode = WidthMode::cached;
    // Multiplies the Thompson sampling covariance. 1 in normal use; 0 collapses
    // the sampler onto the estimate.
    double ts_covariance_scale = 1.0;
};

// Throws ConfigError unless delta in (0, 1], lambda > 0, window >= 0 and the
// covariance scale is non-negative.
void validate(const PolicyConfig& config);

// What the learner receives at the end of a round. `reward` is the undelayed
// X_t; only the oracle baseline is allowed to read it.
struct RoundFeedback {
    const Vector& action;
    std::span<const ConversionEvent> events;
    int reward = 0;
};

// select() must not change the policy's state beyond drawing from `rng`;
// observe() is the only mutator.
class Policy {
public:
    virtual ~Policy() = default;
    virtual std::size_t select(const ActionSet& action_set, Rng& rng) const = 0;
    virtual void observe(const RoundFeedback& feedback) = 0;
    virtual PolicyKind kind() const = 0;
    // Underlying estimator, when the policy has one.
    virtual const WindowedEstimator* estimator() const { return nullptr; }
};

std::unique_ptr<Policy> make_policy(const PolicyConfig& config, Eigen::Index d);

// Index of the largest score; the lowest index wins ties.
std::size_t argmax_lowest_index(std::span<const double> scores);

// <a, theta_hat> + width * |a|_{V^{-1}} for every action.
std::vector<double> ucb_scores(const WindowedEstimator& est, double width, const ActionSet& action_set);

std::size_t otf_linucb_select(const WindowedEstimator& est, const PolicyConfig& config,
                              const ActionSet& action_set);

// 1 + window_norm_sum / f_{t,delta}. Cached norms unless told otherwise.
double otf_lints_beta(const WindowedEstimator& est, double delta, WidthMode mode = WidthMode::cached);

// Draws theta_tilde ~ N(theta_hat, scale * beta * V^{-1}) using the Cholesky
// factor of V^{-1}. Throws NumericalError if V^{-1} cannot be factored.
Vector sample_perturbed_parameter(const WindowedEstimator& est, const PolicyConfig& config, Rng& rng);

std::size_t otf_lints_select(const WindowedEstimator& est, const PolicyConfig& config,
                             const ActionSet& action_set, Rng& rng);

// LinUCB with width f_{t,delta}; expects an estimator fed undelayed rewards.
std::size_t oracle_linucb_select(const WindowedEstimator& est, const PolicyConfig& config,
                                 const ActionSet& action_set);

std::size_t random_select(const ActionSet& action_set, Rng& rng);

// Feeds one round of delayed feedback into a windowed estimator. Conversions
// for earlier rounds are applied before the new action enters the window, so a
// conversion that took exactly m rounds still counts; a zero-delay conversion
// of the current round is applied after the action is recorded.
void apply_delayed_feedback(WindowedEstimator& est, const RoundFeedback& feedback);

} // namespace otf
