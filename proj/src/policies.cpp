#include "otfbandit/policies.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <string>

namespace otf {

PolicyKind parse_policy_kind(std::string_view text) {
    if (text == "otf_linucb") return PolicyKind::otf_linucb;
    if (text == "otf_lints") return PolicyKind::otf_lints;
    if (text == "oracle" || text == "oracle_linucb") return PolicyKind::oracle_linucb;
    if (text == "random") return PolicyKind::random;
    throw ConfigError("unknown policy '" + std::string(text) + "'");
}

std::string_view to_string(PolicyKind kind) {
    switch (kind) {
    case PolicyKind::otf_linucb: return "otf_linucb";
    case PolicyKind::otf_lints: return "otf_lints";
    case PolicyKind::oracle_linucb: return "oracle_linucb";
    case PolicyKind::random: return "random";
    }
    return "unknown";
}

void validate(const PolicyConfig& config) {
    if (!(config.delta > 0.0 && config.delta <= 1.0)) throw ConfigError("delta must lie in (0, 1]");
    if (!(config.lambda > 0.0) || !std::isfinite(config.lambda)) throw ConfigError("lambda must be positive");
    if (config.window < 0) throw ConfigError("window m must be non-negative");
    if (!(config.ts_covariance_scale >= 0.0)) throw ConfigError("covariance scale must be non-negative");
}

std::size_t argmax_lowest_index(std::span<const double> scores) {
    if (scores.empty()) throw ConfigError("cannot select from an empty action set");
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
        if (scores[i] > scores[best]) best = i;
    }
    return best;
}

std::vector<double> ucb_scores(const WindowedEstimator& est, double width, const ActionSet& action_set) {
    const Vector theta_hat = est.estimate();
    std::vector<double> scores;
    scores.reserve(action_set.size());
    for (const auto& a : action_set.actions()) {
        scores.push_back(a.dot(theta_hat) + width * est.mahalanobis_norm(a));
    }
    return scores;
}

std::size_t otf_linucb_select(const WindowedEstimator& est, const PolicyConfig& config,
                              const ActionSet& action_set) {
    const double width = est.confidence_width(config.delta, config.width_mode);
    return argmax_lowest_index(ucb_scores(est, width, action_set));
}

double otf_lints_beta(const WindowedEstimator& est, double delta, WidthMode mode) {
    return 1.0 + est.window_norm_sum(mode) / est.exploration_radius(delta);
}

Vector sample_perturbed_parameter(const WindowedEstimator& est, const PolicyConfig& config, Rng& rng) {
    Vector theta = est.estimate();
    if (config.ts_covariance_scale == 0.0) return theta;

    Eigen::LLT<Matrix> llt(est.design_inverse());
    if (llt.info() != Eigen::Success) throw NumericalError("V^{-1} is not positive definite");

    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector z(est.dim());
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = gauss(rng);

    const double beta = otf_lints_beta(est, config.delta, config.width_mode);
    const Vector correlated = llt.matrixL() * z;
    theta += std::sqrt(config.ts_covariance_scale * beta) * correlated;
    return theta;
}

std::size_t otf_lints_select(const WindowedEstimator& est, const PolicyConfig& config,
                             const ActionSet& action_set, Rng& rng) {
    if (action_set.size() == 0) throw ConfigError("cannot select from an empty action set");
    const Vector theta = sample_perturbed_parameter(est, config, rng);
    std::vector<double> scores;
    scores.reserve(action_set.size());
    for (const auto& a : action_set.actions()) scores.push_back(a.dot(theta));
    return argmax_lowest_index(scores);
}

std::size_t oracle_linucb_select(const WindowedEstimator& est, const PolicyConfig& config,
                                 const ActionSet& action_set) {
    return argmax_lowest_index(ucb_scores(est, est.exploration_radius(config.delta), action_set));
}

std::size_t random_select(const ActionSet& action_set, Rng& rng) {
    if (action_set.size() == 0) throw ConfigError("cannot select from an empty action set");
    std::uniform_int_distribution<std::size_t> pick(0, action_set.size() - 1);
    return pick(rng);
}

void apply_delayed_feedback(WindowedEstimator& est, const RoundFeedback& feedback) {
    const Round current = est.round();
    for (const auto& e : feedback.events) {
        if (e.round < current) est.record_conversion(e.round);
    }
    est.record_action(feedback.action);
    for (const auto& e : feedback.events) {
        if (e.round == current) est.record_conversion(e.round);
    }
}

namespace {

class OtfLinUcb final : public Policy {
public:
    OtfLinUcb(const PolicyConfig& config, Eigen::Index d)
        : config_(config), est_(d, config.lambda, config.window) {}

    std::size_t select(const ActionSet& action_set, Rng&) const override {
        return otf_linucb_select(est_, config_, action_set);
    }
    void observe(const RoundFeedback& feedback) override { apply_delayed_feedback(est_, feedback); }
    PolicyKind kind() const override { return PolicyKind::otf_linucb; }
    const WindowedEstimator* estimator() const override { return &est_; }

private:
    PolicyConfig config_;
    WindowedEstimator est_;
};

class OtfLinTs final : public Policy {
public:
    OtfLinTs(const PolicyConfig& config, Eigen::Index d)
        : config_(config), est_(d, config.lambda, config.window) {}

    std::size_t select(const ActionSet& action_set, Rng& rng) const override {
        return otf_lints_select(est_, config_, action_set, rng);
    }
    void observe(const RoundFeedback& feedback) override { apply_delayed_feedback(est_, feedback); }
    PolicyKind kind() const override { return PolicyKind::otf_lints; }
    const WindowedEstimator* estimator() const override { return &est_; }

private:
    PolicyConfig config_;
    WindowedEstimator est_;
};

// Sees X_t immediately, so a one-slot window is enough to attribute it.
class OracleLinUcb final : public Policy {
public:
    OracleLinUcb(const PolicyConfig& config, Eigen::Index d) : config_(config), est_(d, config.lambda, 1) {}

    std::size_t select(const ActionSet& action_set, Rng&) const override {
        return oracle_linucb_select(est_, config_, action_set);
    }
    void observe(const RoundFeedback& feedback) override {
        const Round current = est_.round();
        est_.record_action(feedback.action);
        if (feedback.reward == 1) est_.record_conversion(current);
    }
    PolicyKind kind() const override { return PolicyKind::oracle_linucb; }
    const WindowedEstimator* estimator() const override { return &est_; }

private:
    PolicyConfig config_;
    WindowedEstimator est_;
};

class RandomPolicy final : public Policy {
public:
    std::size_t select(const ActionSet& action_set, Rng& rng) const override {
        return random_select(action_set, rng);
    }
    void observe(const RoundFeedback&) override {}
    PolicyKind kind() const override { return PolicyKind::random; }
};

} // namespace

std::unique_ptr<Policy> make_policy(const PolicyConfig& config, Eigen::Index d) {
    validate(config);
    switch (config.kind) {
    case PolicyKind::otf_linucb: return std::make_unique<OtfLinUcb>(config, d);
    case PolicyKind::otf_lints: return std::make_unique<OtfLinTs>(config, d);
    case PolicyKind::oracle_linucb: return std::make_unique<OracleLinUcb>(config, d);
    case PolicyKind::random: return std::make_unique<RandomPolicy>();
    }
    throw ConfigError("unknown policy kind");
}

} // namespace otf
