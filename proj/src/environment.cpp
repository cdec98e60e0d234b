#include "otfbandit/environment.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace otf {

namespace {
constexpr double kRangeTol = 1e-9;
}

ActionSet::ActionSet(std::vector<Vector> actions) : actions_(std::move(actions)) {
    if (actions_.empty()) throw ConfigError("action set must contain at least one action");
    const auto d = actions_.front().size();
    if (d < 1) throw ConfigError("actions must have dimension >= 1");
    for (const auto& a : actions_) {
        if (a.size() != d) throw ConfigError("all actions must share one dimension");
        if (a.norm() > 1.0 + kRangeTol) throw ConfigError("action norm exceeds 1");
    }
}

ActionSet ActionSet::standard_basis(std::size_t K) {
    std::vector<Vector> basis;
    basis.reserve(K);
    for (std::size_t i = 0; i < K; ++i) {
        basis.push_back(Vector::Unit(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(i)));
    }
    return ActionSet(std::move(basis));
}

ActionSet generate_action_set(Rng& rng, std::size_t d, std::size_t K) {
    if (d < 1 || K < 1) throw ConfigError("action set needs d >= 1 and K >= 1");
    std::bernoulli_distribution coin(0.5);
    std::vector<Vector> actions;
    actions.reserve(K);
    while (actions.size() < K) {
        Vector a(static_cast<Eigen::Index>(d));
        for (Eigen::Index j = 0; j < a.size(); ++j) a[j] = coin(rng) ? 1.0 : 0.0;
        const double norm = a.norm();
        if (norm == 0.0) continue; // resample the origin
        actions.push_back(a / norm);
    }
    return ActionSet(std::move(actions));
}

Environment::Environment(Vector theta, DelayDistribution delays, Rng rng)
    : theta_(std::move(theta)), delays_(std::move(delays)), rng_(std::move(rng)) {
    // No norm check here: the K-armed hard instances have |theta| > 1 and only
    // need <a, theta> in [0, 1], which step() validates every round.
    if (theta_.size() < 1) throw ConfigError("theta must be non-empty");
}

StepOutcome Environment::step(std::size_t chosen, const ActionSet& action_set) {
    if (action_set.dim() != theta_.size()) throw ConfigError("action dimension does not match theta");
    if (chosen >= action_set.size()) throw ConfigError("chosen action index out of range");
    for (const auto& a : action_set.actions()) {
        const double mu = a.dot(theta_);
        if (mu < -kRangeTol || mu > 1.0 + kRangeTol) {
            throw ConfigError("mean reward out of range: <a, theta> = " + std::to_string(mu));
        }
    }

    const double mean = std::clamp(action_set[chosen].dot(theta_), 0.0, 1.0);
    StepOutcome out;
    out.reward = std::bernoulli_distribution(mean)(rng_) ? 1 : 0;
    out.delay = delays_.sample(rng_);
    if (out.reward == 1) pending_[t_ + out.delay].push_back(t_);

    if (auto it = pending_.find(t_); it != pending_.end()) {
        out.events.reserve(it->second.size());
        for (Round s : it->second) out.events.push_back(ConversionEvent{s});
        pending_.erase(it);
    }
    ++t_;
    return out;
}

double Environment::instantaneous_regret(const Vector& chosen, const ActionSet& action_set) const {
    const double best = action_set[best_action(action_set)].dot(theta_);
    return std::max(0.0, best - chosen.dot(theta_));
}

std::size_t Environment::best_action(const ActionSet& action_set) const {
    std::size_t best = 0;
    double best_value = action_set[0].dot(theta_);
    for (std::size_t i = 1; i < action_set.size(); ++i) {
        const double v = action_set[i].dot(theta_);
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    return best;
}

std::size_t Environment::pending_count() const {
    std::size_t n = 0;
    for (const auto& [round, sources] : pending_) n += sources.size();
    return n;
}

std::pair<Vector, Vector> make_k_armed_hard_pair(std::size_t K, double gap, std::size_t arm) {
    if (K < 2) throw ConfigError("hard instance needs K >= 2");
    if (!(gap > 0.0 && gap < 0.25)) throw ConfigError("hard instance gap must lie in (0, 1/4)");
    if (arm < 2 || arm > K) throw ConfigError("hard instance arm index must lie in [2, K]");
    Vector theta = Vector::Constant(static_cast<Eigen::Index>(K), 0.5);
    theta[0] = 0.5 + gap;
    Vector phi = theta;
    phi[static_cast<Eigen::Index>(arm - 1)] = 0.5 + 2.0 * gap;
    return {std::move(theta), std::move(phi)};
}

} // namespace otf
