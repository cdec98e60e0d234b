#include "otfbandit/harness.hpp"

#include "otfbandit/environment.hpp"
#include "otfbandit/estimator.hpp"
#include "otfbandit/policies.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

namespace otf {

namespace {

std::size_t worker_count(std::size_t requested, std::size_t jobs) {
    std::size_t n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
    return std::min(n, jobs);
}

// Runs job(i) for i in [0, n) on `threads` workers. The first exception is
// rethrown after all workers have joined.
template <class Job>
void parallel_for(std::size_t n, std::size_t threads, Job job) {
    const std::size_t workers = worker_count(threads, n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    job(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                    next = n;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

ActionSet next_action_set(const ExperimentConfig& config, Rng& rng, const ActionSet* fixed) {
    if (fixed) return *fixed;
    return generate_action_set(rng, config.d, config.K);
}

} // namespace

EpisodeResult run_episode_detailed(const ExperimentConfig& config, std::size_t run_index) {
    validate(config);
    const std::uint64_t seed = config.base_seed + run_index;
    Rng action_rng = make_stream(seed, kActionStream);
    Rng policy_rng = make_stream(seed, kPolicyStream);
    Environment env(resolve_theta(config), config.delay, make_stream(seed, kEnvironmentStream));
    auto policy = make_policy(config.policy, static_cast<Eigen::Index>(config.d));

    // Tracks V_t for the potential independently of the policy's own state.
    WindowedEstimator potential(static_cast<Eigen::Index>(config.d), config.policy.lambda, 0);

    std::optional<ActionSet> basis;
    if (config.action_mode == ActionMode::fixed_basis) basis = ActionSet::standard_basis(config.K);

    EpisodeResult result;
    result.trace.run_id = run_index;
    result.trace.cumulative.reserve(static_cast<std::size_t>(config.T));
    double regret = 0.0;
    for (Round t = 1; t <= config.T; ++t) {
        const ActionSet actions = next_action_set(config, action_rng, basis ? &*basis : nullptr);
        const std::size_t chosen = policy->select(actions, policy_rng);
        const Vector& a = actions[chosen];

        const double norm = potential.mahalanobis_norm(a);
        result.elliptical_potential += norm * norm;
        potential.record_action(a);

        regret += env.instantaneous_regret(a, actions);
        const StepOutcome outcome = env.step(chosen, actions);
        result.positive_rewards += outcome.reward;
        result.conversions_observed += static_cast<std::int64_t>(outcome.events.size());
        policy->observe(RoundFeedback{a, outcome.events, outcome.reward});
        result.trace.cumulative.push_back(regret);
    }
    return result;
}

RegretTrace run_episode(const ExperimentConfig& config, std::size_t run_index) {
    return run_episode_detailed(config, run_index).trace;
}

SummaryStats summarize(std::vector<RegretTrace>& traces) {
    if (traces.empty()) throw ConfigError("cannot summarize zero traces");
    std::sort(traces.begin(), traces.end(),
              [](const RegretTrace& a, const RegretTrace& b) { return a.run_id < b.run_id; });
    const std::size_t T = traces.front().cumulative.size();
    for (const auto& tr : traces) {
        if (tr.cumulative.size() != T) throw ConfigError("traces have different lengths");
    }

    SummaryStats stats;
    stats.n_runs = traces.size();
    stats.mean.assign(T, 0.0);
    stats.stddev.assign(T, 0.0);
    const double n = static_cast<double>(traces.size());
    for (std::size_t t = 0; t < T; ++t) {
        double sum = 0.0;
        for (const auto& tr : traces) sum += tr.cumulative[t];
        const double mean = sum / n;
        double ss = 0.0;
        for (const auto& tr : traces) ss += (tr.cumulative[t] - mean) * (tr.cumulative[t] - mean);
        stats.mean[t] = mean;
        stats.stddev[t] = traces.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    }

    if (T > 0) {
        std::vector<double> finals;
        finals.reserve(traces.size());
        for (const auto& tr : traces) finals.push_back(tr.cumulative.back());
        std::sort(finals.begin(), finals.end());
        for (std::size_t q = 0; q < kFinalQuantileLevels.size(); ++q) {
            const double pos = kFinalQuantileLevels[q] * static_cast<double>(finals.size() - 1);
            const auto lo = static_cast<std::size_t>(std::floor(pos));
            const std::size_t hi = std::min(lo + 1, finals.size() - 1);
            const double frac = pos - static_cast<double>(lo);
            stats.final_quantiles[q] = finals[lo] + frac * (finals[hi] - finals[lo]);
        }
    }
    return stats;
}

std::vector<EpisodeResult> run_batch_detailed(const ExperimentConfig& config) {
    validate(config);
    std::vector<EpisodeResult> results(config.n_runs);
    parallel_for(config.n_runs, config.threads,
                 [&](std::size_t i) { results[i] = run_episode_detailed(config, i); });
    return results;
}

BatchResult run_batch(const ExperimentConfig& config) {
    auto detailed = run_batch_detailed(config);
    BatchResult batch;
    batch.traces.reserve(detailed.size());
    for (auto& r : detailed) batch.traces.push_back(std::move(r.trace));
    batch.stats = summarize(batch.traces);
    return batch;
}

double concentration_check(const ExperimentConfig& config, std::size_t n_reps) {
    validate(config);
    if (n_reps < 1) throw ConfigError("coverage needs at least one replication");
    const auto d = static_cast<Eigen::Index>(config.d);
    const Vector theta = resolve_theta(config);
    const double tau = config.delay.cdf_at(config.policy.window);
    const Vector target = tau * theta;

    // Shared action sequence: one action set and one uniformly chosen index per round.
    std::vector<ActionSet> sets;
    std::vector<std::size_t> picks;
    {
        Rng rng = make_stream(config.base_seed, kSequenceStream);
        std::optional<ActionSet> basis;
        if (config.action_mode == ActionMode::fixed_basis) basis = ActionSet::standard_basis(config.K);
        sets.reserve(static_cast<std::size_t>(config.T));
        for (Round t = 1; t <= config.T; ++t) {
            sets.push_back(next_action_set(config, rng, basis ? &*basis : nullptr));
            picks.push_back(random_select(sets.back(), rng));
        }
    }

    std::vector<char> covered(n_reps, 0);
    parallel_for(n_reps, config.threads, [&](std::size_t rep) {
        Environment env(theta, config.delay, make_stream(config.base_seed + rep, kEnvironmentStream));
        WindowedEstimator est(d, config.policy.lambda, config.policy.window);
        for (std::size_t i = 0; i < sets.size(); ++i) {
            const Vector err = est.estimate() - target;
            const double deviation = std::sqrt(std::max(0.0, err.dot(est.design() * err)));
            if (deviation > est.confidence_width(config.policy.delta, WidthMode::exact)) return;
            const Vector& a = sets[i][picks[i]];
            const StepOutcome outcome = env.step(picks[i], sets[i]);
            apply_delayed_feedback(est, RoundFeedback{a, outcome.events, outcome.reward});
        }
        covered[rep] = 1;
    });
    const auto hits = std::count(covered.begin(), covered.end(), 1);
    return static_cast<double>(hits) / static_cast<double>(n_reps);
}

} // namespace otf
