#pragma once

#include "otfbandit/config.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace otf {

// Stream tags used to split one per-run seed into independent streams.
enum StreamTag : std::uint64_t { kActionStream = 1, kEnvironmentStream = 2, kPolicyStream = 3, kSequenceStream = 4 };

struct RegretTrace {
    std::size_t run_id = 0;
    std::vector<double> cumulative; // cumulative pseudo-regret after rounds 1..T

    friend bool operator==(const RegretTrace&, const RegretTrace&) = default;
};

struct EpisodeResult {
    RegretTrace trace;
    // sum_t |A_t|^2 in V_t(lambda)^{-1}, measured before A_t is added.
    double elliptical_potential = 0.0;
    std::int64_t positive_rewards = 0;
    std::int64_t conversions_observed = 0;
};

inline constexpr std::array<double, 5> kFinalQuantileLevels{0.05, 0.25, 0.5, 0.75, 0.95};

struct SummaryStats {
    std::size_t n_runs = 0;
    std::vector<double> mean;   // per round
    std::vector<double> stddev; // per round, sample standard deviation (0 for one run)
    std::array<double, kFinalQuantileLevels.size()> final_quantiles{};

    friend bool operator==(const SummaryStats&, const SummaryStats&) = default;
};

struct BatchResult {
    std::vector<RegretTrace> traces; // sorted by run_id
    SummaryStats stats;
};

// One episode seeded by base_seed + run_index. Action sets, environment noise
// and policy randomization come from three independent streams of that seed,
// so every policy faces the same action sets and reward draws.
EpisodeResult run_episode_detailed(const ExperimentConfig& config, std::size_t run_index);
RegretTrace run_episode(const ExperimentConfig& config, std::size_t run_index);

// Sorts traces by run_id, then aggregates in that order.
SummaryStats summarize(std::vector<RegretTrace>& traces);

// n_runs episodes on config.threads workers; output is independent of the
// worker count.
BatchResult run_batch(const ExperimentConfig& config);

// Same, also keeping per-episode diagnostics.
std::vector<EpisodeResult> run_batch_detailed(const ExperimentConfig& config);

// Fraction of n_reps replications in which
//   |theta_hat_t - tau_m theta|_{V_t} <= 2 f_{t,delta} + sum_{window} |A_s|_{V_t^{-1}}
// holds for every round t = 1..T. The action sequence is drawn once from
// base_seed and shared by all replications; rewards and delays vary with
// base_seed + rep. Uses config.policy.{delta, lambda, window}.
double concentration_check(const ExperimentConfig& config, std::size_t n_reps);

} // namespace otf
