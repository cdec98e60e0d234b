#pragma once

#include "otfbandit/delay_model.hpp"
#include "otfbandit/policies.hpp"
#include "otfbandit/types.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace otf {

enum class ThetaKind { uniform_unit, explicit_vector, k_armed_hard };

struct ThetaSpec {
    ThetaKind kind = ThetaKind::uniform_unit;
    std::vector<double> values; // explicit_vector
    double gap = 0.1;           // k_armed_hard
    std::size_t arm = 2;        // k_armed_hard, 1-based; 1 means "theta" of the pair
};

enum class ActionMode { resample_each_round, fixed_basis };

struct ExperimentConfig {
    std::size_t d = 5;
    std::size_t K = 10;
    std::int64_t T = 3000;
    ThetaSpec theta;
    ActionMode action_mode = ActionMode::resample_each_round;
    DelayDistribution delay = DelayDistribution::geometric(100.0);
    PolicyConfig policy;
    std::size_t n_runs = 100;
    std::uint64_t base_seed = 1;
    // 0 means one worker per hardware thread; 1 runs serially.
    std::size_t threads = 1;
    std::filesystem::path output_dir = "out";
    std::string preset_name; // empty when not built from a preset
};

// Scenario presets: A (m=100, mu=100), B (m=500, mu=100), C (m=100, mu=500),
// all with d=5, K=10, T=3000; D heavy-tailed lognormal delays with m=2000, T=10^4.
ExperimentConfig preset(std::string_view name);

// theta for the config. k_armed_hard with arm == 1 yields the first element of
// the hard pair, any other arm yields the perturbed parameter phi.
Vector resolve_theta(const ExperimentConfig& config);

// Throws ConfigError on any violated constraint.
void validate(const ExperimentConfig& config);

// Sets one key. Keys: d, K, T, theta, actions, delay, policy, delta, lambda,
// m, width_mode, ts_scale, runs, seed, threads, out, preset.
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);

// Flat "key = value" file; '#' starts a comment. Later keys override earlier
// ones, and a `preset` key resets every other setting to the preset's values.
ExperimentConfig load_config(const std::filesystem::path& path);
void apply_config_file(ExperimentConfig& config, const std::filesystem::path& path);

// Resolved settings as ordered key/value pairs, in the config file syntax.
std::vector<std::pair<std::string, std::string>> describe(const ExperimentConfig& config);

std::string to_string(const ThetaSpec& spec);
std::string_view to_string(ActionMode mode);

} // namespace otf
