#pragma once

#include "otfbandit/types.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace otf {

// Distribution of the number of rounds between an action and the revelation of
// its reward. Support is always a subset of {0, 1, 2, ...}.
//
// Kinds:
//   geometric(mean)        P(D = k) = p (1-p)^k with p = 1/(mean+1), so E[D] = mean
//   fixed(value)           D = value almost surely
//   empirical(samples)     uniform over floor(scale * x) for the supplied samples
//   lognormal(mu, sigma)   D = floor(exp(N(mu, sigma^2)))
//
// Values are immutable after construction and safe to share between threads.
class DelayDistribution {
public:
    struct Geometric {
        double mean;
    };
    struct Fixed {
        std::int64_t value;
    };
    struct Empirical {
        std::vector<std::int64_t> sorted_values; // already scaled and floored
        double scale;
    };
    struct Lognormal {
        double log_mean;
        double log_std;
    };

    static DelayDistribution geometric(double mean);
    static DelayDistribution fixed(std::int64_t value);
    // Raw samples are scaled then floored; negative or non-finite samples are rejected.
    static DelayDistribution empirical(std::span<const double> raw_samples, double scale);
    static DelayDistribution lognormal(double log_mean, double log_std);

    // Parses "geometric:<mean>", "fixed:<d>", "lognormal:<mu>:<sigma>" or
    // "empirical:<path>[:<scale>]" (the latter reads the file).
    static DelayDistribution parse(std::string_view spec);

    std::int64_t sample(Rng& rng) const;

    // tau_m = P(D <= m). Closed form for every kind.
    double cdf_at(std::int64_t m) const;

    // Analytic mean. For lognormal this is the mean before rounding down, which
    // upper-bounds the mean of the sampled integers.
    double mean() const;

    // ceil(2 * mean); Markov's inequality then gives cdf_at(window) >= 1/2.
    std::int64_t recommended_window() const;

    // Inverse of parse() for the closed-form kinds; empirical reports its size.
    std::string describe() const;

    bool is_empirical() const { return std::holds_alternative<Empirical>(kind_); }

    const auto& kind() const { return kind_; }

private:
    using Kind = std::variant<Geometric, Fixed, Empirical, Lognormal>;
    explicit DelayDistribution(Kind kind) : kind_(std::move(kind)) {}

    Kind kind_;
};

// Reads one non-negative number per line; blank lines and lines starting with
// '#' are skipped. Throws std::runtime_error on I/O failure and ConfigError on
// parse failures (with the offending line number) or an empty file.
DelayDistribution load_empirical(const std::filesystem::path& path, double scale);

} // namespace otf
