#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace otf {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Every random stream in the library is a 64-bit Mersenne twister. Streams are
// always owned by the caller and passed by reference.
using Rng = std::mt19937_64;

// 1-based round index.
using Round = std::int64_t;

// Invalid parameters or configuration. Maps to CLI exit code 1.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Numerical breakdown at runtime (e.g. a covariance that cannot be factored).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Derives an independent stream from a seed and a stream tag.
inline Rng make_stream(std::uint64_t seed, std::uint64_t tag) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32)};
    return Rng(seq);
}

} // namespace otf
