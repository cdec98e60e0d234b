#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace otf {

// High-probability regret bound for OTFLinUCB:
//   (4 f_{T,delta} / tau) sqrt(2 d T L) + (4 m d / tau) L,  L = log((d lambda + T) / (d lambda))
double theorem2_bound(double T, std::size_t d, double lambda, double delta, double m, double tau_m);

// Relative entropy between Bernoulli(p) and Bernoulli(q), with 0 log 0 = 0.
// Requires p in [0, 1]; q in (0, 1) unless q == p.
double bernoulli_kl(double p, double q);

// Bretagnolle-Huber lower bound on R_theta(T) + R_phi(T) for the K-armed hard
// instance pair with gap in (0, 1/8]:
//   (T gap / 4) exp(-32 tau gap^2 T / (K - 1))
double lower_bound_value(double T, std::size_t K, double tau_m, double gap);

struct TunedLowerBound {
    double gap;
    double value;
};

// Geometric grid of `points` gaps spanning [lo, hi].
std::vector<double> gap_grid(double lo = 1e-4, double hi = 0.125, std::size_t points = 64);

// Maximizes lower_bound_value over gap_grid().
TunedLowerBound tuned_lower_bound(double T, std::size_t K, double tau_m);

} // namespace otf
