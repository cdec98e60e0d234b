#include "otfbandit/bounds.hpp"

#include "otfbandit/estimator.hpp"
#include "otfbandit/types.hpp"

#include <cmath>

namespace otf {

double theorem2_bound(double T, std::size_t d, double lambda, double delta, double m, double tau_m) {
    if (!(tau_m > 0.0 && tau_m <= 1.0)) throw ConfigError("tau_m must lie in (0, 1]");
    if (!(T > 0.0) || d < 1 || !(lambda > 0.0) || m < 0.0) {
        throw ConfigError("theorem2_bound needs T > 0, d >= 1, lambda > 0, m >= 0");
    }
    const double dd = static_cast<double>(d);
    const double log_term = std::log((dd * lambda + T) / (dd * lambda));
    const double f = exploration_radius(T, static_cast<Eigen::Index>(d), lambda, delta);
    return 4.0 * f / tau_m * std::sqrt(2.0 * dd * T * log_term) + 4.0 * m * dd / tau_m * log_term;
}

double bernoulli_kl(double p, double q) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("bernoulli_kl: p must lie in [0, 1]");
    if (!(q >= 0.0 && q <= 1.0)) throw ConfigError("bernoulli_kl: q must lie in [0, 1]");
    if (p == q) return 0.0;
    if (q == 0.0 || q == 1.0) throw ConfigError("bernoulli_kl: q in {0, 1} with p != q is infinite");
    const auto term = [](double x, double y) { return x == 0.0 ? 0.0 : x * std::log(x / y); };
    return term(p, q) + term(1.0 - p, 1.0 - q);
}

double lower_bound_value(double T, std::size_t K, double tau_m, double gap) {
    if (K < 2) throw ConfigError("lower bound needs K > 1");
    if (!(T >= 1.0)) throw ConfigError("lower bound needs T >= 1");
    if (!(tau_m > 0.0 && tau_m < 1.0)) throw ConfigError("lower bound needs tau_m in (0, 1)");
    if (!(gap > 0.0 && gap <= 0.125)) throw ConfigError("lower bound needs gap in (0, 1/8]");
    const double arms = static_cast<double>(K - 1);
    return T * gap / 4.0 * std::exp(-32.0 * tau_m * gap * gap * T / arms);
}

std::vector<double> gap_grid(double lo, double hi, std::size_t points) {
    std::vector<double> grid;
    grid.reserve(points);
    const double ratio = std::log(hi / lo) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) grid.push_back(lo * std::exp(ratio * static_cast<double>(i)));
    grid.back() = hi;
    return grid;
}

TunedLowerBound tuned_lower_bound(double T, std::size_t K, double tau_m) {
    TunedLowerBound best{0.0, -1.0};
    for (double gap : gap_grid()) {
        const double v = lower_bound_value(T, K, tau_m, gap);
        if (v > best.value) best = {gap, v};
    }
    return best;
}

} // namespace otf
