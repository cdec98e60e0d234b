#include "otfbandit/delay_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace otf {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// Largest delay we ever report; far beyond any horizon the harness runs.
constexpr double kDelayCap = 1e15;

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

double parse_number(const std::string& text, const std::string& what) {
    char* end = nullptr;
    const double value = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(value)) {
        throw ConfigError("invalid " + what + ": '" + text + "'");
    }
    return value;
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::string format_double(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

} // namespace

DelayDistribution DelayDistribution::geometric(double mean) {
    if (!(mean > 0.0) || !std::isfinite(mean)) {
        throw ConfigError("geometric delay mean must be positive and finite");
    }
    return DelayDistribution(Geometric{mean});
}

DelayDistribution DelayDistribution::fixed(std::int64_t value) {
    if (value < 0) throw ConfigError("fixed delay must be non-negative");
    return DelayDistribution(Fixed{value});
}

DelayDistribution DelayDistribution::empirical(std::span<const double> raw_samples, double scale) {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw ConfigError("empirical delay scale must be positive");
    }
    if (raw_samples.empty()) throw ConfigError("empty delay sample file");
    std::vector<std::int64_t> values;
    values.reserve(raw_samples.size());
    for (double x : raw_samples) {
        if (!std::isfinite(x) || x < 0.0) {
            throw ConfigError("delay samples must be non-negative and finite");
        }
        values.push_back(static_cast<std::int64_t>(std::min(std::floor(scale * x), kDelayCap)));
    }
    std::sort(values.begin(), values.end());
    return DelayDistribution(Empirical{std::move(values), scale});
}

DelayDistribution DelayDistribution::lognormal(double log_mean, double log_std) {
    if (!std::isfinite(log_mean) || !(log_std > 0.0) || !std::isfinite(log_std)) {
        throw ConfigError("lognormal delay needs a finite log-mean and positive log-std");
    }
    return DelayDistribution(Lognormal{log_mean, log_std});
}

DelayDistribution DelayDistribution::parse(std::string_view spec) {
    const auto parts = split(spec, ':');
    const std::string& kind = parts.front();
    if (kind == "geometric" && parts.size() == 2) {
        return geometric(parse_number(parts[1], "geometric mean"));
    }
    if (kind == "fixed" && parts.size() == 2) {
        const double v = parse_number(parts[1], "fixed delay");
        if (v != std::floor(v)) throw ConfigError("fixed delay must be an integer");
        return fixed(static_cast<std::int64_t>(v));
    }
    if (kind == "lognormal" && parts.size() == 3) {
        return lognormal(parse_number(parts[1], "lognormal log-mean"),
                         parse_number(parts[2], "lognormal log-std"));
    }
    if (kind == "empirical" && (parts.size() == 2 || parts.size() == 3)) {
        const double scale = parts.size() == 3 ? parse_number(parts[2], "empirical scale") : 1.0;
        return load_empirical(parts[1], scale);
    }
    throw ConfigError("unrecognized delay specification '" + std::string(spec) + "'");
}

std::int64_t DelayDistribution::sample(Rng& rng) const {
    return std::visit(
        overloaded{
            [&](const Geometric& g) -> std::int64_t {
                std::geometric_distribution<std::int64_t> dist(1.0 / (g.mean + 1.0));
                return dist(rng);
            },
            [](const Fixed& f) -> std::int64_t { return f.value; },
            [&](const Empirical& e) -> std::int64_t {
                std::uniform_int_distribution<std::size_t> pick(0, e.sorted_values.size() - 1);
                return e.sorted_values[pick(rng)];
            },
            [&](const Lognormal& l) -> std::int64_t {
                std::lognormal_distribution<double> dist(l.log_mean, l.log_std);
                return static_cast<std::int64_t>(std::min(std::floor(dist(rng)), kDelayCap));
            },
        },
        kind_);
}

double DelayDistribution::cdf_at(std::int64_t m) const {
    if (m < 0) return 0.0;
    return std::visit(
        overloaded{
            [&](const Geometric& g) {
                // 1 - (1-p)^(m+1), evaluated without cancellation for small p.
                const double p = 1.0 / (g.mean + 1.0);
                return -std::expm1(static_cast<double>(m + 1) * std::log1p(-p));
            },
            [&](const Fixed& f) { return m >= f.value ? 1.0 : 0.0; },
            [&](const Empirical& e) {
                const auto it = std::upper_bound(e.sorted_values.begin(), e.sorted_values.end(), m);
                return static_cast<double>(it - e.sorted_values.begin()) /
                       static_cast<double>(e.sorted_values.size());
            },
            [&](const Lognormal& l) {
                // floor(X) <= m  <=>  X < m + 1
                const double z = (std::log(static_cast<double>(m) + 1.0) - l.log_mean) / l.log_std;
                return 0.5 * std::erfc(-z / std::sqrt(2.0));
            },
        },
        kind_);
}

double DelayDistribution::mean() const {
    return std::visit(
        overloaded{
            [](const Geometric& g) { return g.mean; },
            [](const Fixed& f) { return static_cast<double>(f.value); },
            [](const Empirical& e) {
                const double sum = std::accumulate(e.sorted_values.begin(), e.sorted_values.end(), 0.0);
                return sum / static_cast<double>(e.sorted_values.size());
            },
            [](const Lognormal& l) { return std::exp(l.log_mean + 0.5 * l.log_std * l.log_std); },
        },
        kind_);
}

std::int64_t DelayDistribution::recommended_window() const {
    return static_cast<std::int64_t>(std::ceil(2.0 * mean()));
}

std::string DelayDistribution::describe() const {
    return std::visit(
        overloaded{
            [](const Geometric& g) { return "geometric:" + format_double(g.mean); },
            [](const Fixed& f) { return "fixed:" + std::to_string(f.value); },
            [](const Empirical& e) {
                return "empirical(n=" + std::to_string(e.sorted_values.size()) +
                       ",scale=" + format_double(e.scale) + ")";
            },
            [](const Lognormal& l) {
                return "lognormal:" + format_double(l.log_mean) + ":" + format_double(l.log_std);
            },
        },
        kind_);
}

DelayDistribution load_empirical(const std::filesystem::path& path, double scale) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open delay sample file " + path.string());
    std::vector<double> samples;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string text = trim(line);
        if (text.empty() || text.front() == '#') continue;
        char* end = nullptr;
        const double value = std::strtod(text.c_str(), &end);
        if (end != text.c_str() + text.size() || !std::isfinite(value) || value < 0.0) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) +
                              ": expected a non-negative number, got '" + text + "'");
        }
        samples.push_back(value);
    }
    if (in.bad()) throw std::runtime_error("error reading delay sample file " + path.string());
    if (samples.empty()) throw ConfigError("empty delay sample file");
    return DelayDistribution::empirical(samples, scale);
}

} // namespace otf
