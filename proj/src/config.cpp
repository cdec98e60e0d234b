#include "otfbandit/config.hpp"

#include "otfbandit/environment.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

namespace otf {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
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

double to_double(std::string_view key, const std::string& text) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v)) {
        throw ConfigError("invalid value for '" + std::string(key) + "': '" + text + "'");
    }
    return v;
}

std::uint64_t to_unsigned(std::string_view key, const std::string& text) {
    if (text.empty() || text.front() == '-') {
        throw ConfigError("'" + std::string(key) + "' must be a non-negative integer, got '" + text + "'");
    }
    char* end = nullptr;
    errno = 0;
    const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
    if (end != text.c_str() + text.size() || errno == ERANGE) {
        throw ConfigError("'" + std::string(key) + "' must be a non-negative integer, got '" + text + "'");
    }
    return v;
}

std::string format_double(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

ThetaSpec parse_theta(const std::string& text) {
    const auto parts = split(text, ':');
    ThetaSpec spec;
    if (parts[0] == "uniform_unit" && parts.size() == 1) {
        spec.kind = ThetaKind::uniform_unit;
    } else if (parts[0] == "explicit" && parts.size() == 2) {
        spec.kind = ThetaKind::explicit_vector;
        for (const auto& v : split(parts[1], ',')) spec.values.push_back(to_double("theta", v));
    } else if (parts[0] == "k_armed_hard" && parts.size() == 3) {
        spec.kind = ThetaKind::k_armed_hard;
        spec.gap = to_double("theta", parts[1]);
        spec.arm = static_cast<std::size_t>(to_unsigned("theta", parts[2]));
    } else {
        throw ConfigError("theta must be uniform_unit, explicit:<v1,v2,...> or k_armed_hard:<gap>:<arm>");
    }
    return spec;
}

} // namespace

ExperimentConfig preset(std::string_view name) {
    ExperimentConfig c;
    c.d = 5;
    c.K = 10;
    c.T = 3000;
    c.preset_name = std::string(name);
    if (name == "A") {
        c.policy.window = 100;
        c.delay = DelayDistribution::geometric(100.0);
    } else if (name == "B") {
        c.policy.window = 500;
        c.delay = DelayDistribution::geometric(100.0);
    } else if (name == "C") {
        c.policy.window = 100;
        c.delay = DelayDistribution::geometric(500.0);
    } else if (name == "D") {
        // Synthetic stand-in for heavy-tailed conversion delays already rescaled
        // to the 10^4-round horizon: median e^7 ~ 1100 rounds, mean ~ 3300.
        c.T = 10000;
        c.policy.window = 2000;
        c.delay = DelayDistribution::lognormal(7.0, 1.5);
    } else {
        throw ConfigError("unknown preset '" + std::string(name) + "' (expected A, B, C or D)");
    }
    return c;
}

Vector resolve_theta(const ExperimentConfig& config) {
    const auto d = static_cast<Eigen::Index>(config.d);
    switch (config.theta.kind) {
    case ThetaKind::uniform_unit:
        return Vector::Constant(d, 1.0 / std::sqrt(static_cast<double>(config.d)));
    case ThetaKind::explicit_vector: {
        Vector theta(static_cast<Eigen::Index>(config.theta.values.size()));
        for (Eigen::Index i = 0; i < theta.size(); ++i) theta[i] = config.theta.values[static_cast<std::size_t>(i)];
        return theta;
    }
    case ThetaKind::k_armed_hard: {
        const std::size_t arm = config.theta.arm == 1 ? 2 : config.theta.arm;
        auto [theta, phi] = make_k_armed_hard_pair(config.K, config.theta.gap, arm);
        return config.theta.arm == 1 ? theta : phi;
    }
    }
    throw ConfigError("unknown theta kind");
}

void validate(const ExperimentConfig& config) {
    if (config.d < 1) throw ConfigError("d must be >= 1");
    if (config.K < 1) throw ConfigError("K must be >= 1");
    if (config.T < 1) throw ConfigError("T must be >= 1");
    if (config.n_runs < 1) throw ConfigError("runs must be >= 1");
    validate(config.policy);

    if (config.action_mode == ActionMode::fixed_basis && config.K != config.d) {
        throw ConfigError("fixed_basis actions need K == d");
    }
    if (config.theta.kind == ThetaKind::k_armed_hard) {
        if (config.action_mode != ActionMode::fixed_basis) {
            throw ConfigError("k_armed_hard theta needs actions = fixed_basis");
        }
        if (config.theta.arm < 1 || config.theta.arm > config.K) {
            throw ConfigError("k_armed_hard arm index must lie in [1, K]");
        }
    }
    const Vector theta = resolve_theta(config);
    if (static_cast<std::size_t>(theta.size()) != config.d) throw ConfigError("theta dimension must equal d");
    if (config.theta.kind != ThetaKind::k_armed_hard && theta.norm() > 1.0 + 1e-9) {
        throw ConfigError("theta must have Euclidean norm <= 1");
    }
}

void apply_setting(ExperimentConfig& config, std::string_view key_view, std::string_view value_view) {
    const std::string key = trim(key_view);
    const std::string value = trim(value_view);
    if (key == "preset") {
        config = preset(value);
    } else if (key == "d") {
        config.d = static_cast<std::size_t>(to_unsigned(key, value));
    } else if (key == "K") {
        config.K = static_cast<std::size_t>(to_unsigned(key, value));
    } else if (key == "T") {
        config.T = static_cast<std::int64_t>(to_unsigned(key, value));
    } else if (key == "theta") {
        config.theta = parse_theta(value);
    } else if (key == "actions") {
        if (value == "resample") {
            config.action_mode = ActionMode::resample_each_round;
        } else if (value == "fixed_basis") {
            config.action_mode = ActionMode::fixed_basis;
        } else {
            throw ConfigError("actions must be 'resample' or 'fixed_basis'");
        }
    } else if (key == "delay") {
        config.delay = DelayDistribution::parse(value);
    } else if (key == "policy") {
        config.policy.kind = parse_policy_kind(value);
    } else if (key == "delta") {
        config.policy.delta = to_double(key, value);
    } else if (key == "lambda") {
        config.policy.lambda = to_double(key, value);
    } else if (key == "m") {
        config.policy.window = value == "auto" ? config.delay.recommended_window()
                                               : static_cast<std::int64_t>(to_unsigned(key, value));
    } else if (key == "width_mode") {
        config.policy.width_mode = parse_width_mode(value);
    } else if (key == "ts_scale") {
        config.policy.ts_covariance_scale = to_double(key, value);
    } else if (key == "runs") {
        config.n_runs = static_cast<std::size_t>(to_unsigned(key, value));
    } else if (key == "seed") {
        config.base_seed = to_unsigned(key, value);
    } else if (key == "threads") {
        config.threads = static_cast<std::size_t>(to_unsigned(key, value));
    } else if (key == "out") {
        config.output_dir = value;
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

void apply_config_file(ExperimentConfig& config, const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string text = trim(line);
        if (text.empty()) continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected 'key = value'");
        }
        try {
            apply_setting(config, text.substr(0, eq), text.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    ExperimentConfig config;
    apply_config_file(config, path);
    return config;
}

std::string to_string(const ThetaSpec& spec) {
    switch (spec.kind) {
    case ThetaKind::uniform_unit: return "uniform_unit";
    case ThetaKind::explicit_vector: {
        std::string out = "explicit:";
        for (std::size_t i = 0; i < spec.values.size(); ++i) {
            if (i) out += ',';
            out += format_double(spec.values[i]);
        }
        return out;
    }
    case ThetaKind::k_armed_hard:
        return "k_armed_hard:" + format_double(spec.gap) + ":" + std::to_string(spec.arm);
    }
    return "unknown";
}

std::string_view to_string(ActionMode mode) {
    return mode == ActionMode::fixed_basis ? "fixed_basis" : "resample";
}

std::vector<std::pair<std::string, std::string>> describe(const ExperimentConfig& config) {
    return {
        {"preset", config.preset_name.empty() ? "none" : config.preset_name},
        {"d", std::to_string(config.d)},
        {"K", std::to_string(config.K)},
        {"T", std::to_string(config.T)},
        {"theta", to_string(config.theta)},
        {"actions", std::string(to_string(config.action_mode))},
        {"delay", config.delay.describe()},
        {"policy", std::string(to_string(config.policy.kind))},
        {"delta", format_double(config.policy.delta)},
        {"lambda", format_double(config.policy.lambda)},
        {"m", std::to_string(config.policy.window)},
        {"width_mode", std::string(to_string(config.policy.width_mode))},
        {"ts_scale", format_double(config.policy.ts_covariance_scale)},
        {"runs", std::to_string(config.n_runs)},
        {"seed", std::to_string(config.base_seed)},
    };
}

} // namespace otf
