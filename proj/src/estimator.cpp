#include "otfbandit/estimator.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <string>

namespace otf {

namespace {

void check_delta(double delta) {
    if (!(delta > 0.0 && delta <= 1.0)) throw ConfigError("confidence level delta must lie in (0, 1]");
}

} // namespace

WidthMode parse_width_mode(std::string_view text) {
    if (text == "exact") return WidthMode::exact;
    if (text == "cached") return WidthMode::cached;
    throw ConfigError("width mode must be 'exact' or 'cached', got '" + std::string(text) + "'");
}

std::string_view to_string(WidthMode mode) {
    return mode == WidthMode::exact ? "exact" : "cached";
}

double exploration_radius(double t, Eigen::Index d, double lambda, double delta) {
    check_delta(delta);
    if (!(lambda > 0.0)) throw ConfigError("lambda must be positive");
    if (t < 0.0) throw ConfigError("round count must be non-negative");
    const double dl = static_cast<double>(d) * lambda;
    return std::sqrt(lambda) +
           std::sqrt(2.0 * std::log(1.0 / delta) + static_cast<double>(d) * std::log((dl + t) / dl));
}

WindowedEstimator::WindowedEstimator(Eigen::Index d, double lambda, std::int64_t window)
    : d_(d), lambda_(lambda), m_(window) {
    if (d < 1) throw ConfigError("estimator dimension must be >= 1");
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be positive");
    if (window < 0) throw ConfigError("window length must be non-negative");
    v_ = lambda * Matrix::Identity(d, d);
    v_inv_ = (1.0 / lambda) * Matrix::Identity(d, d);
    b_ = Vector::Zero(d);
}

void WindowedEstimator::record_action(const Vector& a) {
    if (a.size() != d_) throw ConfigError("action dimension does not match estimator");

    v_.noalias() += a * a.transpose();
    const Vector va = v_inv_ * a;
    v_inv_.noalias() -= (va * va.transpose()) / (1.0 + a.dot(va));
    v_inv_ = 0.5 * (v_inv_ + v_inv_.transpose()).eval();

    ++updates_since_reinvert_;
    if (updates_since_reinvert_ >= kReinvertEvery) {
        reinvert();
    } else if (updates_since_reinvert_ % kCheckEvery == 0 && inverse_residual() > kInverseTolerance) {
        reinvert();
    }

    if (m_ > 0) {
        window_.push_back(WindowEntry{t_, a, mahalanobis_norm(a), false});
        while (static_cast<std::int64_t>(window_.size()) > m_) window_.pop_front();
    }
    ++t_;
}

bool WindowedEstimator::record_conversion(Round s) {
    if (window_.empty()) return false;
    const Round first = window_.front().round;
    if (s < first || s > window_.back().round) return false;
    auto& entry = window_[static_cast<std::size_t>(s - first)];
    if (entry.converted) return false;
    entry.converted = true;
    b_ += entry.action;
    return true;
}

double WindowedEstimator::exploration_radius(double delta) const {
    return otf::exploration_radius(static_cast<double>(recorded()), d_, lambda_, delta);
}

double WindowedEstimator::window_norm_sum(WidthMode mode) const {
    double sum = 0.0;
    if (mode == WidthMode::cached) {
        for (const auto& e : window_) sum += e.cached_norm;
    } else {
        for (const auto& e : window_) sum += mahalanobis_norm(e.action);
    }
    return sum;
}

double WindowedEstimator::confidence_width(double delta, WidthMode mode) const {
    return 2.0 * exploration_radius(delta) + window_norm_sum(mode);
}

double WindowedEstimator::mahalanobis_norm(const Vector& a) const {
    if (a.size() != d_) throw ConfigError("vector dimension does not match estimator");
    return std::sqrt(std::max(0.0, a.dot(v_inv_ * a)));
}

double WindowedEstimator::inverse_residual() const {
    return (v_ * v_inv_ - Matrix::Identity(d_, d_)).cwiseAbs().maxCoeff();
}

void WindowedEstimator::reinvert() {
    Eigen::LLT<Matrix> llt(v_);
    if (llt.info() != Eigen::Success) throw NumericalError("design matrix lost positive definiteness");
    v_inv_ = llt.solve(Matrix::Identity(d_, d_));
    v_inv_ = 0.5 * (v_inv_ + v_inv_.transpose()).eval();
    updates_since_reinvert_ = 0;
    ++reinversions_;
}

} // namespace otf
