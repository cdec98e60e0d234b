#pragma once

#include "otfbandit/types.hpp"

#include <cstddef>
#include <cstdint>
#include <deque>
#include <string_view>

namespace otf {

// How the window penalty sum_{s=t-m}^{t-1} |A_s| is measured.
//   exact:  |A_s| in the current metric V_t(lambda)^{-1}, O(m d^2) per call.
//   cached: |A_s| in V_s(lambda)^{-1}, stored when A_s was recorded, O(m) per
//           call. Never smaller than the exact value since V_s <= V_t.
enum class WidthMode { exact, cached };

WidthMode parse_width_mode(std::string_view text);
std::string_view to_string(WidthMode mode);

// sqrt(lambda) + sqrt(2 log(1/delta) + d log((d lambda + t) / (d lambda))).
// Self-normalized deviation radius of regularized least squares after t samples.
double exploration_radius(double t, Eigen::Index d, double lambda, double delta);

// Regularized least squares on windowed, censored conversions:
//
//   theta_hat = V^{-1} B,  V = lambda I + sum_s A_s A_s^T,  B = sum_s Ytilde_s A_s
//
// V sums over every recorded action. B only receives a conversion for round s
// while s is among the last m recorded actions; later conversions are dropped,
// which treats rewards that take longer than m rounds to convert as zeros.
//
// The inverse is maintained by Sherman-Morrison rank-one updates, symmetrized
// after every update, and recomputed from V every 1000 updates or whenever
// max|V V^{-1} - I| exceeds kInverseTolerance at a periodic check.
class WindowedEstimator {
public:
    struct WindowEntry {
        Round round;
        Vector action;
        double cached_norm; // |A_s| in the metric right after A_s was added
        bool converted;
    };

    static constexpr double kInverseTolerance = 1e-10;
    static constexpr std::size_t kReinvertEvery = 1000;
    static constexpr std::size_t kCheckEvery = 32;

    WindowedEstimator(Eigen::Index d, double lambda, std::int64_t window);

    // Adds a to V and V^{-1}, pushes (t, a, |a|, unconverted) into the window and
    // evicts anything older than the last m actions. Advances t.
    void record_action(const Vector& a);

    // Adds A_s to B if round s is still in the window and not yet converted.
    // Anything else (late, duplicate, never recorded) is a no-op.
    // Returns whether the conversion was applied.
    bool record_conversion(Round s);

    Vector estimate() const { return v_inv_ * b_; }

    // Radius evaluated at the number of recorded actions.
    double exploration_radius(double delta) const;

    double window_norm_sum(WidthMode mode) const;

    // 2 f_{t,delta} + window_norm_sum(mode).
    double confidence_width(double delta, WidthMode mode) const;

    // sqrt(a^T V^{-1} a)
    double mahalanobis_norm(const Vector& a) const;

    Eigen::Index dim() const { return d_; }
    double lambda() const { return lambda_; }
    std::int64_t window_length() const { return m_; }
    // Index of the next round to be played; recorded() == round() - 1.
    Round round() const { return t_; }
    std::int64_t recorded() const { return t_ - 1; }

    const Matrix& design() const { return v_; }
    const Matrix& design_inverse() const { return v_inv_; }
    const Vector& response() const { return b_; }
    const std::deque<WindowEntry>& window() const { return window_; }

    // max_{ij} |(V V^{-1} - I)_{ij}|
    double inverse_residual() const;
    std::size_t reinversions() const { return reinversions_; }

private:
    void reinvert();

    Eigen::Index d_;
    double lambda_;
    std::int64_t m_;
    Round t_ = 1;
    Matrix v_;
    Matrix v_inv_;
    Vector b_;
    std::deque<WindowEntry> window_;
    std::size_t updates_since_reinvert_ = 0;
    std::size_t reinversions_ = 0;
};

} // namespace otf
