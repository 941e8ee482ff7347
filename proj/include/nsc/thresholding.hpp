#ifndef NSC_THRESHOLDING_HPP_
#define NSC_THRESHOLDING_HPP_

#include "nsc/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <vector>

namespace nsc {

using Index = Eigen::Index;

enum class RuleKind { soft, hard, order };

[[nodiscard]] std::string_view to_string(RuleKind kind) noexcept;
/// Accepts "soft", "hard", "order" (case-insensitive).
[[nodiscard]] RuleKind parse_rule_kind(std::string_view text);

/// A thresholding rule and its parameter.
///
/// For soft/hard the parameter is the cut-off applied to |d|. For order it is
/// the number of statistics kept, stored as an integral double.
struct ThresholdRule {
    RuleKind kind = RuleKind::soft;
    double param = 0.0;

    [[nodiscard]] static ThresholdRule soft(double delta) { return {RuleKind::soft, delta}; }
    [[nodiscard]] static ThresholdRule hard(double delta) { return {RuleKind::hard, delta}; }
    [[nodiscard]] static ThresholdRule order(Index keep) { return {RuleKind::order, static_cast<double>(keep)}; }

    [[nodiscard]] Index keep_count() const noexcept { return static_cast<Index>(param); }

    friend bool operator==(const ThresholdRule &, const ThresholdRule &) = default;
};

/// `soft:1.5`, `hard:0.25`, `order:40`. The parameter prints in shortest round-trip form.
[[nodiscard]] std::string to_string(const ThresholdRule &rule);
[[nodiscard]] ThresholdRule parse_rule(std::string_view text);

/// Throws ArgumentError unless the parameter is valid for a p x K statistic matrix.
void validate_rule(const ThresholdRule &rule, Index num_statistics);

/// sgn(d) (|d| - delta)_+
template <typename Scalar>
[[nodiscard]] Scalar soft_threshold(Scalar d, Scalar delta) {
    if (!(delta >= Scalar(0))) {
        throw ArgumentError("soft threshold must be non-negative");
    }
    const Scalar shrunk = std::abs(d) - delta;
    if (shrunk <= Scalar(0)) {
        return Scalar(0);
    }
    return d < Scalar(0) ? -shrunk : shrunk;
}

/// d 1{|d| > delta}; |d| == delta is discarded.
template <typename Scalar>
[[nodiscard]] Scalar hard_threshold(Scalar d, Scalar delta) {
    if (!(delta >= Scalar(0))) {
        throw ArgumentError("hard threshold must be non-negative");
    }
    return std::abs(d) > delta ? d : Scalar(0);
}

/// Keeps the `keep` entries of largest magnitude over the whole matrix.
///
/// Equal magnitudes are resolved in favour of the smaller row, then the
/// smaller column, so exactly min(keep, nonzeros) entries survive.
template <typename Derived>
[[nodiscard]] Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
order_threshold(const Eigen::MatrixBase<Derived> &d, Index keep) {
    using Scalar = typename Derived::Scalar;
    const Index rows = d.rows();
    const Index cols = d.cols();
    if (keep < 0 || keep > rows * cols) {
        throw ArgumentError("order threshold must lie in [0, p*K]");
    }
    // Linear position i*cols + k encodes the (row, column) preference order.
    std::vector<Index> pos(static_cast<std::size_t>(rows * cols));
    for (Index i = 0; i < rows; ++i) {
        for (Index k = 0; k < cols; ++k) {
            pos[static_cast<std::size_t>(i * cols + k)] = i * cols + k;
        }
    }
    auto magnitude = [&](Index at) { return std::abs(d(at / cols, at % cols)); };
    const auto middle = pos.begin() + keep;
    std::partial_sort(pos.begin(), middle, pos.end(), [&](Index a, Index b) {
        const Scalar ma = magnitude(a);
        const Scalar mb = magnitude(b);
        return ma != mb ? ma > mb : a < b;
    });
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out =
        Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(rows, cols);
    for (auto it = pos.begin(); it != middle; ++it) {
        out(*it / cols, *it % cols) = d(*it / cols, *it % cols);
    }
    return out;
}

/// Applies `rule` to every statistic of `d`.
[[nodiscard]] Eigen::MatrixXd apply_rule(const ThresholdRule &rule, const Eigen::Ref<const Eigen::MatrixXd> &d);

/// Features (rows) with at least one nonzero entry.
[[nodiscard]] std::vector<Index> surviving_rows(const Eigen::Ref<const Eigen::MatrixXd> &d);

/// `m` rules running from no shrinkage to full shrinkage.
///
/// Soft/hard: m evenly spaced cut-offs on [0, max|d|]. Order: distinct keep
/// counts evenly spaced (rounded) on [0, p*K], listed from p*K down to 0. If
/// p*K + 1 < m every keep count is listed.
[[nodiscard]] std::vector<ThresholdRule> threshold_grid(const Eigen::Ref<const Eigen::MatrixXd> &t_stats, RuleKind kind,
                                                        int m = 30);

/// Literature reference cut-offs for a sample size n (natural logs).
struct ReferenceThresholds {
    double universal;    ///< (2 log n)^(1/2)
    double fan;          ///< (2 log(n a_n))^(1/2), a_n = c (log n)^(-d)
    double kim_akritas;  ///< (log n)^(3/2)
};

[[nodiscard]] ReferenceThresholds reference_thresholds(Index n, double c, double d_exp);

}  // namespace nsc

#endif  // NSC_THRESHOLDING_HPP_
