#ifndef NSC_SRD_HPP_
#define NSC_SRD_HPP_

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

namespace nsc {

using Index = Eigen::Index;

/// Cases (datasets) in rows, methods in columns.
struct PerformanceMatrix {
    Eigen::MatrixXd values;
    std::vector<std::string> row_names;
    std::vector<std::string> col_names;
    bool lower_is_better = true;

    [[nodiscard]] Index num_cases() const noexcept { return values.rows(); }
    [[nodiscard]] Index num_methods() const noexcept { return values.cols(); }
};

/// Checks r >= 2, c >= 1, finite entries and name counts; throws ValidationError.
void validate(const PerformanceMatrix &m);

/// First column = case names, header = method names.
[[nodiscard]] PerformanceMatrix read_performance_matrix(const std::filesystem::path &path, bool lower_is_better = true);

enum class GoldStrategy { row_min, row_max, row_mean };

[[nodiscard]] GoldStrategy parse_gold_strategy(std::string_view text);
[[nodiscard]] std::string_view to_string(GoldStrategy g) noexcept;

/// Per-case reference value.
[[nodiscard]] Eigen::VectorXd golden_standard(const PerformanceMatrix &m, GoldStrategy strategy);

/// 1-based ranks; equal values are ranked in index order.
template <typename Derived>
[[nodiscard]] Eigen::VectorXi rank_vector(const Eigen::DenseBase<Derived> &v, bool ascending = true) {
    const Index n = v.size();
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
        return ascending ? v(a) < v(b) : v(a) > v(b);
    });
    Eigen::VectorXi ranks(n);
    for (Index pos = 0; pos < n; ++pos) {
        ranks(order[static_cast<std::size_t>(pos)]) = static_cast<int>(pos + 1);
    }
    return ranks;
}

/// True if any two entries compare equal.
template <typename Derived>
[[nodiscard]] bool has_ties(const Eigen::DenseBase<Derived> &v) {
    std::vector<typename Derived::Scalar> sorted;
    sorted.reserve(static_cast<std::size_t>(v.size()));
    for (Index i = 0; i < v.size(); ++i) {
        sorted.push_back(v(i));
    }
    std::sort(sorted.begin(), sorted.end());
    return std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
}

/// Largest sum of |rank differences| over permutations of r items:
/// r²/2 for even r, (r²-1)/2 for odd r.
[[nodiscard]] Index max_srd(Index r);

/// Permutation counts of Σ|π(i) - i| for r items, indexed by SRD value
/// (odd values are always zero). Exact in 64 bits up to r = 20.
[[nodiscard]] std::vector<std::uint64_t> displacement_counts(int r);

/// Exact mean and variance of Σ|π(i) - i| under a uniform random permutation.
struct DisplacementMoments {
    double mean;
    double variance;
};
[[nodiscard]] DisplacementMoments displacement_moments(Index r);

enum class NullMode { exact, normal };

[[nodiscard]] std::string_view to_string(NullMode mode) noexcept;

/// Null distribution of the SRD of a random ranking against a fixed reference.
struct NullDistribution {
    Index num_cases = 0;
    NullMode mode = NullMode::exact;
    double mean = 0.0;
    double sd = 0.0;
    /// probability[v] = P(SRD = v), v = 0..max_srd. Exact mode, or the
    /// normal mass over (v-1, v+1] for even v in normal mode.
    std::vector<double> probability;

    /// P(SRD <= v).
    [[nodiscard]] double cdf(double v) const;
    /// Exact mode: smallest v with P(SRD <= v) >= q. Normal mode: mean + sd z_q.
    [[nodiscard]] double quantile(double q) const;
};

/// Exact distribution for 2 <= r <= 13.
[[nodiscard]] NullDistribution exact_null_distribution(int r);

/// Normal approximation for r >= 14 using the exact moments.
[[nodiscard]] NullDistribution normal_approx_null(Index r);

/// Exact up to 13 cases, normal beyond.
[[nodiscard]] NullDistribution null_distribution(Index r);

struct SrdPercentiles {
    double xx1 = 0.0;   ///< 5%
    double med = 0.0;   ///< 50%
    double xx19 = 0.0;  ///< 95%
};

struct SrdResult {
    Eigen::VectorXd golden;          ///< r, in input row order
    Eigen::VectorXi gold_rank;       ///< r
    Eigen::MatrixXi method_ranks;    ///< r x c
    Eigen::VectorXi srd_raw;         ///< c
    Eigen::VectorXd srd_scaled;      ///< c, 100 * raw / max_srd
    Index max_srd = 0;
    NullDistribution null;
    SrdPercentiles percentiles;      ///< raw SRD units
    std::vector<std::string> method_names;
    std::vector<std::string> case_names;
    std::vector<std::string> warnings;

    [[nodiscard]] double scale(double raw) const { return 100.0 * raw / static_cast<double>(max_srd); }
    /// Scaled SRD strictly below the scaled 5% percentile.
    [[nodiscard]] bool significant(Index method) const;
    /// Case indices sorted by golden rank.
    [[nodiscard]] std::vector<Index> case_order() const;
};

[[nodiscard]] SrdResult srd(const PerformanceMatrix &m, GoldStrategy strategy);

/// SRD of every method with each case left out in turn: result[c][r].
[[nodiscard]] std::vector<std::vector<Index>> srd_leave_one_out(const PerformanceMatrix &m, GoldStrategy strategy);

/// Per-method table (raw, scaled, percentiles, verdict) and the null distribution table.
void write_srd_report(const SrdResult &result, std::ostream &methods, std::ostream &distribution, char delim = ',');

/// Rank table: one row per case in golden order with value, rank and |diff| per method.
void write_srd_details(const SrdResult &result, const PerformanceMatrix &m, std::ostream &out, char delim = ',');

}  // namespace nsc

#endif  // NSC_SRD_HPP_
