#ifndef NSC_TUNING_HPP_
#define NSC_TUNING_HPP_

#include "nsc/centroid_model.hpp"
#include "nsc/dataset.hpp"
#include "nsc/thresholding.hpp"

#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

namespace nsc {

/// Cross-validation result for one rule.
struct CvPoint {
    ThresholdRule rule;
    Index error_count = 0;     ///< misclassified held-out samples, summed over folds
    Index survivor_count = 0;  ///< survivors of a fit on the full training set

    friend bool operator==(const CvPoint &, const CvPoint &) = default;
};

/// Points in increasing-shrinkage order.
struct CvCurve {
    std::vector<CvPoint> points;
    std::uint64_t seed = 0;
    int num_folds = 0;
};

struct CvOptions {
    FitOptions fit;
    int threads = 1;  ///< 0 = hardware concurrency
};

/// Fold plan, per-fold statistics and full-data statistics, fitted once and
/// reused for every grid evaluated against the same (dataset, folds, seed).
class CrossValidator {
  public:
    /// Throws ArgumentError for fewer than 2 folds and DegenerateError (naming
    /// the fold) when a class is missing from a fold's training part.
    CrossValidator(const Dataset &ds, int num_folds, std::uint64_t seed, CvOptions options = {});

    [[nodiscard]] CvCurve evaluate(const std::vector<ThresholdRule> &grid) const;

    [[nodiscard]] const CentroidStats &full_stats() const noexcept { return full_stats_; }
    [[nodiscard]] const FoldPlan &plan() const noexcept { return plan_; }
    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

  private:
    struct Fold {
        CentroidStats stats;
        Eigen::MatrixXd held_out;  ///< p x n_f
        std::vector<int> truth;
    };

    FoldPlan plan_;
    std::uint64_t seed_;
    CvOptions options_;
    CentroidStats full_stats_;
    std::vector<Fold> folds_;
};

/// One-shot cross-validation of `grid` (all rules of one kind).
[[nodiscard]] CvCurve cross_validate(const Dataset &ds, const std::vector<ThresholdRule> &grid, int num_folds,
                                     std::uint64_t seed, const CvOptions &options = {});

/// Smallest error; ties go to fewer survivors, then to the later (more shrunk) point.
[[nodiscard]] Index select_smallest(const std::vector<CvPoint> &points);

/// Best point other than `best`, with the same tie rules. Empty for single-point curves.
[[nodiscard]] std::optional<Index> select_runner_up(const std::vector<CvPoint> &points, Index best);

struct DeepSearchOptions {
    int m = 30;
    Index big_gap = 2000;      ///< survivor drop that alone justifies taking the runner-up
    Index max_error_gap = 1;   ///< runner-up may be this many errors worse
    int max_iterations = 50;
};

/// True when the runner-up may replace the best point: its error is within
/// `max_error_gap` of `reference_error` and it keeps fewer than half the
/// survivors or more than `big_gap` fewer.
[[nodiscard]] bool prefer_runner_up(const CvPoint &best, const CvPoint &runner_up, Index reference_error,
                                    const DeepSearchOptions &options);

enum class SearchStop {
    none,          ///< continue with the refined grid
    no_interval,   ///< neither neighbouring interval qualifies
    zero_span,     ///< survivor count constant across the chosen interval
    no_progress,   ///< chosen interval spans as many survivors as the previous one
    empty_grid,    ///< no admissible rule strictly inside the interval
};

[[nodiscard]] std::string_view to_string(SearchStop stop) noexcept;

/// Outcome of one pass of the refinement on an evaluated grid.
struct RefineStep {
    Index best = 0;
    std::optional<Index> runner_up;
    bool switched = false;
    Index chosen = 0;                                  ///< grid position of the working rule
    std::optional<std::pair<Index, Index>> interval;   ///< grid positions bounding the next search
    Index span = 0;                                    ///< survivor difference across the interval
    Index next_size = 0;                               ///< number of new rules requested
    SearchStop stop = SearchStop::none;
};

/// Picks the working rule and the neighbouring interval to refine.
///
/// `reference_error` is the smallest error seen so far in the search and
/// `previous_span` the survivor span of the interval that produced `points`.
[[nodiscard]] RefineStep refine_step(const std::vector<CvPoint> &points, const DeepSearchOptions &options,
                                     Index reference_error,
                                     Index previous_span = std::numeric_limits<Index>::max());

/// `step.next_size` rules evenly spaced strictly inside the chosen interval,
/// plus the working rule, in increasing-shrinkage order. The interior part may
/// be empty for order rules over a narrow interval.
[[nodiscard]] std::vector<ThresholdRule> refine_grid(const std::vector<CvPoint> &points, const RefineStep &step);

struct DeepSearchIteration {
    std::vector<CvPoint> points;
    RefineStep step;
};

struct DeepSearchTrace {
    std::vector<DeepSearchIteration> iterations;
    CvPoint final_point;

    [[nodiscard]] const ThresholdRule &final_rule() const noexcept { return final_point.rule; }
};

/// Grid search followed by iterative refinement around the working rule.
/// Every grid is evaluated on the same fold plan. Throws Error if the
/// iteration cap is reached.
[[nodiscard]] DeepSearchTrace deep_search(const CrossValidator &cv, RuleKind kind,
                                          const DeepSearchOptions &options = {});

[[nodiscard]] DeepSearchTrace deep_search(const Dataset &ds, RuleKind kind, int num_folds, std::uint64_t seed,
                                          const DeepSearchOptions &options = {}, const CvOptions &cv_options = {});

}  // namespace nsc

#endif  // NSC_TUNING_HPP_
