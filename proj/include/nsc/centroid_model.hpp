#ifndef NSC_CENTROID_MODEL_HPP_
#define NSC_CENTROID_MODEL_HPP_

#include "nsc/dataset.hpp"
#include "nsc/thresholding.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace nsc {

enum class PriorMode { empirical, uniform };

/// Which class-size factor scales the centroid differences.
enum class ScaleFactor {
    plus,   ///< sqrt(1/n_k + 1/n)
    minus,  ///< sqrt(1/n_k - 1/n)
};

struct FitOptions {
    PriorMode priors = PriorMode::empirical;
    ScaleFactor scale = ScaleFactor::plus;
    /// Fixed offset added to every pooled sd; the median pooled sd when unset.
    std::optional<double> s0;
};

/// Everything estimated from a training set before thresholding.
struct CentroidStats {
    Eigen::VectorXd overall_centroid;  ///< p
    Eigen::MatrixXd class_centroids;   ///< p x K
    Eigen::VectorXd pooled_sd;         ///< p, within-class
    double s0 = 0.0;
    Eigen::VectorXd m;          ///< K, class-size scale factors
    Eigen::MatrixXd t_stats;    ///< p x K standardized centroid differences
    Eigen::VectorXd priors;     ///< K
    Eigen::VectorXi class_sizes;  ///< K

    [[nodiscard]] Index num_features() const noexcept { return class_centroids.rows(); }
    [[nodiscard]] int num_classes() const noexcept { return static_cast<int>(class_centroids.cols()); }
    [[nodiscard]] Index num_samples() const noexcept { return class_sizes.sum(); }

    /// (s_i + s0), the per-feature denominator.
    [[nodiscard]] Eigen::VectorXd scale() const { return pooled_sd.array() + s0; }
    /// x̄_i + m_k (s_i + s0) d_ik for an arbitrary statistic matrix.
    [[nodiscard]] Eigen::MatrixXd centroids_from(const Eigen::Ref<const Eigen::MatrixXd> &t) const;
};

/// Class statistics with a thresholding rule applied.
struct ShrunkenModel {
    CentroidStats stats;
    ThresholdRule rule;
    Eigen::MatrixXd shrunken_t;          ///< p x K
    Eigen::MatrixXd shrunken_centroids;  ///< p x K
    std::vector<Index> survivors;        ///< features with a nonzero shrunken statistic
    std::vector<std::string> class_names;
    std::vector<std::string> feature_names;
};

/// Fits means, pooled sds, s0, the scale factors, the statistics d_ik and the priors.
///
/// Throws DegenerateError when n <= K or when some feature has s_i + s0 == 0.
[[nodiscard]] CentroidStats fit_statistics(const Dataset &ds, const FitOptions &options = {});

/// Thresholds the statistics and rebuilds the class centroids from them.
[[nodiscard]] ShrunkenModel shrink(const CentroidStats &stats, const ThresholdRule &rule);

/// Convenience: fit then shrink, carrying class/feature names into the model.
[[nodiscard]] ShrunkenModel train(const Dataset &ds, const ThresholdRule &rule, const FitOptions &options = {});

/// δ_k(x) = Σ_i (x_i - x̄'_ik)² / (s_i + s0)² - 2 log π_k over all p features.
[[nodiscard]] Eigen::VectorXd discriminant_scores(const ShrunkenModel &model, const Eigen::Ref<const Eigen::VectorXd> &x);

/// Scores summed over survivors only. They differ from `discriminant_scores`
/// by a term that is the same for every class.
[[nodiscard]] Eigen::VectorXd survivor_scores(const ShrunkenModel &model, const Eigen::Ref<const Eigen::VectorXd> &x);

/// Class id (0-based) with the smallest score for each row of `x` (m x p).
/// Ties go to the smallest class id.
[[nodiscard]] std::vector<int> predict(const ShrunkenModel &model, const Eigen::Ref<const Eigen::MatrixXd> &x);

/// Same, for the columns of a p x n sample matrix (the Dataset layout).
[[nodiscard]] std::vector<int> predict_columns(const ShrunkenModel &model, const Eigen::Ref<const Eigen::MatrixXd> &x);

/// Plain-text model file: versioned header then every fitted vector/matrix.
void write_model(const ShrunkenModel &model, std::ostream &out);
void write_model(const ShrunkenModel &model, const std::filesystem::path &path);
[[nodiscard]] ShrunkenModel read_model(std::istream &in);
[[nodiscard]] ShrunkenModel read_model(const std::filesystem::path &path);

}  // namespace nsc

#endif  // NSC_CENTROID_MODEL_HPP_
