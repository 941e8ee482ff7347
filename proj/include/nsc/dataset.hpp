#ifndef NSC_DATASET_HPP_
#define NSC_DATASET_HPP_

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace nsc {

using Index = Eigen::Index;

/// Labeled feature-by-sample matrix.
///
/// `values` is stored p x n (one column per sample). Class ids are 0-based
/// internally and assigned in first-appearance order of the label stream;
/// `class_names[k]` recovers the original label text.
class Dataset {
  public:
    Dataset() = default;

    /// Validates and indexes. Throws ValidationError on any invariant breach.
    Dataset(Eigen::MatrixXd values, const std::vector<std::string> &labels,
            std::vector<std::string> feature_names = {});

    /// Same as above with classes already mapped; `class_names.size()` fixes K.
    Dataset(Eigen::MatrixXd values, std::vector<int> classes, std::vector<std::string> class_names,
            std::vector<std::string> feature_names = {});

    [[nodiscard]] Index num_features() const noexcept { return values_.rows(); }
    [[nodiscard]] Index num_samples() const noexcept { return values_.cols(); }
    [[nodiscard]] int num_classes() const noexcept { return static_cast<int>(class_names_.size()); }

    [[nodiscard]] const Eigen::MatrixXd &values() const noexcept { return values_; }
    [[nodiscard]] const std::vector<int> &classes() const noexcept { return classes_; }
    [[nodiscard]] const std::vector<std::string> &class_names() const noexcept { return class_names_; }
    [[nodiscard]] const std::vector<std::string> &feature_names() const noexcept { return feature_names_; }
    [[nodiscard]] const std::vector<std::vector<Index>> &class_index() const noexcept { return class_index_; }

    [[nodiscard]] Index class_size(int k) const { return static_cast<Index>(class_index_.at(k).size()); }
    [[nodiscard]] Index min_class_size() const;

    /// Label text of sample j.
    [[nodiscard]] const std::string &label(Index j) const { return class_names_.at(classes_.at(j)); }

    /// Samples `idx` (in that order), keeping the full class table of this dataset.
    /// Throws DegenerateError if a class ends up with no samples.
    [[nodiscard]] Dataset subset(const std::vector<Index> &idx) const;

  private:
    void validate_and_index();

    Eigen::MatrixXd values_;
    std::vector<int> classes_;
    std::vector<std::string> class_names_;
    std::vector<std::string> feature_names_;
    std::vector<std::vector<Index>> class_index_;
};

/// Disjoint, covering partition of sample indices into F folds.
struct FoldPlan {
    std::vector<std::vector<Index>> folds;

    [[nodiscard]] int num_folds() const noexcept { return static_cast<int>(folds.size()); }
    /// All samples not in fold f, ascending.
    [[nodiscard]] std::vector<Index> held_in(int f, Index n) const;
};

enum class SampleOrientation { rows, cols };

/// Where the class labels come from when loading a matrix.
struct LabelSource {
    std::optional<std::string> column;        ///< header name (rows) or first-cell name (cols)
    std::optional<std::filesystem::path> file;  ///< one label per line, sample order
    bool column_optional = false;               ///< a missing label column means unlabeled data
};

/// Reads a delimited text matrix (`,` or TAB, picked from the header line).
///
/// With `SampleOrientation::rows` each data row is a sample and each header
/// cell names a feature (the label column is excluded). With
/// `SampleOrientation::cols` the header names the samples (its first cell is
/// ignored) and every data row starts with a feature name.
[[nodiscard]] Dataset load_matrix(const std::filesystem::path &path, SampleOrientation orientation,
                                  const LabelSource &labels);

/// Writes `ds` with samples in rows and the labels in a trailing column `label_column`.
/// Values are printed in shortest round-trip form, so `load_matrix` recovers them bit-exactly.
void write_matrix(const Dataset &ds, const std::filesystem::path &path, const std::string &label_column = "label",
                  char delimiter = ',');

/// `requested` unless the smallest class is smaller, in which case the smallest class size.
[[nodiscard]] int fold_count(const Dataset &ds, int requested = 10);

/// Seeded per-class shuffle followed by a round-robin deal into `num_folds` blocks.
/// The deal continues across classes so fold sizes also stay balanced.
[[nodiscard]] FoldPlan stratified_folds(const Dataset &ds, int num_folds, std::uint64_t seed);

}  // namespace nsc

#endif  // NSC_DATASET_HPP_
