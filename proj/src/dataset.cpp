#include "nsc/dataset.hpp"

#include "nsc/error.hpp"
#include "nsc/table_io.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <unordered_map>

namespace nsc {

Dataset::Dataset(Eigen::MatrixXd values, const std::vector<std::string> &labels,
                 std::vector<std::string> feature_names)
    : values_(std::move(values)), feature_names_(std::move(feature_names)) {
    if (static_cast<Index>(labels.size()) != values_.cols()) {
        throw ValidationError(
            fmt::format("{} labels given for {} samples", labels.size(), values_.cols()));
    }
    std::unordered_map<std::string, int> ids;
    classes_.reserve(labels.size());
    for (std::size_t j = 0; j < labels.size(); ++j) {
        if (labels[j].empty()) {
            throw ValidationError(fmt::format("missing label for sample {}", j + 1));
        }
        auto [it, inserted] = ids.try_emplace(labels[j], static_cast<int>(class_names_.size()));
        if (inserted) {
            class_names_.push_back(labels[j]);
        }
        classes_.push_back(it->second);
    }
    validate_and_index();
}

Dataset::Dataset(Eigen::MatrixXd values, std::vector<int> classes, std::vector<std::string> class_names,
                 std::vector<std::string> feature_names)
    : values_(std::move(values)),
      classes_(std::move(classes)),
      class_names_(std::move(class_names)),
      feature_names_(std::move(feature_names)) {
    validate_and_index();
}

void Dataset::validate_and_index() {
    const Index p = values_.rows();
    const Index n = values_.cols();
    const int K = num_classes();
    if (p < 1) {
        throw ValidationError("dataset has no features");
    }
    if (K < 2) {
        throw ValidationError(fmt::format("need at least two classes, found {}", K));
    }
    if (n < K) {
        throw ValidationError(fmt::format("{} samples cannot cover {} classes", n, K));
    }
    if (static_cast<Index>(classes_.size()) != n) {
        throw ValidationError(fmt::format("{} class ids given for {} samples", classes_.size(), n));
    }
    if (!values_.allFinite()) {
        throw ValidationError("dataset contains non-finite values");
    }
    if (!feature_names_.empty()) {
        if (static_cast<Index>(feature_names_.size()) != p) {
            throw ValidationError(fmt::format("{} feature names given for {} features", feature_names_.size(), p));
        }
        std::set<std::string_view> seen;
        for (const auto &name : feature_names_) {
            if (!seen.insert(name).second) {
                throw ValidationError(fmt::format("duplicate feature name '{}'", name));
            }
        }
    }
    class_index_.assign(K, {});
    for (Index j = 0; j < n; ++j) {
        const int k = classes_[j];
        if (k < 0 || k >= K) {
            throw ValidationError(fmt::format("class id {} of sample {} is outside 0..{}", k, j + 1, K - 1));
        }
        class_index_[k].push_back(j);
    }
    for (int k = 0; k < K; ++k) {
        if (class_index_[k].empty()) {
            throw ValidationError(fmt::format("class '{}' has no samples", class_names_[k]));
        }
    }
}

Index Dataset::min_class_size() const {
    Index smallest = num_samples();
    for (const auto &members : class_index_) {
        smallest = std::min(smallest, static_cast<Index>(members.size()));
    }
    return smallest;
}

Dataset Dataset::subset(const std::vector<Index> &idx) const {
    std::vector<int> classes;
    classes.reserve(idx.size());
    std::vector<bool> present(num_classes(), false);
    for (const Index j : idx) {
        classes.push_back(classes_.at(j));
        present[classes_[j]] = true;
    }
    for (int k = 0; k < num_classes(); ++k) {
        if (!present[k]) {
            throw DegenerateError(fmt::format("class '{}' has no samples in the subset", class_names_[k]));
        }
    }
    return Dataset(values_(Eigen::all, idx), std::move(classes), class_names_, feature_names_);
}

std::vector<Index> FoldPlan::held_in(int f, Index n) const {
    std::vector<bool> out(n, false);
    for (const Index j : folds.at(f)) {
        out[j] = true;
    }
    std::vector<Index> in;
    in.reserve(n);
    for (Index j = 0; j < n; ++j) {
        if (!out[j]) {
            in.push_back(j);
        }
    }
    return in;
}

Dataset load_matrix(const std::filesystem::path &path, SampleOrientation orientation, const LabelSource &labels) {
    if (!labels.column && !labels.file) {
        throw ValidationError("no label source given (label column or label file)");
    }
    LabeledMatrix raw = read_labeled_matrix(path, orientation, labels);
    return Dataset(std::move(raw.values), raw.labels, std::move(raw.feature_names));
}

void write_matrix(const Dataset &ds, const std::filesystem::path &path, const std::string &label_column,
                  char delimiter) {
    std::ofstream out(path);
    if (!out) {
        throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
    }
    const Index p = ds.num_features();
    for (Index i = 0; i < p; ++i) {
        out << (ds.feature_names().empty() ? fmt::format("f{}", i + 1) : ds.feature_names()[i]) << delimiter;
    }
    out << label_column << '\n';
    for (Index j = 0; j < ds.num_samples(); ++j) {
        for (Index i = 0; i < p; ++i) {
            out << fmt::format("{}", ds.values()(i, j)) << delimiter;
        }
        out << ds.label(j) << '\n';
    }
    if (!out) {
        throw IoError(fmt::format("failed writing '{}'", path.string()));
    }
}

int fold_count(const Dataset &ds, int requested) {
    const auto smallest = static_cast<int>(ds.min_class_size());
    return smallest >= requested ? requested : smallest;
}

FoldPlan stratified_folds(const Dataset &ds, int num_folds, std::uint64_t seed) {
    const Index smallest = ds.min_class_size();
    if (num_folds < 2 || num_folds > smallest) {
        throw ArgumentError(
            fmt::format("fold count {} outside [2, {}] (smallest class size)", num_folds, smallest));
    }
    std::mt19937_64 rng(seed);
    FoldPlan plan;
    plan.folds.assign(num_folds, {});
    int next = 0;
    for (const auto &members : ds.class_index()) {
        std::vector<Index> order = members;
        std::shuffle(order.begin(), order.end(), rng);
        for (const Index j : order) {
            plan.folds[next].push_back(j);
            next = (next + 1) % num_folds;
        }
    }
    for (auto &fold : plan.folds) {
        std::sort(fold.begin(), fold.end());
    }
    return plan;
}

}  // namespace nsc
