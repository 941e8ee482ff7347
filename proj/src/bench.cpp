#include "nsc/bench.hpp"

#include "nsc/error.hpp"
#include "nsc/parallel.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>
#include <random>

namespace nsc {

Method parse_method(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    static const std::map<std::string, Method, std::less<>> names{
        {"sth", Method::sth},   {"hth", Method::hth},   {"oth", Method::oth},
        {"sth2", Method::sth2}, {"hth2", Method::hth2}, {"oth2", Method::oth2}};
    const auto it = names.find(lower);
    if (it == names.end()) {
        throw ArgumentError(fmt::format("unknown method '{}' (sth|hth|oth|sth2|hth2|oth2)", text));
    }
    return it->second;
}

std::string_view to_string(Method method) noexcept {
    switch (method) {
    case Method::sth:
        return "STh";
    case Method::hth:
        return "HTh";
    case Method::oth:
        return "OTh";
    case Method::sth2:
        return "STh2";
    case Method::hth2:
        return "HTh2";
    case Method::oth2:
        return "OTh2";
    }
    return "?";
}

RuleKind rule_kind(Method method) noexcept {
    switch (method) {
    case Method::sth:
    case Method::sth2:
        return RuleKind::soft;
    case Method::hth:
    case Method::hth2:
        return RuleKind::hard;
    case Method::oth:
    case Method::oth2:
        return RuleKind::order;
    }
    return RuleKind::soft;
}

bool uses_deep_search(Method method) noexcept {
    return method == Method::sth2 || method == Method::hth2 || method == Method::oth2;
}

namespace {

/// Test class ids expressed in the training set's class numbering.
std::vector<int> align_classes(const Dataset &train, const Dataset &test) {
    std::map<std::string, int, std::less<>> ids;
    for (int k = 0; k < train.num_classes(); ++k) {
        ids.emplace(train.class_names()[static_cast<std::size_t>(k)], k);
    }
    std::vector<int> truth;
    truth.reserve(static_cast<std::size_t>(test.num_samples()));
    for (Index j = 0; j < test.num_samples(); ++j) {
        const auto it = ids.find(test.label(j));
        if (it == ids.end()) {
            throw ValidationError(fmt::format("test class '{}' does not occur in the training set", test.label(j)));
        }
        truth.push_back(it->second);
    }
    return truth;
}

}  // namespace

RunRecord run_once(const Dataset &train, const Dataset &test, Method method, std::uint64_t seed,
                   const ExperimentOptions &options) {
    if (train.num_features() != test.num_features()) {
        throw ValidationError(fmt::format("train has {} features, test has {}", train.num_features(),
                                          test.num_features()));
    }
    const std::vector<int> truth = align_classes(train, test);
    const int folds = fold_count(train, options.requested_folds);
    const CrossValidator cv(train, folds, seed, {options.fit, 1});

    RunRecord rec;
    rec.method = method;
    rec.seed = seed;
    CvPoint chosen;
    if (uses_deep_search(method)) {
        chosen = deep_search(cv, rule_kind(method), options.search).final_point;
    } else {
        const CvCurve curve = cv.evaluate(threshold_grid(cv.full_stats().t_stats, rule_kind(method), options.search.m));
        chosen = curve.points[static_cast<std::size_t>(select_smallest(curve.points))];
    }
    rec.chosen_rule = chosen.rule;
    rec.cv_error_count = chosen.error_count;

    const ShrunkenModel model = shrink(cv.full_stats(), chosen.rule);
    const auto predicted = predict_columns(model, test.values());
    for (std::size_t j = 0; j < predicted.size(); ++j) {
        rec.test_errors += predicted[j] != truth[j] ? 1 : 0;
    }
    rec.test_count = test.num_samples();
    rec.test_error_pct = 100.0 * static_cast<double>(rec.test_errors) / static_cast<double>(rec.test_count);
    rec.survivor_count = static_cast<Index>(model.survivors.size());
    return rec;
}

std::vector<RunRecord> run_experiment(const Dataset &train, const Dataset &test, Method method, int runs,
                                      std::uint64_t base_seed, const ExperimentOptions &options) {
    if (runs < 1) {
        throw ArgumentError(fmt::format("need at least one run, got {}", runs));
    }
    std::vector<RunRecord> records(static_cast<std::size_t>(runs));
    parallel_for(runs, options.threads, [&](std::ptrdiff_t r) {
        records[static_cast<std::size_t>(r)] =
            run_once(train, test, method, base_seed + static_cast<std::uint64_t>(r), options);
    });
    return records;
}

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::pair<double, double> mean_and_se(const std::vector<double> &v) {
    const auto n = static_cast<double>(v.size());
    double mean = 0.0;
    for (const double x : v) {
        mean += x;
    }
    mean /= n;
    double ss = 0.0;
    for (const double x : v) {
        ss += (x - mean) * (x - mean);
    }
    return {mean, std::sqrt(ss / (n - 1.0)) / std::sqrt(n)};
}

}  // namespace

Summary summarize(const std::vector<double> &errors, const std::vector<double> &survivors) {
    if (errors.size() < 2 || survivors.size() != errors.size()) {
        throw ArgumentError(fmt::format("aggregation needs at least two runs, got {}", errors.size()));
    }
    Summary s;
    std::tie(s.mean_error, s.se_error) = mean_and_se(errors);
    s.median_error = median(errors);
    std::tie(s.mean_survivors, s.se_survivors) = mean_and_se(survivors);
    return s;
}

Summary aggregate(const std::vector<RunRecord> &records) {
    std::vector<double> errors;
    std::vector<double> survivors;
    for (const auto &rec : records) {
        errors.push_back(rec.test_error_pct);
        survivors.push_back(static_cast<double>(rec.survivor_count));
    }
    return summarize(errors, survivors);
}

void write_run_records(const std::vector<RunRecord> &records, std::ostream &out, char delim) {
    out << fmt::format("run{0}method{0}seed{0}rule{0}cv_errors{0}test_errors{0}test_count{0}test_error_pct{0}survivors\n",
                       delim);
    for (std::size_t r = 0; r < records.size(); ++r) {
        const auto &rec = records[r];
        out << fmt::format("{1}{0}{2}{0}{3}{0}{4}{0}{5}{0}{6}{0}{7}{0}{8}{0}{9}\n", delim, r + 1, to_string(rec.method),
                           rec.seed, to_string(rec.chosen_rule), rec.cv_error_count, rec.test_errors, rec.test_count,
                           rec.test_error_pct, rec.survivor_count);
    }
}

void write_summary(Method method, const Summary &s, std::ostream &out, bool header, char delim) {
    if (header) {
        out << fmt::format("method{0}mean_error{0}median_error{0}se_error{0}mean_survivors{0}se_survivors\n", delim);
    }
    out << fmt::format("{1}{0}{2}{0}{3}{0}{4}{0}{5}{0}{6}\n", delim, to_string(method), s.mean_error, s.median_error,
                       s.se_error, s.mean_survivors, s.se_survivors);
}

void validate(const SynthSpec &spec) {
    if (spec.features < 1 || spec.classes < 2) {
        throw ArgumentError("synthetic data needs at least one feature and two classes");
    }
    if (spec.informative < 0 || spec.informative > spec.features) {
        throw ArgumentError(fmt::format("informative features {} outside [0, {}]", spec.informative, spec.features));
    }
    if (!std::isfinite(spec.shift)) {
        throw ArgumentError("shift must be finite");
    }
    if (!(spec.noise_sd > 0.0) || !std::isfinite(spec.noise_sd)) {
        throw ArgumentError("noise sd must be positive");
    }
    if (static_cast<int>(spec.train_per_class.size()) != spec.classes ||
        static_cast<int>(spec.test_per_class.size()) != spec.classes) {
        throw ArgumentError(fmt::format("need {} per-class sample counts", spec.classes));
    }
    for (const int n : spec.train_per_class) {
        if (n < 2) {
            throw ArgumentError("every class needs at least 2 training samples");
        }
    }
    for (const int n : spec.test_per_class) {
        if (n < 1) {
            throw ArgumentError("every class needs at least 1 test sample");
        }
    }
}

SynthData generate_synthetic(const SynthSpec &spec) {
    validate(spec);
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> noise(0.0, spec.noise_sd);

    std::vector<std::string> features;
    for (Index i = 0; i < spec.features; ++i) {
        features.push_back(fmt::format("g{}", i + 1));
    }
    auto draw = [&](const std::vector<int> &per_class) {
        const int n = std::accumulate(per_class.begin(), per_class.end(), 0);
        Eigen::MatrixXd x(spec.features, n);
        std::vector<std::string> labels;
        Index j = 0;
        for (int k = 0; k < spec.classes; ++k) {
            for (int s = 0; s < per_class[static_cast<std::size_t>(k)]; ++s, ++j) {
                for (Index i = 0; i < spec.features; ++i) {
                    const double mean = i < spec.informative ? (k + 1) * spec.shift : 0.0;
                    x(i, j) = mean + noise(rng);
                }
                labels.push_back(fmt::format("c{}", k + 1));
            }
        }
        return Dataset(std::move(x), labels, features);
    };
    Dataset train = draw(spec.train_per_class);
    Dataset test = draw(spec.test_per_class);
    return {std::move(train), std::move(test)};
}

}  // namespace nsc
