#ifndef NSC_BENCH_HPP_
#define NSC_BENCH_HPP_

#include "nsc/dataset.hpp"
#include "nsc/tuning.hpp"

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

namespace nsc {

/// Thresholding kind plus whether the parameter comes from the plain grid
/// minimum or from the deep search.
enum class Method { sth, hth, oth, sth2, hth2, oth2 };

[[nodiscard]] Method parse_method(std::string_view text);
[[nodiscard]] std::string_view to_string(Method method) noexcept;
[[nodiscard]] RuleKind rule_kind(Method method) noexcept;
[[nodiscard]] bool uses_deep_search(Method method) noexcept;

struct RunRecord {
    Method method = Method::sth;
    std::uint64_t seed = 0;
    ThresholdRule chosen_rule;
    Index cv_error_count = 0;
    Index test_errors = 0;
    Index test_count = 0;
    double test_error_pct = 0.0;  ///< 100 * test_errors / test_count
    Index survivor_count = 0;
};

struct ExperimentOptions {
    int requested_folds = 10;
    DeepSearchOptions search;
    FitOptions fit;
    int threads = 1;  ///< runs in parallel; 0 = hardware concurrency
};

/// Tunes the threshold on `train` with fold seed `seed`, fits the final model
/// on all of `train` and scores it on `test`.
[[nodiscard]] RunRecord run_once(const Dataset &train, const Dataset &test, Method method, std::uint64_t seed,
                                 const ExperimentOptions &options = {});

/// `runs` independent runs with seeds base_seed, base_seed + 1, ...; output is in run order.
[[nodiscard]] std::vector<RunRecord> run_experiment(const Dataset &train, const Dataset &test, Method method,
                                                    int runs = 100, std::uint64_t base_seed = 0,
                                                    const ExperimentOptions &options = {});

struct Summary {
    double mean_error = 0.0;
    double median_error = 0.0;
    double se_error = 0.0;
    double mean_survivors = 0.0;
    double se_survivors = 0.0;
};

/// Mean, median (midpoint for even counts) and standard error (sample sd / sqrt(n)).
/// Needs at least two records.
[[nodiscard]] Summary aggregate(const std::vector<RunRecord> &records);
[[nodiscard]] Summary summarize(const std::vector<double> &errors, const std::vector<double> &survivors);

void write_run_records(const std::vector<RunRecord> &records, std::ostream &out, char delim = ',');
void write_summary(Method method, const Summary &summary, std::ostream &out, bool header, char delim = ',');

/// Mean-shift Gaussian design: the first `informative` features of class k
/// (1-based) have mean k * shift, everything else mean 0.
struct SynthSpec {
    Index features = 100;
    int classes = 3;
    Index informative = 10;
    double shift = 1.0;
    std::vector<int> train_per_class{20, 20, 20};
    std::vector<int> test_per_class{20, 20, 20};
    double noise_sd = 1.0;
    std::uint64_t seed = 0;
};

void validate(const SynthSpec &spec);

struct SynthData {
    Dataset train;
    Dataset test;
};

/// Deterministic for a given spec; train and test are independent draws.
[[nodiscard]] SynthData generate_synthetic(const SynthSpec &spec);

}  // namespace nsc

#endif  // NSC_BENCH_HPP_
