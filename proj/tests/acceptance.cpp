// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails.
#include "nsc/bench.hpp"
#include "nsc/centroid_model.hpp"
#include "nsc/cli.hpp"
#include "nsc/srd.hpp"
#include "nsc/thresholding.hpp"
#include "nsc/tuning.hpp"
#include "oracle.hpp"
#include "support.hpp"

#include <fmt/core.h>

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

using namespace nsc;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string &what) {
        if (!ok && pass) {
            pass = false;
            detail = what;
        }
    }
};

std::vector<int> to_vec(const Eigen::VectorXi &v) { return {v.data(), v.data() + v.size()}; }

int run_cli(std::vector<std::string> args, std::string &out, std::string &err) {
    args.insert(args.begin(), "nsc");
    std::ostringstream o, e;
    const int code = cli_main(args, o, e);
    out = o.str();
    err = e.str();
    return code;
}

/// method -> (raw, scaled, scaled xx1, verdict) parsed from the srd report.
std::map<std::string, std::vector<std::string>> parse_report(const std::string &text) {
    std::map<std::string, std::vector<std::string>> rows;
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line) && !line.empty()) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        for (std::string cell; std::getline(ss, cell, ',');) {
            cells.push_back(cell);
        }
        rows[cells.front()] = cells;
    }
    return rows;
}

Outcome srd_reproduction() {
    Outcome o;
    const auto dir = testing::temp_dir("acceptance_srd");
    testing::write_file(dir / "errors.csv", testing::cancer_errors_csv());
    std::string out, err;
    const auto start = std::chrono::steady_clock::now();
    const int code = run_cli({"srd", "--input=" + (dir / "errors.csv").string(), "--gold=min"}, out, err);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    o.require(code == 0, "srd subcommand failed: " + err);
    const auto rows = parse_report(out);
    const std::vector<std::tuple<std::string, std::string, std::string>> expected{
        {"STh", "12", "24"}, {"OTh", "4", "8"}, {"HTh", "8", "16"}};
    for (const auto &[name, raw, scaled] : expected) {
        const auto it = rows.find(name);
        o.require(it != rows.end(), "missing row " + name);
        if (it == rows.end()) {
            continue;
        }
        o.require(it->second[1] == raw, name + " raw SRD " + it->second[1]);
        o.require(it->second[2] == scaled, name + " scaled SRD " + it->second[2]);
        o.require(std::stod(it->second[2]) < std::stod(it->second[3]), name + " not below XX1");
        o.require(it->second[6] == "exact", name + " null mode " + it->second[6]);
        o.require(it->second[7] == "significant", name + " verdict " + it->second[7]);
    }
    o.require(max_srd(10) == 50, "max SRD for 10 cases");
    o.require(seconds < 1.0, fmt::format("took {} s", seconds));
    if (o.pass) {
        o.detail = fmt::format("raw 12/4/8, scaled 24/8/16 of 50, all below XX1, {:.3f} s", seconds);
    }
    return o;
}

Outcome gold_ranks() {
    Outcome o;
    const PerformanceMatrix m = testing::cancer_errors_matrix();
    const SrdResult res = srd(m, GoldStrategy::row_min);
    // rank and diff columns per method, rows in table order.
    const std::vector<std::vector<int>> ranks{
        {2, 6, 1, 3, 4, 5, 8, 7, 9, 10}, {1, 2, 3, 6, 4, 5, 7, 8, 9, 10}, {2, 1, 3, 7, 4, 5, 6, 8, 9, 10}};
    const std::vector<std::vector<int>> diffs{
        {1, 4, 2, 1, 1, 1, 1, 1, 0, 0}, {0, 0, 0, 2, 1, 1, 0, 0, 0, 0}, {1, 1, 0, 3, 1, 1, 1, 0, 0, 0}};
    o.require(to_vec(res.gold_rank) == std::vector<int>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, "gold ranks");
    for (Index j = 0; j < 3; ++j) {
        const auto &name = m.col_names[static_cast<std::size_t>(j)];
        o.require(to_vec(res.method_ranks.col(j)) == ranks[static_cast<std::size_t>(j)], name + " ranks");
        const Eigen::VectorXi diff = (res.method_ranks.col(j) - res.gold_rank).cwiseAbs();
        o.require(to_vec(diff) == diffs[static_cast<std::size_t>(j)], name + " diffs");
    }
    if (o.pass) {
        o.detail = "30 rank and 30 diff cells match";
    }
    return o;
}

Outcome survivor_average() {
    Outcome o;
    const std::vector<double> sth{50, 94, 111, 1111, 1911, 2010, 3317, 3483, 5389, 8637};
    const std::vector<double> hth{134, 36, 149, 1548, 3610, 3716, 1494, 716, 1492, 2073};
    const std::vector<double> oth{87, 32, 139, 1469, 2106, 2931, 679, 360, 327, 1156};
    const double a = summarize(sth, sth).mean_survivors;
    const double b = summarize(hth, hth).mean_survivors;
    const double c = summarize(oth, oth).mean_survivors;
    o.require(std::abs(a - 2611) <= 0.5, fmt::format("STh {}", a));
    o.require(std::abs(b - 1497) <= 0.5, fmt::format("HTh {}", b));
    o.require(std::abs(c - 929) <= 0.5, fmt::format("OTh {}", c));
    o.detail = fmt::format("STh {} HTh {} OTh {}", a, b, c);
    return o;
}

Outcome exact_null() {
    Outcome o;
    for (int r = 2; r <= 8; ++r) {
        const auto counts = oracle::permutation_srd_counts(r);
        double total = 0.0;
        for (const auto &[v, c] : counts) {
            total += static_cast<double>(c);
        }
        const auto null = exact_null_distribution(r);
        for (std::size_t v = 0; v < null.probability.size(); ++v) {
            const auto it = counts.find(static_cast<int>(v));
            const double expect = it == counts.end() ? 0.0 : static_cast<double>(it->second) / total;
            o.require(null.probability[v] == expect, fmt::format("r={} value {}", r, v));
        }
        o.require(static_cast<int>(null.probability.size()) - 1 == counts.rbegin()->first, fmt::format("r={} support", r));
    }
    const auto ten = exact_null_distribution(10);
    double sum = 0.0;
    for (const double p : ten.probability) {
        sum += p;
    }
    o.require(std::abs(sum - 1.0) < 1e-12, fmt::format("r=10 sums to {}", sum));
    o.require(ten.cdf(4) < 0.05, fmt::format("P(SRD<=4) = {}", ten.cdf(4)));
    if (o.pass) {
        o.detail = fmt::format("r=2..8 exact; r=10 sum-1 = {:.1e}, P(SRD<=4) = {:.3e}", sum - 1.0, ten.cdf(4));
    }
    return o;
}

Outcome oracle_equivalence() {
    Outcome o;
    std::mt19937_64 rng(20240611);
    std::normal_distribution<double> normal(0.0, 2.0);
    Index mismatches = 0;
    Index predictions = 0;
    for (int instance = 0; instance < 200; ++instance) {
        const int p = 1 + static_cast<int>(rng() % 50);
        const int classes = 2 + static_cast<int>(rng() % 3);
        const int n = 2 * classes + 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(40 - 2 * classes));
        const Dataset ds = testing::random_dataset(rng, p, n, classes);
        const ShrunkenModel model = train(ds, ThresholdRule::soft(0.0));
        const oracle::Stats ref = oracle::fit(testing::to_oracle(ds));
        Eigen::MatrixXd x(10, p);
        for (Index i = 0; i < x.size(); ++i) {
            x(i) = normal(rng);
        }
        const auto got = predict(model, x);
        for (Index r = 0; r < x.rows(); ++r) {
            std::vector<double> row;
            for (Index i = 0; i < p; ++i) {
                row.push_back(x(r, i));
            }
            mismatches += got[static_cast<std::size_t>(r)] != oracle::classify(ref, row) ? 1 : 0;
            ++predictions;
        }
        const auto train_pred = predict_columns(model, ds.values());
        for (Index j = 0; j < ds.num_samples(); ++j) {
            const auto sample = testing::to_oracle(ds).samples[static_cast<std::size_t>(j)];
            mismatches += train_pred[static_cast<std::size_t>(j)] != oracle::classify(ref, sample) ? 1 : 0;
            ++predictions;
        }
    }
    o.require(mismatches == 0, fmt::format("{} mismatches", mismatches));
    o.detail = fmt::format("{} predictions on 200 instances, {} mismatches", predictions, mismatches);
    return o;
}

Outcome thresholding_algebra() {
    Outcome o;
    std::mt19937_64 rng(606);
    std::normal_distribution<double> normal(0.0, 2.0);
    std::uniform_real_distribution<double> unit(0.0, 4.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const double d = normal(rng);
        const double delta = unit(rng);
        for (const auto f : {&soft_threshold<double>, &hard_threshold<double>}) {
            o.require(std::abs(f(d, delta)) <= std::abs(d), "shrinkage dominance");
            o.require(f(-d, delta) == -f(d, delta), "odd symmetry");
        }
    }
    for (int trial = 0; trial < 1000; ++trial) {
        const Index p = 1 + static_cast<Index>(rng() % 10);
        const Index k = 1 + static_cast<Index>(rng() % 4);
        Eigen::MatrixXd d(p, k);
        for (Index i = 0; i < d.size(); ++i) {
            d(i) = std::round(normal(rng) * 2.0) / 2.0;
        }
        const Index keep = static_cast<Index>(rng() % static_cast<std::uint64_t>(p * k + 1));
        const Index nonzero = (d.array() != 0.0).count();
        o.require((order_threshold(d, keep).array() != 0.0).count() == std::min(keep, nonzero), "order count");
    }
    for (int trial = 0; trial < 1000; ++trial) {
        const Index p = 1 + static_cast<Index>(rng() % 12);
        Eigen::MatrixXd d(p, 3);
        for (Index i = 0; i < d.size(); ++i) {
            d(i) = normal(rng);
        }
        std::size_t previous = static_cast<std::size_t>(p);
        for (const auto &rule : threshold_grid(d, static_cast<RuleKind>(trial % 3), 2 + trial % 30)) {
            const std::size_t count = surviving_rows(apply_rule(rule, d)).size();
            o.require(count <= previous, "grid survivor monotonicity");
            previous = count;
        }
    }
    for (int trial = 0; trial < 1000; ++trial) {
        const Dataset ds = testing::random_dataset(rng, 1 + static_cast<int>(rng() % 8), 12, 2 + trial % 3);
        const CentroidStats s = fit_statistics(ds);
        const auto kind = static_cast<RuleKind>(trial % 3);
        const ThresholdRule rule =
            kind == RuleKind::order
                ? ThresholdRule::order(static_cast<Index>(rng() % static_cast<std::uint64_t>(s.t_stats.size() + 1)))
                : ThresholdRule{kind, unit(rng)};
        const ShrunkenModel m = shrink(s, rule);
        o.require((m.shrunken_t.array().abs() <= s.t_stats.array().abs()).all(), "model shrinkage dominance");
        double worst = 0.0;
        for (Index i = 0; i < s.num_features(); ++i) {
            for (int c = 0; c < s.num_classes(); ++c) {
                const double rebuilt = s.overall_centroid(i) + s.m(c) * (s.pooled_sd(i) + s.s0) * m.shrunken_t(i, c);
                worst = std::max(worst, std::abs(m.shrunken_centroids(i, c) - rebuilt) /
                                            (1.0 + std::abs(m.shrunken_centroids(i, c))));
            }
        }
        o.require(worst < 1e-10, fmt::format("reconstruction error {}", worst));
    }
    if (o.pass) {
        o.detail = "5 suites x 1000 cases";
    }
    return o;
}

Outcome deep_search_contract() {
    Outcome o;
    int iterations = 0;
    int switches = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        SynthSpec spec;
        spec.features = 100 + static_cast<Index>(seed % 5) * 50;
        spec.informative = 5 + static_cast<Index>(seed % 7);
        spec.classes = 2 + static_cast<int>(seed % 3);
        spec.shift = 0.4 + 0.1 * static_cast<double>(seed % 6);
        spec.train_per_class.assign(static_cast<std::size_t>(spec.classes), 8 + static_cast<int>(seed % 5));
        spec.test_per_class.assign(static_cast<std::size_t>(spec.classes), 2);
        spec.seed = 1000 + seed;
        const SynthData data = generate_synthetic(spec);
        const auto kind = static_cast<RuleKind>(seed % 3);
        try {
            const CrossValidator cv(data.train, fold_count(data.train), seed);
            const DeepSearchTrace trace = deep_search(cv, kind);
            const auto &initial = trace.iterations.front().points;
            const Index best = initial[static_cast<std::size_t>(select_smallest(initial))].error_count;
            o.require(trace.iterations.size() <= 50, fmt::format("seed {} used {} iterations", seed, trace.iterations.size()));
            o.require(trace.final_point.error_count <= best + 1,
                      fmt::format("seed {}: final {} vs best {}", seed, trace.final_point.error_count, best));
            iterations += static_cast<int>(trace.iterations.size());
            for (const auto &it : trace.iterations) {
                switches += it.step.switched ? 1 : 0;
            }
        } catch (const std::exception &e) {
            o.require(false, fmt::format("seed {}: {}", seed, e.what()));
        }
    }
    // Cut-offs 0.418878 (10283 survivors) and 7.539809 (26 survivors), one error apart.
    std::vector<CvPoint> table;
    const std::vector<double> cut{0.0, 0.418878, 2.5, 5.0, 7.539809, 9.0};
    const std::vector<Index> errors{9, 5, 8, 7, 6, 30};
    const std::vector<Index> genes{16000, 10283, 4000, 800, 26, 0};
    for (std::size_t i = 0; i < cut.size(); ++i) {
        table.push_back({ThresholdRule::soft(cut[i]), errors[i], genes[i]});
    }
    const RefineStep step = refine_step(table, DeepSearchOptions{}, 5);
    o.require(step.best == 1 && step.switched && step.chosen == 4, "cut-off pair did not switch");
    if (o.pass) {
        o.detail = fmt::format("50 datasets, {} iterations, {} switches; scenario switches to 7.539809", iterations,
                               switches);
    }
    return o;
}

Outcome bench_determinism() {
    Outcome o;
    const auto dir = testing::temp_dir("acceptance_bench");
    std::string out, err;
    o.require(run_cli({"synth", "--p=150", "--q=10", "--k=3", "--shift=1", "--n-per-class=10", "--n-test-per-class=10",
                       "--seed=8", "--out=" + dir.string()},
                      out, err) == 0,
              "synth failed: " + err);
    auto bench = [&](const std::string &tag, const std::string &threads) {
        std::string text;
        const int code = run_cli({"bench", "--train=" + (dir / "train.csv").string(),
                                  "--test=" + (dir / "test.csv").string(), "--method=sth,hth,oth,sth2,hth2,oth2",
                                  "--runs=5", "--seed=42", "--threads=" + threads,
                                  "--out=" + (dir / ("runs_" + tag + ".csv")).string(),
                                  "--summary=" + (dir / ("summary_" + tag + ".csv")).string()},
                                 text, err);
        o.require(code == 0, "bench failed: " + err);
        return testing::read_file(dir / ("runs_" + tag + ".csv")) + testing::read_file(dir / ("summary_" + tag + ".csv"));
    };
    const std::string first = bench("a", "1");
    const std::string second = bench("b", "1");
    const std::string threaded = bench("c", "4");
    o.require(!first.empty(), "empty bench output");
    o.require(first == second, "repeated invocations differ");
    o.require(first == threaded, "thread count changes the output");
    if (o.pass) {
        o.detail = fmt::format("{} bytes identical across 3 invocations (1, 1, 4 threads)", first.size());
    }
    return o;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"SRD reproduction", srd_reproduction},
        {"gold-rank reproduction", gold_ranks},
        {"overall survivor average", survivor_average},
        {"exact null distribution", exact_null},
        {"oracle equivalence", oracle_equivalence},
        {"thresholding algebra", thresholding_algebra},
        {"deep-search contract", deep_search_contract},
        {"protocol determinism", bench_determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome outcome;
        try {
            outcome = criteria[i].second();
        } catch (const std::exception &e) {
            outcome.pass = false;
            outcome.detail = std::string("exception: ") + e.what();
        }
        failed += outcome.pass ? 0 : 1;
        std::cout << fmt::format("{} criterion {}: {} ({})\n", outcome.pass ? "PASS" : "FAIL", i + 1,
                                 criteria[i].first, outcome.detail);
    }
    std::cout << fmt::format("{}/{} criteria passed\n", criteria.size() - static_cast<std::size_t>(failed),
                             criteria.size());
    return failed == 0 ? 0 : 1;
}
