#include "nsc/cli.hpp"

#include "nsc/bench.hpp"
#include "nsc/centroid_model.hpp"
#include "nsc/dataset.hpp"
#include "nsc/error.hpp"
#include "nsc/parallel.hpp"
#include "nsc/srd.hpp"
#include "nsc/table_io.hpp"
#include "nsc/tuning.hpp"

#include <CLI11.hpp>
#include <fmt/core.h>

#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <set>
#include <sstream>

namespace nsc {

namespace {

namespace fs = std::filesystem;

/// `path` or, when empty, the fallback stream.
class Sink {
  public:
    Sink(const std::string &path, std::ostream &fallback) {
        if (path.empty() || path == "-") {
            stream_ = &fallback;
        } else {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) {
                throw IoError(fmt::format("cannot open '{}' for writing", path));
            }
            stream_ = file_.get();
        }
        path_ = path;
    }
    ~Sink() = default;
    Sink(const Sink &) = delete;
    Sink &operator=(const Sink &) = delete;

    std::ostream &get() { return *stream_; }

    void finish() {
        stream_->flush();
        if (!*stream_) {
            throw IoError(fmt::format("failed writing '{}'", path_.empty() ? "<stdout>" : path_));
        }
    }

  private:
    std::unique_ptr<std::ofstream> file_;
    std::ostream *stream_ = nullptr;
    std::string path_;
};

struct DataArgs {
    std::string input;
    std::string samples_in = "rows";
    std::string label_col;
    std::string labels;

    void add(CLI::App *sub, bool input_required = true, const std::string &input_name = "--input") {
        auto *opt = sub->add_option(input_name, input, "Delimited matrix file (comma or TAB)");
        if (input_required) {
            opt->required();
        }
        sub->add_option("--samples-in", samples_in, "Orientation: rows|cols")
            ->check(CLI::IsMember({"rows", "cols"}))
            ->capture_default_str();
        sub->add_option("--label-col", label_col, "Label column (rows) or label row name (cols); default 'label'");
        sub->add_option("--labels", labels, "Label file, one label per line in sample order");
    }

    [[nodiscard]] SampleOrientation orientation() const {
        return samples_in == "cols" ? SampleOrientation::cols : SampleOrientation::rows;
    }

    /// With `labels_optional` an absent label column yields unlabeled data.
    [[nodiscard]] LabelSource source(bool labels_optional = false) const {
        LabelSource src;
        if (!labels.empty()) {
            src.file = labels;
        }
        if (!label_col.empty()) {
            src.column = label_col;
        } else if (labels.empty()) {
            src.column = "label";
            src.column_optional = labels_optional;
        }
        return src;
    }

    [[nodiscard]] Dataset load(const std::string &path) const { return load_matrix(path, orientation(), source()); }
    [[nodiscard]] Dataset load() const { return load(input); }
};

struct FitArgs {
    std::string prior = "empirical";
    std::string s0 = "median";
    std::string mk = "plus";

    void add(CLI::App *sub) {
        sub->add_option("--prior", prior, "Class priors: empirical|uniform")
            ->check(CLI::IsMember({"empirical", "uniform"}))
            ->capture_default_str();
        sub->add_option("--s0", s0, "Offset added to pooled sds: median|VALUE")->capture_default_str();
        sub->add_option("--mk", mk, "Class scale factor: plus (1/n_k + 1/n) | minus (1/n_k - 1/n)")
            ->check(CLI::IsMember({"plus", "minus"}))
            ->capture_default_str();
    }

    [[nodiscard]] FitOptions options() const {
        FitOptions opt;
        opt.priors = prior == "uniform" ? PriorMode::uniform : PriorMode::empirical;
        opt.scale = mk == "minus" ? ScaleFactor::minus : ScaleFactor::plus;
        if (s0 != "median") {
            opt.s0 = parse_cell(s0, 0, 0, "--s0");
        }
        return opt;
    }
};

struct SearchArgs {
    std::string method = "soft";
    int m = 30;
    int folds = 10;
    std::uint64_t seed = 0;
    long long big_gap = 2000;
    int max_iterations = 50;
    int threads = 0;

    void add(CLI::App *sub, bool with_method = true) {
        if (with_method) {
            sub->add_option("--method", method, "Thresholding: soft|hard|order")->capture_default_str();
        }
        sub->add_option("--m", m, "Initial grid size")->check(CLI::Range(2, 100000))->capture_default_str();
        sub->add_option("--folds", folds, "Requested fold count (capped by the smallest class)")
            ->check(CLI::Range(2, 1000000))
            ->capture_default_str();
        sub->add_option("--seed", seed, "Fold assignment seed")->capture_default_str();
        sub->add_option("--big-gap", big_gap, "Survivor drop that justifies the runner-up")
            ->check(CLI::NonNegativeNumber)
            ->capture_default_str();
        sub->add_option("--max-iterations", max_iterations, "Deep search iteration cap")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();
    }

    [[nodiscard]] DeepSearchOptions search() const {
        DeepSearchOptions opt;
        opt.m = m;
        opt.big_gap = big_gap;
        opt.max_iterations = max_iterations;
        return opt;
    }
};

std::string env_name(const std::string &long_name) {
    std::string env = "SC_";
    for (const char c : long_name) {
        env += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    return env;
}

/// key=value lines; '#' starts a comment; a leading "--" on keys is ignored.
std::map<std::string, std::string> read_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError(fmt::format("cannot open config file '{}'", path));
    }
    std::map<std::string, std::string> values;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ValidationError(fmt::format("{}:{}: expected key=value", path, line_no));
        }
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq));
        while (!key.empty() && key.front() == '-') {
            key.erase(0, 1);
        }
        values[key] = trim(line.substr(eq + 1));
    }
    return values;
}

/// Appends `--name=value` for options of `sub` absent from `args`, taking
/// environment variables first and the config file second.
std::vector<std::string> merge_defaults(const std::vector<std::string> &args, CLI::App *sub) {
    std::set<std::string> given;
    std::string config_path;
    for (std::size_t i = 2; i < args.size(); ++i) {
        const std::string &a = args[i];
        if (a.rfind("--", 0) != 0) {
            continue;
        }
        const auto eq = a.find('=');
        const std::string name = a.substr(2, eq == std::string::npos ? std::string::npos : eq - 2);
        given.insert(name);
        if (name == "config") {
            config_path = eq != std::string::npos ? a.substr(eq + 1) : (i + 1 < args.size() ? args[i + 1] : "");
        }
    }
    if (config_path.empty()) {
        if (const char *env = std::getenv("SC_CONFIG"); env != nullptr) {
            config_path = env;
        }
    }
    const auto config = config_path.empty() ? std::map<std::string, std::string>{} : read_config(config_path);

    std::vector<std::string> merged = args;
    for (const CLI::Option *opt : sub->get_options()) {
        const auto &names = opt->get_lnames();
        if (names.empty()) {
            continue;
        }
        const std::string &name = names.front();
        if (name == "help" || name == "config" || given.count(name) > 0) {
            continue;
        }
        if (const char *env = std::getenv(env_name(name).c_str()); env != nullptr && *env != '\0') {
            merged.push_back(fmt::format("--{}={}", name, env));
        } else if (const auto it = config.find(name); it != config.end()) {
            merged.push_back(fmt::format("--{}={}", name, it->second));
        }
    }
    return merged;
}

std::vector<int> parse_counts(const std::string &text, int classes, const char *what) {
    std::vector<int> counts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        counts.push_back(static_cast<int>(parse_cell(item, 0, 0, what)));
    }
    if (counts.size() == 1) {
        counts.assign(static_cast<std::size_t>(classes), counts.front());
    }
    return counts;
}

std::string point_flags(const RefineStep &step, Index pos) {
    std::vector<std::string_view> flags;
    if (pos == step.best) {
        flags.emplace_back("best");
    }
    if (step.runner_up && pos == *step.runner_up) {
        flags.emplace_back("runner-up");
    }
    if (pos == step.chosen) {
        flags.emplace_back(step.switched ? "chosen-switched" : "chosen");
    }
    if (step.interval && pos == step.interval->first) {
        flags.emplace_back("interval-lo");
    }
    if (step.interval && pos == step.interval->second) {
        flags.emplace_back("interval-hi");
    }
    if (flags.empty()) {
        return "-";
    }
    std::string joined;
    for (const auto f : flags) {
        joined += joined.empty() ? "" : "|";
        joined += f;
    }
    return joined;
}

void write_trace_points(const DeepSearchTrace &trace, std::ostream &out) {
    out << "iteration,position,rule,threshold,cv_errors,survivors,flags\n";
    for (std::size_t it = 0; it < trace.iterations.size(); ++it) {
        const auto &iter = trace.iterations[it];
        for (std::size_t pos = 0; pos < iter.points.size(); ++pos) {
            const auto &pt = iter.points[pos];
            out << fmt::format("{},{},{},{},{},{},{}\n", it + 1, pos + 1, to_string(pt.rule), pt.rule.param,
                               pt.error_count, pt.survivor_count, point_flags(iter.step, static_cast<Index>(pos)));
        }
    }
}

void write_trace_iterations(const DeepSearchTrace &trace, std::ostream &out) {
    out << "iteration,grid_size,best_rule,runner_up_rule,switched,chosen_rule,threshold,cv_errors,survivors,"
           "interval_lo,interval_hi,span,next_size,stop\n";
    for (std::size_t it = 0; it < trace.iterations.size(); ++it) {
        const auto &iter = trace.iterations[it];
        const auto &step = iter.step;
        const auto &chosen = iter.points[static_cast<std::size_t>(step.chosen)];
        const auto rule_at = [&](Index i) { return to_string(iter.points[static_cast<std::size_t>(i)].rule); };
        out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", it + 1, iter.points.size(), rule_at(step.best),
                           step.runner_up ? rule_at(*step.runner_up) : "-", step.switched ? "yes" : "no",
                           to_string(chosen.rule), chosen.rule.param, chosen.error_count, chosen.survivor_count,
                           step.interval ? rule_at(step.interval->first) : "-",
                           step.interval ? rule_at(step.interval->second) : "-", step.span, step.next_size,
                           to_string(step.stop));
    }
}

DeepSearchTrace grid_only_trace(const CrossValidator &cv, RuleKind kind, const DeepSearchOptions &opt) {
    const CvCurve curve = cv.evaluate(threshold_grid(cv.full_stats().t_stats, kind, opt.m));
    RefineStep step;
    step.best = select_smallest(curve.points);
    step.runner_up = select_runner_up(curve.points, step.best);
    step.chosen = step.best;
    step.stop = SearchStop::no_interval;
    DeepSearchTrace trace;
    trace.final_point = curve.points[static_cast<std::size_t>(step.best)];
    trace.iterations.push_back({curve.points, step});
    return trace;
}

int run(const std::vector<std::string> &raw_args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Nearest shrunken centroid classification with soft, hard and order thresholding"};
    app.name("nsc");
    app.require_subcommand(1);

    std::string config_file;
    auto add_config = [&](CLI::App *sub) {
        sub->add_option("--config", config_file, "key=value file supplying option defaults");
    };

    // synth ------------------------------------------------------------------
    auto *synth = app.add_subcommand("synth", "Generate a mean-shift Gaussian train/test pair");
    SynthSpec spec;
    std::string train_counts = "20";
    std::string test_counts = "20";
    std::string synth_out;
    synth->add_option("--p", spec.features, "Features")->capture_default_str();
    synth->add_option("--q", spec.informative, "Informative features")->capture_default_str();
    synth->add_option("--k", spec.classes, "Classes")->capture_default_str();
    synth->add_option("--shift", spec.shift, "Mean offset per class step")->capture_default_str();
    synth->add_option("--noise-sd", spec.noise_sd, "Gaussian noise sd")->capture_default_str();
    synth->add_option("--n-per-class", train_counts, "Training samples per class (N or N1,N2,...)")
        ->capture_default_str();
    synth->add_option("--n-test-per-class", test_counts, "Test samples per class (N or N1,N2,...)")
        ->capture_default_str();
    synth->add_option("--seed", spec.seed, "Generator seed")->capture_default_str();
    synth->add_option("--out", synth_out, "Output directory (train.csv, test.csv)")->required();
    add_config(synth);

    // train ------------------------------------------------------------------
    auto *train_cmd = app.add_subcommand("train", "Fit a model with a fixed thresholding rule");
    DataArgs train_data;
    FitArgs train_fit;
    std::string train_rule;
    std::string model_path;
    train_data.add(train_cmd);
    train_fit.add(train_cmd);
    train_cmd->add_option("--rule", train_rule, "soft:D | hard:D | order:N")->required();
    train_cmd->add_option("--model", model_path, "Model file to write")->required();
    add_config(train_cmd);

    // predict ----------------------------------------------------------------
    auto *predict_cmd = app.add_subcommand("predict", "Classify samples with a saved model");
    DataArgs predict_data;
    std::string predict_model;
    std::string predict_out;
    predict_data.add(predict_cmd);
    predict_cmd->add_option("--model", predict_model, "Model file")->required();
    predict_cmd->add_option("--out", predict_out, "Predictions file (default stdout)");
    add_config(predict_cmd);

    // cv ---------------------------------------------------------------------
    auto *cv_cmd = app.add_subcommand("cv", "Cross-validation error over the initial threshold grid");
    DataArgs cv_data;
    FitArgs cv_fit;
    SearchArgs cv_search;
    std::string cv_out;
    cv_data.add(cv_cmd);
    cv_fit.add(cv_cmd);
    cv_search.add(cv_cmd);
    cv_cmd->add_option("--out", cv_out, "Curve table (default stdout)");
    add_config(cv_cmd);

    // tune -------------------------------------------------------------------
    auto *tune_cmd = app.add_subcommand("tune", "Choose the threshold by grid search or deep search");
    DataArgs tune_data;
    FitArgs tune_fit;
    SearchArgs tune_search;
    bool deep = false;
    std::string trace_path;
    std::string tune_out;
    std::string tune_model;
    tune_data.add(tune_cmd);
    tune_fit.add(tune_cmd);
    tune_search.add(tune_cmd);
    tune_cmd->add_flag("--deep-search", deep, "Refine with the deep search (--deep-search=off disables)");
    tune_cmd->add_option("--trace", trace_path, "Per-iteration trace table");
    tune_cmd->add_option("--out", tune_out, "Per-point trace table (default stdout)");
    tune_cmd->add_option("--model", tune_model, "Also fit and save the final model");
    add_config(tune_cmd);

    // bench ------------------------------------------------------------------
    auto *bench_cmd = app.add_subcommand("bench", "Repeated tune/fit/test runs");
    DataArgs bench_data;
    FitArgs bench_fit;
    SearchArgs bench_search;
    std::string test_path;
    std::string methods_text = "sth";
    int runs = 100;
    std::string bench_out;
    std::string summary_out;
    bench_data.add(bench_cmd, true, "--train");
    bench_cmd->add_option("--test", test_path, "Test matrix (same layout as --train)")->required();
    bench_fit.add(bench_cmd);
    bench_search.add(bench_cmd, false);
    bench_cmd->add_option("--method", methods_text, "Comma list of sth,hth,oth,sth2,hth2,oth2")->capture_default_str();
    bench_cmd->add_option("--runs", runs, "Runs per method")->check(CLI::PositiveNumber)->capture_default_str();
    bench_cmd->add_option("--out", bench_out, "Run records (default stdout)");
    bench_cmd->add_option("--summary", summary_out, "Per-method mean/median/se table");
    add_config(bench_cmd);

    // srd --------------------------------------------------------------------
    auto *srd_cmd = app.add_subcommand("srd", "Sum of ranking differences across cases");
    std::string srd_input;
    std::string gold = "";
    bool lower_is_better = true;
    bool higher_is_better = false;
    std::string srd_out;
    std::string dist_out;
    std::string details_out;
    bool loo = false;
    srd_cmd->add_option("--input", srd_input, "Cases x methods table; first column names the cases")->required();
    srd_cmd->add_option("--gold", gold, "Golden standard: min|max|mean (default min, or max with --higher-is-better)")
        ->check(CLI::IsMember({"min", "max", "mean"}));
    srd_cmd->add_flag("--lower-is-better", lower_is_better, "Smaller values are better (default)");
    srd_cmd->add_flag("--higher-is-better", higher_is_better, "Larger values are better");
    srd_cmd->add_option("--out", srd_out, "Per-method results (default stdout)");
    srd_cmd->add_option("--dist-out", dist_out, "Null distribution table (default: stdout after the results)");
    srd_cmd->add_option("--details", details_out, "Per-case rank table");
    srd_cmd->add_flag("--loo", loo, "Append leave-one-case-out SRD spread per method");
    add_config(srd_cmd);

    std::vector<std::string> args = raw_args;
    if (args.size() >= 2) {
        for (CLI::App *sub : app.get_subcommands([](CLI::App *) { return true; })) {
            if (sub->get_name() == args[1]) {
                args = merge_defaults(args, sub);
            }
        }
    }
    std::vector<const char *> argv;
    argv.reserve(args.size());
    for (const auto &a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_invalid;
    }

    if (synth->parsed()) {
        spec.train_per_class = parse_counts(train_counts, spec.classes, "--n-per-class");
        spec.test_per_class = parse_counts(test_counts, spec.classes, "--n-test-per-class");
        const SynthData data = generate_synthetic(spec);
        std::error_code ec;
        fs::create_directories(synth_out, ec);
        if (ec) {
            throw IoError(fmt::format("cannot create directory '{}': {}", synth_out, ec.message()));
        }
        write_matrix(data.train, fs::path(synth_out) / "train.csv");
        write_matrix(data.test, fs::path(synth_out) / "test.csv");
        out << fmt::format("wrote {} training and {} test samples to {}\n", data.train.num_samples(),
                           data.test.num_samples(), synth_out);
    } else if (train_cmd->parsed()) {
        const Dataset ds = train_data.load();
        const ShrunkenModel model = train(ds, parse_rule(train_rule), train_fit.options());
        write_model(model, fs::path(model_path));
        out << fmt::format("rule {} keeps {} of {} features\n", to_string(model.rule), model.survivors.size(),
                           ds.num_features());
    } else if (predict_cmd->parsed()) {
        const ShrunkenModel model = read_model(fs::path(predict_model));
        const LabeledMatrix x =
            read_labeled_matrix(predict_data.input, predict_data.orientation(), predict_data.source(true));
        if (x.values.rows() != model.stats.num_features()) {
            throw ValidationError(fmt::format("input has {} features, model expects {}", x.values.rows(),
                                              model.stats.num_features()));
        }
        if (!model.feature_names.empty() && x.feature_names != model.feature_names) {
            throw ValidationError("input feature names differ from the model's");
        }
        const auto predicted = predict_columns(model, x.values);
        Sink sink(predict_out, out);
        auto &os = sink.get();
        const bool truth = !x.labels.empty();
        os << "sample,predicted" << (truth ? ",truth" : "") << '\n';
        Index wrong = 0;
        for (std::size_t j = 0; j < predicted.size(); ++j) {
            const std::string &name = model.class_names.empty()
                                          ? std::to_string(predicted[j] + 1)
                                          : model.class_names[static_cast<std::size_t>(predicted[j])];
            os << j + 1 << ',' << name;
            if (truth) {
                os << ',' << x.labels[j];
                wrong += name != x.labels[j] ? 1 : 0;
            }
            os << '\n';
        }
        sink.finish();
        if (truth) {
            err << fmt::format("test error {}% ({} of {})\n", 100.0 * wrong / static_cast<double>(predicted.size()),
                               wrong, predicted.size());
        }
    } else if (cv_cmd->parsed()) {
        const Dataset ds = cv_data.load();
        const int folds = fold_count(ds, cv_search.folds);
        const CrossValidator cv(ds, folds, cv_search.seed, {cv_fit.options(), cv_search.threads});
        const CvCurve curve =
            cv.evaluate(threshold_grid(cv.full_stats().t_stats, parse_rule_kind(cv_search.method), cv_search.m));
        Sink sink(cv_out, out);
        sink.get() << "position,rule,threshold,cv_errors,survivors\n";
        for (std::size_t i = 0; i < curve.points.size(); ++i) {
            const auto &pt = curve.points[i];
            sink.get() << fmt::format("{},{},{},{},{}\n", i + 1, to_string(pt.rule), pt.rule.param, pt.error_count,
                                      pt.survivor_count);
        }
        sink.finish();
    } else if (tune_cmd->parsed()) {
        const Dataset ds = tune_data.load();
        const int folds = fold_count(ds, tune_search.folds);
        const CrossValidator cv(ds, folds, tune_search.seed, {tune_fit.options(), tune_search.threads});
        const RuleKind kind = parse_rule_kind(tune_search.method);
        const DeepSearchTrace trace =
            deep ? deep_search(cv, kind, tune_search.search()) : grid_only_trace(cv, kind, tune_search.search());
        {
            Sink sink(tune_out, out);
            write_trace_points(trace, sink.get());
            sink.finish();
        }
        if (!trace_path.empty()) {
            Sink sink(trace_path, out);
            write_trace_iterations(trace, sink.get());
            sink.finish();
        }
        if (!tune_model.empty()) {
            ShrunkenModel model = shrink(cv.full_stats(), trace.final_rule());
            model.class_names = ds.class_names();
            model.feature_names = ds.feature_names();
            write_model(model, fs::path(tune_model));
        }
        err << fmt::format("chosen {} with {} CV errors and {} survivors ({} folds, {} iterations)\n",
                           to_string(trace.final_rule()), trace.final_point.error_count,
                           trace.final_point.survivor_count, folds, trace.iterations.size());
    } else if (bench_cmd->parsed()) {
        const Dataset train_ds = bench_data.load();
        const Dataset test_ds = bench_data.load(test_path);
        ExperimentOptions opt;
        opt.requested_folds = bench_search.folds;
        opt.search = bench_search.search();
        opt.fit = bench_fit.options();
        opt.threads = bench_search.threads;
        std::vector<Method> methods;
        std::stringstream ss(methods_text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            methods.push_back(parse_method(item));
        }
        std::vector<RunRecord> all;
        std::vector<std::pair<Method, Summary>> summaries;
        for (const Method method : methods) {
            auto records = run_experiment(train_ds, test_ds, method, runs, bench_search.seed, opt);
            if (runs >= 2) {
                summaries.emplace_back(method, aggregate(records));
            }
            all.insert(all.end(), records.begin(), records.end());
        }
        {
            Sink sink(bench_out, out);
            write_run_records(all, sink.get());
            sink.finish();
        }
        if (!summary_out.empty()) {
            Sink sink(summary_out, out);
            for (std::size_t i = 0; i < summaries.size(); ++i) {
                write_summary(summaries[i].first, summaries[i].second, sink.get(), i == 0);
            }
            sink.finish();
        }
    } else if (srd_cmd->parsed()) {
        const bool lower = !higher_is_better && lower_is_better;
        const PerformanceMatrix m = read_performance_matrix(srd_input, lower);
        const GoldStrategy strategy = gold.empty() ? (lower ? GoldStrategy::row_min : GoldStrategy::row_max)
                                                   : parse_gold_strategy(gold);
        const SrdResult res = srd(m, strategy);
        for (const auto &w : res.warnings) {
            err << "warning: " << w << '\n';
        }
        std::ostringstream methods_table;
        std::ostringstream dist_table;
        write_srd_report(res, methods_table, dist_table);
        {
            Sink sink(srd_out, out);
            sink.get() << methods_table.str();
            if (dist_out.empty()) {
                sink.get() << '\n' << dist_table.str();
            }
            if (loo) {
                const auto spread = srd_leave_one_out(m, strategy);
                sink.get() << "\nmethod,loo_min,loo_mean,loo_max\n";
                for (std::size_t j = 0; j < spread.size(); ++j) {
                    const auto &v = spread[j];
                    double mean = 0.0;
                    for (const Index s : v) {
                        mean += static_cast<double>(s);
                    }
                    mean /= static_cast<double>(v.size());
                    sink.get() << fmt::format("{},{},{},{}\n", res.method_names[j], *std::min_element(v.begin(), v.end()),
                                              mean, *std::max_element(v.begin(), v.end()));
                }
            }
            sink.finish();
        }
        if (!dist_out.empty()) {
            Sink sink(dist_out, out);
            sink.get() << dist_table.str();
            sink.finish();
        }
        if (!details_out.empty()) {
            Sink sink(details_out, out);
            write_srd_details(res, m, sink.get());
            sink.finish();
        }
    }
    return exit_ok;
}

}  // namespace

int cli_main(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    try {
        return run(args, out, err);
    } catch (const IoError &e) {
        err << "error: " << e.what() << '\n';
        return exit_io;
    } catch (const Error &e) {
        err << "error: " << e.what() << '\n';
        return exit_invalid;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return exit_invalid;
    }
}

}  // namespace nsc
