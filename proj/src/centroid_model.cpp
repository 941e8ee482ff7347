#include "nsc/centroid_model.hpp"

#include "nsc/error.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace nsc {

namespace {

double median_of(Eigen::VectorXd v) {
    std::sort(v.begin(), v.end());
    const Index n = v.size();
    return n % 2 == 1 ? v(n / 2) : 0.5 * (v(n / 2 - 1) + v(n / 2));
}

}  // namespace

Eigen::MatrixXd CentroidStats::centroids_from(const Eigen::Ref<const Eigen::MatrixXd> &t) const {
    const Eigen::VectorXd s = scale();
    Eigen::MatrixXd out(t.rows(), t.cols());
    for (Index k = 0; k < t.cols(); ++k) {
        out.col(k) = overall_centroid.array() + m(k) * s.array() * t.col(k).array();
    }
    return out;
}

CentroidStats fit_statistics(const Dataset &ds, const FitOptions &options) {
    const Index p = ds.num_features();
    const Index n = ds.num_samples();
    const int K = ds.num_classes();
    if (n <= K) {
        throw DegenerateError(fmt::format("{} samples for {} classes leaves no degrees of freedom", n, K));
    }
    const Eigen::MatrixXd &x = ds.values();

    CentroidStats st;
    st.overall_centroid = x.rowwise().mean();
    st.class_centroids.resize(p, K);
    st.class_sizes.resize(K);
    Eigen::VectorXd within = Eigen::VectorXd::Zero(p);
    for (int k = 0; k < K; ++k) {
        const auto &members = ds.class_index()[k];
        const auto block = x(Eigen::all, members);
        st.class_centroids.col(k) = block.rowwise().mean();
        within += (block.colwise() - st.class_centroids.col(k)).rowwise().squaredNorm();
        st.class_sizes(k) = static_cast<int>(members.size());
    }
    st.pooled_sd = (within / static_cast<double>(n - K)).cwiseSqrt();

    if (options.s0) {
        if (!std::isfinite(*options.s0) || *options.s0 < 0.0) {
            throw ArgumentError(fmt::format("s0 must be a non-negative number, got {}", *options.s0));
        }
        st.s0 = *options.s0;
    } else {
        st.s0 = median_of(st.pooled_sd);
    }
    const Eigen::VectorXd s = st.scale();
    for (Index i = 0; i < p; ++i) {
        if (!(s(i) > 0.0)) {
            throw DegenerateError(fmt::format(
                "feature {} has zero pooled sd and s0 = 0; the statistics are undefined", i + 1));
        }
    }

    const double inv_n = 1.0 / static_cast<double>(n);
    st.m.resize(K);
    st.priors.resize(K);
    for (int k = 0; k < K; ++k) {
        const double inv_nk = 1.0 / st.class_sizes(k);
        st.m(k) = std::sqrt(options.scale == ScaleFactor::plus ? inv_nk + inv_n : inv_nk - inv_n);
        st.priors(k) = options.priors == PriorMode::empirical ? st.class_sizes(k) * inv_n : 1.0 / K;
    }

    st.t_stats.resize(p, K);
    for (int k = 0; k < K; ++k) {
        st.t_stats.col(k) =
            (st.class_centroids.col(k) - st.overall_centroid).array() / (st.m(k) * s.array());
    }
    return st;
}

ShrunkenModel shrink(const CentroidStats &stats, const ThresholdRule &rule) {
    ShrunkenModel model;
    model.stats = stats;
    model.rule = rule;
    model.shrunken_t = apply_rule(rule, stats.t_stats);
    model.shrunken_centroids = stats.centroids_from(model.shrunken_t);
    model.survivors = surviving_rows(model.shrunken_t);
    return model;
}

ShrunkenModel train(const Dataset &ds, const ThresholdRule &rule, const FitOptions &options) {
    ShrunkenModel model = shrink(fit_statistics(ds, options), rule);
    model.class_names = ds.class_names();
    model.feature_names = ds.feature_names();
    return model;
}

Eigen::VectorXd discriminant_scores(const ShrunkenModel &model, const Eigen::Ref<const Eigen::VectorXd> &x) {
    const CentroidStats &st = model.stats;
    if (x.size() != st.num_features()) {
        throw ArgumentError(fmt::format("sample has {} features, model expects {}", x.size(), st.num_features()));
    }
    const Eigen::ArrayXd weight = st.scale().array().square().inverse();
    Eigen::VectorXd scores(st.num_classes());
    for (int k = 0; k < st.num_classes(); ++k) {
        scores(k) = ((x - model.shrunken_centroids.col(k)).array().square() * weight).sum() - 2.0 * std::log(st.priors(k));
    }
    return scores;
}

Eigen::VectorXd survivor_scores(const ShrunkenModel &model, const Eigen::Ref<const Eigen::VectorXd> &x) {
    const CentroidStats &st = model.stats;
    if (x.size() != st.num_features()) {
        throw ArgumentError(fmt::format("sample has {} features, model expects {}", x.size(), st.num_features()));
    }
    const auto &keep = model.survivors;
    const Eigen::ArrayXd weight = st.scale()(keep).array().square().inverse();
    Eigen::VectorXd scores(st.num_classes());
    for (int k = 0; k < st.num_classes(); ++k) {
        const Eigen::VectorXd diff = x(keep) - model.shrunken_centroids.col(k)(keep);
        scores(k) = (diff.array().square() * weight).sum() - 2.0 * std::log(st.priors(k));
    }
    return scores;
}

std::vector<int> predict_columns(const ShrunkenModel &model, const Eigen::Ref<const Eigen::MatrixXd> &x) {
    const CentroidStats &st = model.stats;
    if (x.rows() != st.num_features()) {
        throw ArgumentError(fmt::format("samples have {} features, model expects {}", x.rows(), st.num_features()));
    }
    const int K = st.num_classes();
    const auto &keep = model.survivors;
    // Only survivors separate the classes; the remaining terms are class-constant.
    const Eigen::ArrayXd weight = st.scale()(keep).array().square().inverse();
    const Eigen::MatrixXd centroids = model.shrunken_centroids(keep, Eigen::all);
    const Eigen::MatrixXd xs = x(keep, Eigen::all);
    std::vector<int> out(static_cast<std::size_t>(x.cols()));
    Eigen::VectorXd scores(K);
    for (Index j = 0; j < x.cols(); ++j) {
        for (int k = 0; k < K; ++k) {
            scores(k) = ((xs.col(j) - centroids.col(k)).array().square() * weight).sum() - 2.0 * std::log(st.priors(k));
        }
        int best = 0;
        for (int k = 1; k < K; ++k) {
            if (scores(k) < scores(best)) {
                best = k;
            }
        }
        out[static_cast<std::size_t>(j)] = best;
    }
    return out;
}

std::vector<int> predict(const ShrunkenModel &model, const Eigen::Ref<const Eigen::MatrixXd> &x) {
    return predict_columns(model, x.transpose());
}

// ---------------------------------------------------------------------------
// model file

namespace {

constexpr std::string_view model_magic = "nsc-model";
constexpr int model_version = 1;

template <typename Derived>
void write_row(std::ostream &out, std::string_view key, const Eigen::DenseBase<Derived> &v) {
    out << key;
    for (Index i = 0; i < v.size(); ++i) {
        out << ' ' << fmt::format("{}", v(i));
    }
    out << '\n';
}

void write_names(std::ostream &out, std::string_view key, const std::vector<std::string> &names) {
    out << key << ' ' << names.size();
    for (const auto &name : names) {
        out << '\t' << name;
    }
    out << '\n';
}

class ModelReader {
  public:
    explicit ModelReader(std::istream &in) : in_(in) {}

    std::string line() {
        std::string text;
        if (!std::getline(in_, text)) {
            throw ParseError(fmt::format("model file: unexpected end of input after line {}", line_no_));
        }
        ++line_no_;
        if (!text.empty() && text.back() == '\r') {
            text.pop_back();
        }
        return text;
    }

    /// Reads `key v1 v2 ...` and returns the numeric tail.
    std::vector<double> numbers(std::string_view key, Index expected) {
        const std::string text = line();
        std::istringstream ss(text);
        std::string word;
        ss >> word;
        if (word != key) {
            throw ParseError(fmt::format("model file line {}: expected '{}', found '{}'", line_no_, key, word));
        }
        std::vector<double> values;
        while (ss >> word) {
            values.push_back(to_double(word));
        }
        if (expected >= 0 && static_cast<Index>(values.size()) != expected) {
            throw ParseError(fmt::format("model file line {}: '{}' needs {} values, found {}", line_no_, key, expected,
                                         values.size()));
        }
        return values;
    }

    std::vector<std::string> names(std::string_view key) {
        const std::string text = line();
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const auto tab = text.find('\t', start);
            fields.push_back(text.substr(start, tab == std::string::npos ? std::string::npos : tab - start));
            if (tab == std::string::npos) {
                break;
            }
            start = tab + 1;
        }
        std::istringstream head(fields.front());
        std::string word;
        std::size_t count = 0;
        head >> word >> count;
        if (word != key || count != fields.size() - 1) {
            throw ParseError(fmt::format("model file line {}: malformed '{}' record", line_no_, key));
        }
        return {fields.begin() + 1, fields.end()};
    }

    Eigen::MatrixXd matrix(std::string_view key, Index rows, Index cols) {
        numbers(key, 0);
        Eigen::MatrixXd out(rows, cols);
        for (Index i = 0; i < rows; ++i) {
            const auto row = numbers("row", cols);
            for (Index k = 0; k < cols; ++k) {
                out(i, k) = row[static_cast<std::size_t>(k)];
            }
        }
        return out;
    }

    double to_double(std::string_view word) const {
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
        if (ec != std::errc() || ptr != word.data() + word.size()) {
            throw ParseError(fmt::format("model file line {}: bad number '{}'", line_no_, word));
        }
        return value;
    }

    [[nodiscard]] std::size_t line_no() const noexcept { return line_no_; }

  private:
    std::istream &in_;
    std::size_t line_no_ = 0;
};

Eigen::VectorXd to_vector(const std::vector<double> &v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Index>(v.size()));
}

}  // namespace

void write_model(const ShrunkenModel &model, std::ostream &out) {
    const CentroidStats &st = model.stats;
    const Index p = st.num_features();
    const int K = st.num_classes();
    out << model_magic << ' ' << model_version << '\n';
    out << "p " << p << " K " << K << " rule " << to_string(model.rule) << '\n';
    write_names(out, "classes", model.class_names);
    write_names(out, "features", model.feature_names);
    write_row(out, "class_sizes", st.class_sizes);
    write_row(out, "priors", st.priors);
    write_row(out, "m", st.m);
    out << "s0 " << fmt::format("{}", st.s0) << '\n';
    write_row(out, "overall_centroid", st.overall_centroid);
    write_row(out, "pooled_sd", st.pooled_sd);
    for (const auto &[key, mat] : {std::pair<std::string_view, const Eigen::MatrixXd *>{"class_centroids", &st.class_centroids},
                                   {"t_stats", &st.t_stats}}) {
        out << key << '\n';
        for (Index i = 0; i < p; ++i) {
            write_row(out, "row", mat->row(i));
        }
    }
}

void write_model(const ShrunkenModel &model, const std::filesystem::path &path) {
    std::ofstream out(path);
    if (!out) {
        throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
    }
    write_model(model, out);
    if (!out) {
        throw IoError(fmt::format("failed writing '{}'", path.string()));
    }
}

ShrunkenModel read_model(std::istream &in) {
    ModelReader reader(in);
    {
        std::istringstream head(reader.line());
        std::string magic;
        int version = 0;
        head >> magic >> version;
        if (magic != model_magic) {
            throw ParseError("not a model file (missing 'nsc-model' header)");
        }
        if (version != model_version) {
            throw ParseError(fmt::format("unsupported model file version {}", version));
        }
    }
    Index p = 0;
    Index K = 0;
    ThresholdRule rule;
    {
        std::istringstream dims(reader.line());
        std::string kp, kk, kr, rule_text;
        dims >> kp >> p >> kk >> K >> kr >> rule_text;
        if (kp != "p" || kk != "K" || kr != "rule" || p < 1 || K < 2) {
            throw ParseError("model file line 2: expected 'p <int> K <int> rule <rule>'");
        }
        rule = parse_rule(rule_text);
    }
    ShrunkenModel model;
    model.class_names = reader.names("classes");
    model.feature_names = reader.names("features");
    CentroidStats st;
    const auto sizes = reader.numbers("class_sizes", K);
    st.class_sizes.resize(K);
    for (Index k = 0; k < K; ++k) {
        st.class_sizes(k) = static_cast<int>(sizes[static_cast<std::size_t>(k)]);
    }
    st.priors = to_vector(reader.numbers("priors", K));
    st.m = to_vector(reader.numbers("m", K));
    st.s0 = reader.numbers("s0", 1).front();
    st.overall_centroid = to_vector(reader.numbers("overall_centroid", p));
    st.pooled_sd = to_vector(reader.numbers("pooled_sd", p));
    st.class_centroids = reader.matrix("class_centroids", p, K);
    st.t_stats = reader.matrix("t_stats", p, K);
    if (!model.class_names.empty() && static_cast<Index>(model.class_names.size()) != K) {
        throw ParseError("model file: class name count does not match K");
    }
    if (!model.feature_names.empty() && static_cast<Index>(model.feature_names.size()) != p) {
        throw ParseError("model file: feature name count does not match p");
    }

    ShrunkenModel shrunk = shrink(st, rule);
    shrunk.class_names = std::move(model.class_names);
    shrunk.feature_names = std::move(model.feature_names);
    return shrunk;
}

ShrunkenModel read_model(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError(fmt::format("cannot open model file '{}'", path.string()));
    }
    return read_model(in);
}

}  // namespace nsc
