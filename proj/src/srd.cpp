#include "nsc/srd.hpp"

#include "nsc/error.hpp"
#include "nsc/table_io.hpp"

#include <boost/math/distributions/normal.hpp>
#include <fmt/core.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <ostream>

namespace nsc {

void validate(const PerformanceMatrix &m) {
    if (m.num_cases() < 2) {
        throw ValidationError(fmt::format("SRD needs at least 2 cases, got {}", m.num_cases()));
    }
    if (m.num_methods() < 1) {
        throw ValidationError("SRD needs at least one method column");
    }
    if (!m.values.allFinite()) {
        throw ValidationError("performance matrix has missing or non-finite entries");
    }
    if (!m.row_names.empty() && static_cast<Index>(m.row_names.size()) != m.num_cases()) {
        throw ValidationError("case name count does not match the matrix");
    }
    if (!m.col_names.empty() && static_cast<Index>(m.col_names.size()) != m.num_methods()) {
        throw ValidationError("method name count does not match the matrix");
    }
}

PerformanceMatrix read_performance_matrix(const std::filesystem::path &path, bool lower_is_better) {
    const TextTable table = read_text_table(path);
    if (table.header.size() < 2) {
        throw ValidationError(fmt::format("{}: need a case-name column and at least one method", path.string()));
    }
    PerformanceMatrix m;
    m.lower_is_better = lower_is_better;
    m.col_names.assign(table.header.begin() + 1, table.header.end());
    const auto r = static_cast<Index>(table.rows.size());
    const auto c = static_cast<Index>(m.col_names.size());
    m.values.resize(r, c);
    for (Index i = 0; i < r; ++i) {
        const auto &row = table.rows[static_cast<std::size_t>(i)];
        m.row_names.push_back(row.front());
        for (Index j = 0; j < c; ++j) {
            m.values(i, j) = parse_cell(row[static_cast<std::size_t>(j) + 1], table.line_numbers[static_cast<std::size_t>(i)],
                                        static_cast<std::size_t>(j) + 2, m.col_names[static_cast<std::size_t>(j)]);
        }
    }
    validate(m);
    return m;
}

GoldStrategy parse_gold_strategy(std::string_view raw) {
    std::string text(raw);
    std::transform(text.begin(), text.end(), text.begin(), [](unsigned char c) { return std::tolower(c); });
    if (text == "min" || text == "row-min") {
        return GoldStrategy::row_min;
    }
    if (text == "max" || text == "row-max") {
        return GoldStrategy::row_max;
    }
    if (text == "mean" || text == "row-mean") {
        return GoldStrategy::row_mean;
    }
    throw ArgumentError(fmt::format("unknown golden standard '{}' (min|max|mean)", text));
}

std::string_view to_string(GoldStrategy g) noexcept {
    switch (g) {
    case GoldStrategy::row_min:
        return "min";
    case GoldStrategy::row_max:
        return "max";
    case GoldStrategy::row_mean:
        return "mean";
    }
    return "?";
}

std::string_view to_string(NullMode mode) noexcept { return mode == NullMode::exact ? "exact" : "normal"; }

Eigen::VectorXd golden_standard(const PerformanceMatrix &m, GoldStrategy strategy) {
    switch (strategy) {
    case GoldStrategy::row_min:
        return m.values.rowwise().minCoeff();
    case GoldStrategy::row_max:
        return m.values.rowwise().maxCoeff();
    case GoldStrategy::row_mean:
        return m.values.rowwise().mean();
    }
    return {};
}

Index max_srd(Index r) { return r % 2 == 0 ? r * r / 2 : (r * r - 1) / 2; }

std::vector<std::uint64_t> displacement_counts(int r) {
    if (r < 1 || r > 20) {
        throw ArgumentError(fmt::format("exact displacement counts need 1 <= r <= 20, got {}", r));
    }
    // Scan positions left to right. `open` unmatched positions and as many
    // unmatched values are carried; each carried pair adds 2 to the total
    // displacement per step, so state = (open, total).
    const auto top = static_cast<std::size_t>(max_srd(r));
    using Row = std::vector<std::uint64_t>;
    std::vector<Row> state(1, Row(top + 1, 0));
    state[0][0] = 1;
    for (int step = 0; step < r; ++step) {
        std::vector<Row> next(state.size() + 1, Row(top + 1, 0));
        for (std::size_t open = 0; open < state.size(); ++open) {
            const std::uint64_t j = open;
            for (std::size_t total = 0; total <= top; ++total) {
                const std::uint64_t count = state[open][total];
                if (count == 0) {
                    continue;
                }
                auto add = [&](std::size_t to, std::uint64_t ways) {
                    const std::size_t cost = total + 2 * to;
                    if (cost <= top && ways != 0) {
                        next[to][cost] += count * ways;
                    }
                };
                // new position and value both matched (to each other or to carried ones)
                add(open, 1 + 2 * j);
                add(open + 1, 1);
                if (open > 0) {
                    add(open - 1, j * j);
                }
            }
        }
        while (next.size() > 1 && std::all_of(next.back().begin(), next.back().end(), [](auto c) { return c == 0; })) {
            next.pop_back();
        }
        state = std::move(next);
    }
    return state[0];
}

DisplacementMoments displacement_moments(Index r) {
    if (r < 2) {
        throw ArgumentError("displacement moments need r >= 2");
    }
    // A_i = Σ_a |a - i|, B_i = Σ_a (a - i)². |π(i) - i| has mean A_i/r and
    // second moment B_i/r; for i != j the joint draw is uniform over a != b.
    long double sum_a = 0;
    long double sum_a2 = 0;
    long double sum_b = 0;
    for (Index i = 0; i < r; ++i) {
        long double a = 0;
        long double b = 0;
        for (Index v = 0; v < r; ++v) {
            const auto d = static_cast<long double>(v > i ? v - i : i - v);
            a += d;
            b += d * d;
        }
        sum_a += a;
        sum_a2 += a * a;
        sum_b += b;
    }
    const auto rr = static_cast<long double>(r);
    const long double mean = sum_a / rr;
    const long double cross = (sum_a * sum_a - 2 * sum_a2 + sum_b) / (rr * (rr - 1));
    const long double second = sum_b / rr + cross;
    return {static_cast<double>(mean), static_cast<double>(second - mean * mean)};
}

double NullDistribution::cdf(double v) const {
    if (mode == NullMode::normal) {
        return boost::math::cdf(boost::math::normal(mean, sd), v);
    }
    double total = 0.0;
    for (std::size_t s = 0; s < probability.size() && static_cast<double>(s) <= v; ++s) {
        total += probability[s];
    }
    return total;
}

double NullDistribution::quantile(double q) const {
    if (!(q > 0.0 && q < 1.0)) {
        throw ArgumentError(fmt::format("quantile level {} outside (0, 1)", q));
    }
    if (mode == NullMode::normal) {
        return boost::math::quantile(boost::math::normal(mean, sd), q);
    }
    double total = 0.0;
    for (std::size_t s = 0; s < probability.size(); ++s) {
        total += probability[s];
        // Guard against the final partial sum landing a hair under q = 1 - eps.
        if (total >= q - 1e-15) {
            return static_cast<double>(s);
        }
    }
    return static_cast<double>(probability.size() - 1);
}

NullDistribution exact_null_distribution(int r) {
    if (r < 2 || r > 13) {
        throw ArgumentError(fmt::format("exact SRD distribution covers 2..13 cases, got {}", r));
    }
    const auto counts = displacement_counts(r);
    std::uint64_t total = 0;
    for (const auto c : counts) {
        total += c;
    }
    NullDistribution dist;
    dist.num_cases = r;
    dist.mode = NullMode::exact;
    dist.probability.reserve(counts.size());
    long double mean = 0;
    long double second = 0;
    for (std::size_t v = 0; v < counts.size(); ++v) {
        const long double p = static_cast<long double>(counts[v]) / static_cast<long double>(total);
        dist.probability.push_back(static_cast<double>(p));
        mean += p * v;
        second += p * v * v;
    }
    dist.mean = static_cast<double>(mean);
    dist.sd = static_cast<double>(std::sqrt(second - mean * mean));
    return dist;
}

NullDistribution normal_approx_null(Index r) {
    if (r < 14) {
        throw ArgumentError(fmt::format("normal SRD approximation is for r >= 14, got {}", r));
    }
    const auto moments = displacement_moments(r);
    NullDistribution dist;
    dist.num_cases = r;
    dist.mode = NullMode::normal;
    dist.mean = moments.mean;
    dist.sd = std::sqrt(moments.variance);
    const boost::math::normal normal(dist.mean, dist.sd);
    const Index top = max_srd(r);
    dist.probability.assign(static_cast<std::size_t>(top + 1), 0.0);
    for (Index v = 0; v <= top; v += 2) {
        const double lo = v == 0 ? 0.0 : boost::math::cdf(normal, static_cast<double>(v) - 1.0);
        const double hi = v == top ? 1.0 : boost::math::cdf(normal, static_cast<double>(v) + 1.0);
        dist.probability[static_cast<std::size_t>(v)] = hi - lo;
    }
    return dist;
}

NullDistribution null_distribution(Index r) {
    return r <= 13 ? exact_null_distribution(static_cast<int>(r)) : normal_approx_null(r);
}

bool SrdResult::significant(Index method) const { return scale(srd_raw(method)) < scale(percentiles.xx1); }

std::vector<Index> SrdResult::case_order() const {
    std::vector<Index> order(static_cast<std::size_t>(gold_rank.size()));
    for (Index i = 0; i < gold_rank.size(); ++i) {
        order[static_cast<std::size_t>(gold_rank(i) - 1)] = i;
    }
    return order;
}

namespace {

std::string method_name(const PerformanceMatrix &m, Index j) {
    return m.col_names.empty() ? fmt::format("method{}", j + 1) : m.col_names[static_cast<std::size_t>(j)];
}

Eigen::VectorXi srd_sums(const PerformanceMatrix &m, GoldStrategy strategy) {
    const bool ascending = m.lower_is_better;
    const Eigen::VectorXi gold = rank_vector(golden_standard(m, strategy), ascending);
    Eigen::VectorXi sums(m.num_methods());
    for (Index j = 0; j < m.num_methods(); ++j) {
        sums(j) = (rank_vector(m.values.col(j), ascending) - gold).cwiseAbs().sum();
    }
    return sums;
}

}  // namespace

SrdResult srd(const PerformanceMatrix &m, GoldStrategy strategy) {
    validate(m);
    const Index r = m.num_cases();
    const Index c = m.num_methods();
    const bool ascending = m.lower_is_better;

    SrdResult res;
    res.golden = golden_standard(m, strategy);
    res.gold_rank = rank_vector(res.golden, ascending);
    res.method_ranks.resize(r, c);
    res.srd_raw.resize(c);
    res.srd_scaled.resize(c);
    res.max_srd = max_srd(r);
    for (Index j = 0; j < c; ++j) {
        res.method_ranks.col(j) = rank_vector(m.values.col(j), ascending);
        res.srd_raw(j) = (res.method_ranks.col(j) - res.gold_rank).cwiseAbs().sum();
        res.srd_scaled(j) = res.scale(res.srd_raw(j));
        res.method_names.push_back(method_name(m, j));
        if (has_ties(m.values.col(j))) {
            res.warnings.push_back(fmt::format(
                "column '{}' has tied values; ranked in row order, the null distribution assumes distinct ranks",
                res.method_names.back()));
        }
    }
    if (has_ties(res.golden)) {
        res.warnings.push_back("golden standard has tied values; ranked in row order");
    }
    for (Index i = 0; i < r; ++i) {
        res.case_names.push_back(m.row_names.empty() ? fmt::format("case{}", i + 1)
                                                     : m.row_names[static_cast<std::size_t>(i)]);
    }
    res.null = null_distribution(r);
    res.percentiles = {res.null.quantile(0.05), res.null.quantile(0.50), res.null.quantile(0.95)};
    return res;
}

std::vector<std::vector<Index>> srd_leave_one_out(const PerformanceMatrix &m, GoldStrategy strategy) {
    validate(m);
    const Index r = m.num_cases();
    if (r < 3) {
        throw ValidationError("leave-one-out SRD needs at least 3 cases");
    }
    std::vector<std::vector<Index>> out(static_cast<std::size_t>(m.num_methods()));
    for (Index drop = 0; drop < r; ++drop) {
        std::vector<Index> keep;
        for (Index i = 0; i < r; ++i) {
            if (i != drop) {
                keep.push_back(i);
            }
        }
        PerformanceMatrix sub;
        sub.values = m.values(keep, Eigen::all);
        sub.lower_is_better = m.lower_is_better;
        const Eigen::VectorXi sums = srd_sums(sub, strategy);
        for (Index j = 0; j < m.num_methods(); ++j) {
            out[static_cast<std::size_t>(j)].push_back(sums(j));
        }
    }
    return out;
}

void write_srd_report(const SrdResult &res, std::ostream &methods, std::ostream &distribution, char delim) {
    const auto &pc = res.percentiles;
    methods << fmt::format("method{0}srd{0}srd_scaled{0}xx1_scaled{0}med_scaled{0}xx19_scaled{0}mode{0}verdict\n", delim);
    for (Index j = 0; j < res.srd_raw.size(); ++j) {
        methods << fmt::format("{1}{0}{2}{0}{3}{0}{4}{0}{5}{0}{6}{0}{7}{0}{8}\n", delim,
                               res.method_names[static_cast<std::size_t>(j)], res.srd_raw(j), res.srd_scaled(j),
                               res.scale(pc.xx1), res.scale(pc.med), res.scale(pc.xx19), to_string(res.null.mode),
                               res.significant(j) ? "significant" : "not-significant");
    }
    distribution << fmt::format("srd{0}srd_scaled{0}probability{0}cumulative\n", delim);
    double cumulative = 0.0;
    for (std::size_t v = 0; v < res.null.probability.size(); v += 2) {
        cumulative += res.null.probability[v];
        distribution << fmt::format("{1}{0}{2}{0}{3}{0}{4}\n", delim, v, res.scale(static_cast<double>(v)),
                                    res.null.probability[v], cumulative);
    }
}

void write_srd_details(const SrdResult &res, const PerformanceMatrix &m, std::ostream &out, char delim) {
    out << "case" << delim << "gold" << delim << "gold_rank";
    for (const auto &name : res.method_names) {
        out << delim << name << delim << name << "_rank" << delim << name << "_diff";
    }
    out << '\n';
    for (const Index i : res.case_order()) {
        out << res.case_names[static_cast<std::size_t>(i)] << delim << fmt::format("{}", res.golden(i)) << delim
            << res.gold_rank(i);
        for (Index j = 0; j < m.num_methods(); ++j) {
            out << delim << fmt::format("{}", m.values(i, j)) << delim << res.method_ranks(i, j) << delim
                << std::abs(res.method_ranks(i, j) - res.gold_rank(i));
        }
        out << '\n';
    }
    out << "sum" << delim << delim;
    for (Index j = 0; j < m.num_methods(); ++j) {
        out << delim << delim << delim << res.srd_raw(j);
    }
    out << '\n';
}

}  // namespace nsc
