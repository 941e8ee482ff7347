#include "nsc/thresholding.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

namespace nsc {

std::string_view to_string(RuleKind kind) noexcept {
    switch (kind) {
    case RuleKind::soft:
        return "soft";
    case RuleKind::hard:
        return "hard";
    case RuleKind::order:
        return "order";
    }
    return "?";
}

RuleKind parse_rule_kind(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
    if (lower == "soft") {
        return RuleKind::soft;
    }
    if (lower == "hard") {
        return RuleKind::hard;
    }
    if (lower == "order") {
        return RuleKind::order;
    }
    throw ArgumentError(fmt::format("unknown thresholding kind '{}' (soft|hard|order)", text));
}

std::string to_string(const ThresholdRule &rule) {
    if (rule.kind == RuleKind::order) {
        return fmt::format("order:{}", rule.keep_count());
    }
    return fmt::format("{}:{}", to_string(rule.kind), rule.param);
}

ThresholdRule parse_rule(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw ArgumentError(fmt::format("rule '{}' is not of the form kind:parameter", text));
    }
    const RuleKind kind = parse_rule_kind(text.substr(0, colon));
    const auto value = text.substr(colon + 1);
    double param = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), param);
    if (value.empty() || ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(param) ||
        param < 0.0) {
        throw ArgumentError(fmt::format("rule '{}' has an invalid parameter", text));
    }
    if (kind == RuleKind::order && param != std::floor(param)) {
        throw ArgumentError(fmt::format("order rule '{}' needs an integer count", text));
    }
    return {kind, param};
}

void validate_rule(const ThresholdRule &rule, Index num_statistics) {
    if (!std::isfinite(rule.param) || rule.param < 0.0) {
        throw ArgumentError(fmt::format("rule {} has a negative or non-finite parameter", to_string(rule)));
    }
    if (rule.kind == RuleKind::order) {
        if (rule.param != std::floor(rule.param) || rule.keep_count() > num_statistics) {
            throw ArgumentError(
                fmt::format("order rule keeps {} of {} statistics", rule.param, num_statistics));
        }
    }
}

Eigen::MatrixXd apply_rule(const ThresholdRule &rule, const Eigen::Ref<const Eigen::MatrixXd> &d) {
    validate_rule(rule, d.size());
    switch (rule.kind) {
    case RuleKind::soft:
        return d.unaryExpr([delta = rule.param](double v) { return soft_threshold(v, delta); });
    case RuleKind::hard:
        return d.unaryExpr([delta = rule.param](double v) { return hard_threshold(v, delta); });
    case RuleKind::order:
        return order_threshold(d, rule.keep_count());
    }
    return d;
}

std::vector<Index> surviving_rows(const Eigen::Ref<const Eigen::MatrixXd> &d) {
    std::vector<Index> rows;
    for (Index i = 0; i < d.rows(); ++i) {
        if ((d.row(i).array() != 0.0).any()) {
            rows.push_back(i);
        }
    }
    return rows;
}

std::vector<ThresholdRule> threshold_grid(const Eigen::Ref<const Eigen::MatrixXd> &t_stats, RuleKind kind, int m) {
    if (m < 2) {
        throw ArgumentError(fmt::format("threshold grid needs at least 2 points, got {}", m));
    }
    std::vector<ThresholdRule> grid;
    grid.reserve(static_cast<std::size_t>(m));
    if (kind == RuleKind::order) {
        const Index total = t_stats.size();
        if (total + 1 <= m) {
            for (Index keep = total; keep >= 0; --keep) {
                grid.push_back(ThresholdRule::order(keep));
            }
            return grid;
        }
        for (int j = 0; j < m; ++j) {
            const auto keep = static_cast<Index>(std::llround(static_cast<double>(total) * (m - 1 - j) / (m - 1)));
            grid.push_back(ThresholdRule::order(keep));
        }
        return grid;
    }
    const double top = t_stats.size() == 0 ? 0.0 : t_stats.cwiseAbs().maxCoeff();
    for (int j = 0; j < m; ++j) {
        const double delta = j == m - 1 ? top : top * j / (m - 1);
        grid.push_back({kind, delta});
    }
    return grid;
}

ReferenceThresholds reference_thresholds(Index n, double c, double d_exp) {
    if (n < 2) {
        throw ArgumentError("reference thresholds need n >= 2");
    }
    if (!(c > 0.0) || !(d_exp > 0.0)) {
        throw ArgumentError("reference thresholds need positive c and d");
    }
    const double log_n = std::log(static_cast<double>(n));
    const double a_n = c * std::pow(log_n, -d_exp);
    const double scaled = static_cast<double>(n) * a_n;
    if (!(scaled > 1.0)) {
        throw ArgumentError(fmt::format("n * a_n = {} must exceed 1", scaled));
    }
    return {std::sqrt(2.0 * log_n), std::sqrt(2.0 * std::log(scaled)), std::pow(log_n, 1.5)};
}

}  // namespace nsc
