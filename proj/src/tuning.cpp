#include "nsc/tuning.hpp"

#include "nsc/error.hpp"
#include "nsc/parallel.hpp"

#include <fmt/core.h>

#include <algorithm>
#include <cmath>

namespace nsc {

CrossValidator::CrossValidator(const Dataset &ds, int num_folds, std::uint64_t seed, CvOptions options)
    : seed_(seed), options_(options) {
    if (num_folds < 2) {
        throw ArgumentError(fmt::format(
            "cross-validation needs at least 2 folds, got {} (is some class a single sample?)", num_folds));
    }
    plan_ = stratified_folds(ds, num_folds, seed);
    full_stats_ = fit_statistics(ds, options_.fit);
    folds_.resize(static_cast<std::size_t>(num_folds));
    for (int f = 0; f < num_folds; ++f) {
        Fold &fold = folds_[static_cast<std::size_t>(f)];
        const auto held_in = plan_.held_in(f, ds.num_samples());
        try {
            fold.stats = fit_statistics(ds.subset(held_in), options_.fit);
        } catch (const DegenerateError &e) {
            throw DegenerateError(fmt::format("fold {}: {}", f + 1, e.what()));
        }
        const auto &out = plan_.folds[static_cast<std::size_t>(f)];
        fold.held_out = ds.values()(Eigen::all, out);
        fold.truth.reserve(out.size());
        for (const Index j : out) {
            fold.truth.push_back(ds.classes()[static_cast<std::size_t>(j)]);
        }
    }
}

CvCurve CrossValidator::evaluate(const std::vector<ThresholdRule> &grid) const {
    if (grid.empty()) {
        throw ArgumentError("cross-validation grid is empty");
    }
    for (const auto &rule : grid) {
        if (rule.kind != grid.front().kind) {
            throw ArgumentError("cross-validation grid mixes thresholding kinds");
        }
        validate_rule(rule, full_stats_.t_stats.size());
    }
    const auto num_rules = static_cast<std::ptrdiff_t>(grid.size());
    const auto num_folds = static_cast<std::ptrdiff_t>(folds_.size());

    // errors[f * rules + r]
    std::vector<Index> errors(static_cast<std::size_t>(num_folds * num_rules), 0);
    parallel_for(num_folds, options_.threads, [&](std::ptrdiff_t f) {
        const Fold &fold = folds_[static_cast<std::size_t>(f)];
        for (std::ptrdiff_t r = 0; r < num_rules; ++r) {
            const ShrunkenModel model = shrink(fold.stats, grid[static_cast<std::size_t>(r)]);
            const auto predicted = predict_columns(model, fold.held_out);
            Index wrong = 0;
            for (std::size_t j = 0; j < predicted.size(); ++j) {
                wrong += predicted[j] != fold.truth[j] ? 1 : 0;
            }
            errors[static_cast<std::size_t>(f * num_rules + r)] = wrong;
        }
    });

    CvCurve curve;
    curve.seed = seed_;
    curve.num_folds = static_cast<int>(num_folds);
    curve.points.reserve(grid.size());
    for (std::ptrdiff_t r = 0; r < num_rules; ++r) {
        CvPoint point;
        point.rule = grid[static_cast<std::size_t>(r)];
        for (std::ptrdiff_t f = 0; f < num_folds; ++f) {
            point.error_count += errors[static_cast<std::size_t>(f * num_rules + r)];
        }
        point.survivor_count = static_cast<Index>(surviving_rows(apply_rule(point.rule, full_stats_.t_stats)).size());
        curve.points.push_back(point);
    }
    return curve;
}

CvCurve cross_validate(const Dataset &ds, const std::vector<ThresholdRule> &grid, int num_folds, std::uint64_t seed,
                       const CvOptions &options) {
    return CrossValidator(ds, num_folds, seed, options).evaluate(grid);
}

namespace {

/// Strict "a is preferred to b" under the selection tie rules.
bool preferred(const std::vector<CvPoint> &points, Index a, Index b) {
    const CvPoint &pa = points[static_cast<std::size_t>(a)];
    const CvPoint &pb = points[static_cast<std::size_t>(b)];
    if (pa.error_count != pb.error_count) {
        return pa.error_count < pb.error_count;
    }
    if (pa.survivor_count != pb.survivor_count) {
        return pa.survivor_count < pb.survivor_count;
    }
    return a > b;
}

}  // namespace

Index select_smallest(const std::vector<CvPoint> &points) {
    if (points.empty()) {
        throw ArgumentError("cannot select from an empty curve");
    }
    Index best = 0;
    for (Index i = 1; i < static_cast<Index>(points.size()); ++i) {
        if (preferred(points, i, best)) {
            best = i;
        }
    }
    return best;
}

std::optional<Index> select_runner_up(const std::vector<CvPoint> &points, Index best) {
    std::optional<Index> second;
    for (Index i = 0; i < static_cast<Index>(points.size()); ++i) {
        if (i != best && (!second || preferred(points, i, *second))) {
            second = i;
        }
    }
    return second;
}

bool prefer_runner_up(const CvPoint &best, const CvPoint &runner_up, Index reference_error,
                      const DeepSearchOptions &options) {
    const bool close_error = runner_up.error_count - reference_error <= options.max_error_gap;
    const bool much_smaller =
        2 * runner_up.survivor_count < best.survivor_count || best.survivor_count - runner_up.survivor_count > options.big_gap;
    return close_error && much_smaller;
}

std::string_view to_string(SearchStop stop) noexcept {
    switch (stop) {
    case SearchStop::none:
        return "continue";
    case SearchStop::no_interval:
        return "no-interval";
    case SearchStop::zero_span:
        return "zero-span";
    case SearchStop::no_progress:
        return "no-progress";
    case SearchStop::empty_grid:
        return "empty-grid";
    }
    return "?";
}

RefineStep refine_step(const std::vector<CvPoint> &points, const DeepSearchOptions &options, Index reference_error,
                       Index previous_span) {
    RefineStep step;
    step.best = select_smallest(points);
    step.runner_up = select_runner_up(points, step.best);
    step.chosen = step.best;
    const auto at = [&](Index i) -> const CvPoint & { return points[static_cast<std::size_t>(i)]; };
    if (step.runner_up && prefer_runner_up(at(step.best), at(*step.runner_up), reference_error, options)) {
        step.chosen = *step.runner_up;
        step.switched = true;
    }

    const Index l = step.chosen;
    const Index last = static_cast<Index>(points.size()) - 1;
    const bool right = l < last && at(l).survivor_count - at(l + 1).survivor_count > 1;
    const bool left = l > 0 && at(l - 1).survivor_count - at(l).survivor_count < options.m;
    if (left && right) {
        step.interval = {l - 1, l + 1};
    } else if (right) {
        step.interval = {l, l + 1};
    } else if (left) {
        step.interval = {l - 1, l};
    } else {
        step.stop = SearchStop::no_interval;
        return step;
    }
    step.span = at(step.interval->first).survivor_count - at(step.interval->second).survivor_count;
    step.next_size = std::min<Index>(options.m, step.span);
    if (step.next_size <= 0) {
        step.stop = SearchStop::zero_span;
    } else if (step.span >= previous_span) {
        step.stop = SearchStop::no_progress;
    }
    return step;
}

std::vector<ThresholdRule> refine_grid(const std::vector<CvPoint> &points, const RefineStep &step) {
    if (!step.interval || step.next_size <= 0) {
        return {points[static_cast<std::size_t>(step.chosen)].rule};
    }
    const ThresholdRule working = points[static_cast<std::size_t>(step.chosen)].rule;
    const ThresholdRule lo = points[static_cast<std::size_t>(step.interval->first)].rule;
    const ThresholdRule hi = points[static_cast<std::size_t>(step.interval->second)].rule;
    std::vector<ThresholdRule> grid{working};

    if (working.kind == RuleKind::order) {
        // Keep counts fall along the grid: lo keeps more than hi.
        const Index most = lo.keep_count();
        const Index fewest = hi.keep_count();
        const Index room = most - fewest - 1;
        const Index count = std::min(step.next_size, room);
        for (Index j = 1; j <= count; ++j) {
            const double keep = static_cast<double>(fewest) + static_cast<double>(most - fewest) * j / (count + 1);
            grid.push_back(ThresholdRule::order(static_cast<Index>(std::llround(keep))));
        }
        std::sort(grid.begin(), grid.end(), [](const auto &a, const auto &b) { return a.param > b.param; });
    } else {
        const Index count = step.next_size;
        for (Index j = 1; j <= count; ++j) {
            grid.push_back({working.kind, lo.param + (hi.param - lo.param) * static_cast<double>(j) / (count + 1)});
        }
        std::sort(grid.begin(), grid.end(), [](const auto &a, const auto &b) { return a.param < b.param; });
    }
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    return grid;
}

DeepSearchTrace deep_search(const CrossValidator &cv, RuleKind kind, const DeepSearchOptions &options) {
    if (options.max_iterations < 1) {
        throw ArgumentError("deep search needs an iteration cap of at least 1");
    }
    std::vector<ThresholdRule> grid = threshold_grid(cv.full_stats().t_stats, kind, options.m);
    DeepSearchTrace trace;
    Index reference = std::numeric_limits<Index>::max();
    Index previous_span = std::numeric_limits<Index>::max();
    for (int iteration = 0; iteration < options.max_iterations; ++iteration) {
        CvCurve curve = cv.evaluate(grid);
        for (const auto &point : curve.points) {
            reference = std::min(reference, point.error_count);
        }
        RefineStep step = refine_step(curve.points, options, reference, previous_span);
        const CvPoint working = curve.points[static_cast<std::size_t>(step.chosen)];
        if (step.stop == SearchStop::none) {
            grid = refine_grid(curve.points, step);
            if (grid.size() <= 1) {
                step.stop = SearchStop::empty_grid;
            }
        }
        trace.iterations.push_back({std::move(curve.points), step});
        if (step.stop != SearchStop::none) {
            trace.final_point = working;
            return trace;
        }
        previous_span = step.span;
    }
    throw Error(fmt::format("deep search did not settle within {} iterations", options.max_iterations));
}

DeepSearchTrace deep_search(const Dataset &ds, RuleKind kind, int num_folds, std::uint64_t seed,
                            const DeepSearchOptions &options, const CvOptions &cv_options) {
    return deep_search(CrossValidator(ds, num_folds, seed, cv_options), kind, options);
}

}  // namespace nsc
