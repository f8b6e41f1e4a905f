#include "hretan/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hretan/error.hpp"

namespace hretan {

double gmean(double sensitivity, double specificity) { return std::sqrt(sensitivity * specificity); }

Metrics metrics(const ConfusionCounts& counts) {
    if (counts.tp + counts.fn == 0) throw UndefinedMetricError("sensitivity undefined: no positive instances");
    if (counts.tn + counts.fp == 0) throw UndefinedMetricError("specificity undefined: no negative instances");
    Metrics m;
    m.sensitivity = 100.0 * static_cast<double>(counts.tp) / static_cast<double>(counts.tp + counts.fn);
    m.specificity = 100.0 * static_cast<double>(counts.tn) / static_cast<double>(counts.tn + counts.fp);
    m.gmean = gmean(m.sensitivity, m.specificity);
    return m;
}

double imbalance_degree(std::size_t n_label1, std::size_t n_label2) {
    if (n_label1 == 0 || n_label2 == 0) throw InsufficientDataError("imbalance degree needs both classes present");
    const auto minor = static_cast<double>(std::min(n_label1, n_label2));
    const auto major = static_cast<double>(std::max(n_label1, n_label2));
    return 1.0 - minor / major;
}

ConfusionCounts EvalReport::pooled() const noexcept {
    ConfusionCounts total;
    for (const auto& f : per_fold) total += f;
    return total;
}

ConfusionCounts confusion(std::span<const Prediction> predictions, const Dataset& gold,
                          const std::string& positive_class) {
    if (predictions.size() != gold.size()) throw ContractError("prediction count does not match the dataset");
    ConfusionCounts counts;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const bool actual = gold[i].label == positive_class;
        const bool predicted = predictions[i].label == positive_class;
        if (actual && predicted) ++counts.tp;
        else if (actual) ++counts.fn;
        else if (predicted) ++counts.fp;
        else ++counts.tn;
    }
    return counts;
}

namespace {

double standard_error(const std::vector<double>& values) {
    if (values.size() < 2) return 0.0;
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (auto v : values) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
}

} // namespace

EvalReport cross_validate(const Dataset& ds, AlgorithmKind algo, const ClosureTable& closure,
                          const CrossValidationOptions& options) {
    const auto folds = stratified_folds(ds, options.folds, options.seed);
    const auto counts = ds.class_counts();

    EvalReport report;
    report.algorithm = algo;
    report.positive_class = resolve_positive_class(ds, options.positive_class);
    report.seed = options.seed;
    report.folds = options.folds;
    report.imbalance_degree = imbalance_degree(counts[0], counts[1]);

    std::vector<double> fold_sens, fold_spec;
    for (std::size_t f = 0; f < folds.k; ++f) {
        const auto train_idx = folds.train_indices(f);
        const auto test_idx = folds.test_indices(f);
        Dataset train = ds.subset(train_idx);
        const auto train_counts = train.class_counts();
        for (int c = 0; c < 2; ++c)
            if (train_counts[c] == 0)
                throw InsufficientDataError("fold " + std::to_string(f) + ": class '" + ds.labels()[c] +
                                            "' absent from the training split");
        const Dataset test = ds.subset(test_idx);
        LazyClassifier model(std::move(train), algo, closure, options.pipeline);
        const auto preds = classify_testset(model, test, options.threads);
        const auto fold_counts = confusion(preds, test, report.positive_class);
        report.per_fold.push_back(fold_counts);
        if (fold_counts.tp + fold_counts.fn > 0)
            fold_sens.push_back(100.0 * static_cast<double>(fold_counts.tp) /
                                static_cast<double>(fold_counts.tp + fold_counts.fn));
        if (fold_counts.tn + fold_counts.fp > 0)
            fold_spec.push_back(100.0 * static_cast<double>(fold_counts.tn) /
                                static_cast<double>(fold_counts.tn + fold_counts.fp));
        if (options.on_prediction)
            for (std::size_t i = 0; i < preds.size(); ++i) options.on_prediction(f, test_idx[i], preds[i]);
    }

    const auto m = metrics(report.pooled());
    report.sensitivity = m.sensitivity;
    report.specificity = m.specificity;
    report.gmean = m.gmean;
    report.sensitivity_se = standard_error(fold_sens);
    report.specificity_se = standard_error(fold_spec);
    return report;
}

CorrelationResult pearson_and_fit(std::span<const std::pair<double, double>> points) {
    const std::size_t n = points.size();
    if (n < 3) throw InsufficientDataError("correlation needs at least 3 points");
    double mx = 0.0, my = 0.0;
    for (const auto& [x, y] : points) {
        mx += x;
        my += y;
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, syy = 0.0, sxy = 0.0;
    for (const auto& [x, y] : points) {
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
        sxy += (x - mx) * (y - my);
    }
    if (sxx <= 0.0 || syy <= 0.0) throw InsufficientDataError("correlation undefined for constant x or y");
    CorrelationResult out;
    out.n = n;
    out.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    out.slope = sxy / sxx;
    out.intercept = my - out.slope * mx;
    return out;
}

namespace {

bool nearly_equal(double x, double y) {
    return std::abs(x - y) <= 1e-9 * std::max({1.0, std::abs(x), std::abs(y)});
}

} // namespace

double wilcoxon_exact_p(std::span<const double> ranks, double w_plus) {
    // Doubled ranks are integers even with average ranks for ties.
    std::vector<std::size_t> doubled;
    std::size_t max_sum = 0;
    for (auto r : ranks) {
        doubled.push_back(static_cast<std::size_t>(std::llround(2.0 * r)));
        max_sum += doubled.back();
    }
    std::vector<double> ways(max_sum + 1, 0.0);
    ways[0] = 1.0;
    std::size_t reach = 0;
    for (auto d : doubled) {
        for (std::size_t s = reach + 1; s-- > 0;)
            if (ways[s] != 0.0) ways[s + d] += ways[s];
        reach += d;
    }
    const double patterns = std::ldexp(1.0, static_cast<int>(ranks.size()));
    const auto observed = static_cast<std::size_t>(std::llround(2.0 * w_plus));
    double lower = 0.0, upper = 0.0;
    for (std::size_t s = 0; s <= max_sum; ++s) {
        if (s <= observed) lower += ways[s];
        if (s >= observed) upper += ways[s];
    }
    return std::min(1.0, 2.0 * std::min(lower, upper) / patterns);
}

double wilcoxon_normal_p(std::span<const double> ranks, double w_plus) {
    const auto n = static_cast<double>(ranks.size());
    const double mean = n * (n + 1.0) / 4.0;
    double variance = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0;

    std::vector<double> sorted(ranks.begin(), ranks.end());
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        const auto t = static_cast<double>(j - i);
        variance -= (t * t * t - t) / 48.0;
        i = j;
    }
    if (variance <= 0.0) return 1.0;
    const double z = std::max(0.0, std::abs(w_plus - mean) - 0.5) / std::sqrt(variance);
    return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ContractError("paired samples must have equal length");
    std::vector<double> diffs;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!nearly_equal(a[i], b[i])) diffs.push_back(a[i] - b[i]);
    const std::size_t n = diffs.size();
    if (n < 6)
        throw InsufficientDataError("signed-rank test needs at least 6 nonzero differences, found " +
                                    std::to_string(n));

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return std::abs(diffs[x]) < std::abs(diffs[y]); });
    std::vector<double> ranks(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i + 1;
        while (j < n && nearly_equal(std::abs(diffs[order[j]]), std::abs(diffs[order[i]]))) ++j;
        const double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = avg;
        i = j;
    }

    WilcoxonResult out{};
    out.n_effective = n;
    double w_minus = 0.0;
    for (std::size_t i = 0; i < n; ++i) (diffs[i] > 0 ? out.w_plus : w_minus) += ranks[i];
    out.statistic = std::min(out.w_plus, w_minus);
    out.exact = n <= kWilcoxonExactMaxN;
    out.p_value = out.exact ? wilcoxon_exact_p(ranks, out.w_plus) : wilcoxon_normal_p(ranks, out.w_plus);
    return out;
}

} // namespace hretan
