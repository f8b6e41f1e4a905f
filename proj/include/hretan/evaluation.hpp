#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hretan/classifier.hpp"
#include "hretan/dataset.hpp"
#include "hretan/hierarchy.hpp"

namespace hretan {

struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const noexcept { return tp + fp + tn + fn; }
    ConfusionCounts& operator+=(const ConfusionCounts& o) noexcept {
        tp += o.tp;
        fp += o.fp;
        tn += o.tn;
        fn += o.fn;
        return *this;
    }
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

/// Percentages on the 0-100 scale.
struct Metrics {
    double sensitivity;
    double specificity;
    double gmean;
};

/// Throws UndefinedMetricError when either class is absent from `counts`.
Metrics metrics(const ConfusionCounts& counts);

/// Geometric mean of two percentages.
double gmean(double sensitivity, double specificity);

/// 1 - minor/major. Throws InsufficientDataError if either count is zero.
double imbalance_degree(std::size_t n_label1, std::size_t n_label2);

struct EvalReport {
    AlgorithmKind algorithm = AlgorithmKind::HreTanMix;
    std::string dataset;
    std::string positive_class;
    std::uint64_t seed = 0;
    std::size_t folds = 0;
    std::vector<ConfusionCounts> per_fold;
    double sensitivity = 0.0;
    double specificity = 0.0;
    double gmean = 0.0;
    /// Standard error across folds (sample sd / sqrt(#folds where defined)).
    double sensitivity_se = 0.0;
    double specificity_se = 0.0;
    double imbalance_degree = 0.0;

    ConfusionCounts pooled() const noexcept;
};

struct CrossValidationOptions {
    std::size_t folds = 10;
    std::uint64_t seed = 1;
    std::optional<std::string> positive_class;
    PipelineOptions pipeline;
    int threads = 0;
    /// Called with (fold, dataset instance index, prediction) after each fold.
    std::function<void(std::size_t, std::size_t, const Prediction&)> on_prediction;
};

/// Stratified k-fold evaluation with metrics on pooled confusion counts.
EvalReport cross_validate(const Dataset& ds, AlgorithmKind algo, const ClosureTable& closure,
                          const CrossValidationOptions& options);

/// Tallies predictions against gold labels.
ConfusionCounts confusion(std::span<const Prediction> predictions, const Dataset& gold,
                          const std::string& positive_class);

struct CorrelationResult {
    double r;
    double slope;
    double intercept;
    std::size_t n;
};

/// Sample Pearson r and least-squares line y = slope * x + intercept.
/// Throws InsufficientDataError for n < 3 or zero variance in x or y.
CorrelationResult pearson_and_fit(std::span<const std::pair<double, double>> points);

struct WilcoxonResult {
    double statistic;  ///< min(W+, W-)
    double w_plus;
    double p_value;    ///< two-sided
    std::size_t n_effective;
    bool exact;
};

/// Largest n_effective for which the exact null distribution is used.
inline constexpr std::size_t kWilcoxonExactMaxN = 15;

/// Paired signed-rank test. Zero differences are dropped and tied |d| get
/// average ranks. Exact for n_effective <= kWilcoxonExactMaxN, otherwise the
/// tie-corrected normal approximation with continuity correction.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

/// The two p-value routes, exposed for cross-checking.
double wilcoxon_exact_p(std::span<const double> ranks, double w_plus);
double wilcoxon_normal_p(std::span<const double> ranks, double w_plus);

} // namespace hretan
