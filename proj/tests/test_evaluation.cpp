#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "fixtures.hpp"
#include "hretan/error.hpp"
#include "hretan/evaluation.hpp"
#include "hretan/synthgen.hpp"
#include "oracles.hpp"

using namespace hretan;

namespace {

std::vector<double> ranks_1_to(std::size_t n) {
    std::vector<double> r(n);
    std::iota(r.begin(), r.end(), 1.0);
    return r;
}

/// Feature x equals the class indicator; a one-level hierarchy over {x, y}.
Dataset separable(std::size_t n_pos, std::size_t n_neg) {
    std::vector<Instance> rows;
    for (std::size_t i = 0; i < n_pos; ++i) rows.push_back({{1, static_cast<std::uint8_t>(i % 2)}, "pro"});
    for (std::size_t i = 0; i < n_neg; ++i) rows.push_back({{0, static_cast<std::uint8_t>(i % 2)}, "anti"});
    return Dataset({"x", "y"}, {"anti", "pro"}, std::move(rows));
}

} // namespace

TEST(Metrics, GmeanOnPercentScale) {
    EXPECT_NEAR(gmean(34.9, 78.3), 52.3, 0.15);
    EXPECT_DOUBLE_EQ(gmean(0.0, 90.0), 0.0);
    for (double s : {0.0, 12.5, 50.0, 100.0}) EXPECT_NEAR(gmean(s, s), s, 1e-12);
}

TEST(Metrics, FromConfusionCounts) {
    auto m = metrics({3, 1, 9, 1});
    EXPECT_DOUBLE_EQ(m.sensitivity, 75.0);
    EXPECT_DOUBLE_EQ(m.specificity, 90.0);
    EXPECT_NEAR(m.gmean, std::sqrt(75.0 * 90.0), 1e-12);
    EXPECT_THROW(metrics({0, 2, 3, 0}), UndefinedMetricError);
    EXPECT_THROW(metrics({2, 0, 0, 1}), UndefinedMetricError);
}

TEST(Metrics, ImbalanceDegree) {
    EXPECT_DOUBLE_EQ(imbalance_degree(30, 60), 0.5);
    EXPECT_DOUBLE_EQ(imbalance_degree(60, 30), 0.5);
    EXPECT_DOUBLE_EQ(imbalance_degree(17, 17), 0.0);
    EXPECT_NEAR(imbalance_degree(25, 154), 0.838, 5e-4);
    EXPECT_THROW(imbalance_degree(0, 3), InsufficientDataError);
}

TEST(CrossValidation, SeparableDataIsPerfect) {
    auto ds = separable(20, 30);
    auto closure = build_closure(FeatureDag::from_edges(ds.features(), {}));
    CrossValidationOptions opts;
    auto report = cross_validate(ds, AlgorithmKind::Tan, closure, opts);
    EXPECT_DOUBLE_EQ(report.gmean, 100.0);
    EXPECT_DOUBLE_EQ(report.sensitivity_se, 0.0);
    EXPECT_EQ(report.per_fold.size(), 10u);
    EXPECT_EQ(report.pooled().total(), ds.size());
    EXPECT_EQ(report.positive_class, "pro");
    EXPECT_NEAR(report.imbalance_degree, 1.0 / 3.0, 1e-12);
}

TEST(CrossValidation, PriorOnlyPredictsMajority) {
    // all features zero: Plus admits no edge, so every prediction is the
    // majority prior and sensitivity is 0
    std::vector<Instance> rows;
    for (int i = 0; i < 60; ++i) rows.push_back({{0, 0, 0}, "anti"});
    for (int i = 0; i < 40; ++i) rows.push_back({{0, 0, 0}, "pro"});
    Dataset ds({"a", "b", "c"}, {"anti", "pro"}, rows);
    auto closure = build_closure(FeatureDag::from_edges(ds.features(), {{"a", "b"}}));
    std::size_t seen = 0, fallbacks = 0;
    CrossValidationOptions opts;
    opts.on_prediction = [&](std::size_t, std::size_t, const Prediction& p) {
        ++seen;
        fallbacks += p.fallback;
    };
    auto report = cross_validate(ds, AlgorithmKind::HreTanPlus, closure, opts);
    EXPECT_EQ(seen, 100u);
    EXPECT_EQ(fallbacks, 100u);
    EXPECT_DOUBLE_EQ(report.sensitivity, 0.0);
    EXPECT_DOUBLE_EQ(report.specificity, 100.0);
    EXPECT_DOUBLE_EQ(report.gmean, 0.0);
}

TEST(CrossValidation, ParallelMatchesSerial) {
    SynthConfig cfg;
    cfg.n_features = 25;
    cfg.n_instances = 80;
    cfg.imbalance = 0.5;
    cfg.dependence_strength = 0.8;
    cfg.seed = 3;
    auto data = generate(cfg);
    auto closure = build_closure(data.dag);
    CrossValidationOptions serial;
    serial.threads = 1;
    CrossValidationOptions parallel = serial;
    parallel.threads = 4;
    for (auto algo : {AlgorithmKind::Tan, AlgorithmKind::HreTanMix}) {
        auto a = cross_validate(data.dataset, algo, closure, serial);
        auto b = cross_validate(data.dataset, algo, closure, parallel);
        EXPECT_EQ(a.per_fold, b.per_fold);
        EXPECT_EQ(a.gmean, b.gmean);
        auto pooled = a.pooled();
        auto m = metrics(pooled);
        EXPECT_EQ(m.gmean, a.gmean);
    }
}

TEST(CrossValidation, MissingClassInTrainingSplitNamesFold) {
    std::vector<Instance> rows{{{1}, "pro"}, {{0}, "anti"}, {{0}, "anti"}};
    Dataset ds({"x"}, {"anti", "pro"}, rows);
    auto closure = build_closure(FeatureDag::from_edges({"x"}, {}));
    CrossValidationOptions opts;
    opts.folds = 3;
    try {
        cross_validate(ds, AlgorithmKind::Tan, closure, opts);
        FAIL();
    } catch (const InsufficientDataError& e) {
        EXPECT_NE(std::string(e.what()).find("fold"), std::string::npos);
    }
}

TEST(Correlation, ExactLine) {
    std::vector<std::pair<double, double>> pts{{0, 1}, {1, 3}, {2, 5}, {5, 11}};
    auto r = pearson_and_fit(pts);
    EXPECT_NEAR(r.r, 1.0, 1e-12);
    EXPECT_NEAR(r.slope, 2.0, 1e-12);
    EXPECT_NEAR(r.intercept, 1.0, 1e-12);
    EXPECT_EQ(r.n, 4u);
}

TEST(Correlation, InvariantToOrderAndAffineMaps) {
    Rng rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::pair<double, double>> pts;
        for (int i = 0; i < 12; ++i) pts.emplace_back(rng.uniform(), rng.uniform(0, 100));
        const double base = pearson_and_fit(pts).r;
        rng.shuffle(std::span(pts));
        EXPECT_NEAR(pearson_and_fit(pts).r, base, 1e-12);
        const double a = rng.uniform(0.1, 5), b = rng.uniform(-3, 3);
        for (auto& p : pts) p.second = a * p.second + b;
        EXPECT_NEAR(pearson_and_fit(pts).r, base, 1e-9);
        for (auto& p : pts) p.first = -p.first;
        EXPECT_NEAR(pearson_and_fit(pts).r, -base, 1e-9);
    }
}

TEST(Correlation, DegenerateInputs) {
    std::vector<std::pair<double, double>> two{{0, 1}, {1, 2}};
    EXPECT_THROW(pearson_and_fit(two), InsufficientDataError);
    std::vector<std::pair<double, double>> flat{{0, 1}, {1, 1}, {2, 1}};
    EXPECT_THROW(pearson_and_fit(flat), InsufficientDataError);
}

TEST(Wilcoxon, IdenticalSamplesAreRejected) {
    std::vector<double> a(8, 3.0);
    EXPECT_THROW(wilcoxon_signed_rank(a, a), InsufficientDataError);
    std::vector<double> b = a;
    for (int i = 0; i < 5; ++i) b[static_cast<std::size_t>(i)] += 1.0 + i;
    EXPECT_THROW(wilcoxon_signed_rank(a, b), InsufficientDataError);
}

TEST(Wilcoxon, ConstantShiftHasMinimalExactP) {
    std::vector<double> a, b;
    for (int i = 0; i < 10; ++i) {
        a.push_back(10.0 + i * 1.5);
        b.push_back(a.back() + 0.1 * (i + 1));
    }
    auto r = wilcoxon_signed_rank(a, b);
    EXPECT_TRUE(r.exact);
    EXPECT_EQ(r.n_effective, 10u);
    EXPECT_DOUBLE_EQ(r.statistic, 0.0);
    EXPECT_NEAR(r.p_value, 2.0 / 1024.0, 1e-15);
}

TEST(Wilcoxon, ExactDistributionMatchesEnumeration) {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 6 + rng.below(10);
        std::vector<double> a, b;
        for (std::size_t i = 0; i < n; ++i) {
            a.push_back(std::round(rng.uniform(0, 5)));
            b.push_back(std::round(rng.uniform(0, 5)) + 0.5);
        }
        auto r = wilcoxon_signed_rank(a, b);
        // rebuild ranks the slow way
        std::vector<double> d;
        for (std::size_t i = 0; i < n; ++i) d.push_back(a[i] - b[i]);
        std::vector<double> ranks;
        double w_plus = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double less = 0, equal = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (std::abs(d[j]) < std::abs(d[i])) ++less;
                if (std::abs(d[j]) == std::abs(d[i])) ++equal;
            }
            ranks.push_back(less + (equal + 1.0) / 2.0);
            if (d[i] > 0) w_plus += ranks.back();
        }
        ASSERT_DOUBLE_EQ(r.w_plus, w_plus);
        ASSERT_NEAR(r.p_value, oracle::wilcoxon_by_enumeration(ranks, w_plus), 1e-12);
        ASSERT_NEAR(wilcoxon_exact_p(ranks, w_plus), r.p_value, 1e-15);
    }
}

TEST(Wilcoxon, NormalRouteApproachesExactAtCutover) {
    // Over every attainable W at n = 15 (no ties) the routes differ by at most
    // 0.011054 (W = 46, exact p 0.45428); frozen from an independent DP.
    const auto ranks = ranks_1_to(kWilcoxonExactMaxN);
    double worst = 0.0;
    for (double w = 0; w <= 120; w += 1.0) {
        const double exact = wilcoxon_exact_p(ranks, w);
        const double approx = wilcoxon_normal_p(ranks, w);
        worst = std::max(worst, std::abs(exact - approx));
        if (exact <= 0.25) EXPECT_LE(std::abs(exact - approx), 0.01) << w;
    }
    EXPECT_NEAR(worst, 0.011053592377697652, 1e-9);
    EXPECT_NEAR(wilcoxon_exact_p(ranks, 46.0), 0.45428466796875, 1e-15);
}

TEST(Wilcoxon, LargeSampleUsesNormalRoute) {
    std::vector<double> a, b;
    for (int i = 0; i < 30; ++i) {
        a.push_back(i);
        b.push_back(i + (i % 3 == 0 ? -1.0 : 1.0) * (1 + i % 7));
    }
    auto r = wilcoxon_signed_rank(a, b);
    EXPECT_FALSE(r.exact);
    EXPECT_GT(r.p_value, 0.0);
    EXPECT_LE(r.p_value, 1.0);
    // swapping the samples only relabels W+ and W-
    auto s = wilcoxon_signed_rank(b, a);
    EXPECT_NEAR(s.p_value, r.p_value, 1e-12);
    EXPECT_DOUBLE_EQ(s.statistic, r.statistic);
}
