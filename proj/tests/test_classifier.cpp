#include <gtest/gtest.h>

#include <algorithm>

#include "fixtures.hpp"
#include "hretan/classifier.hpp"
#include "hretan/error.hpp"
#include "hretan/synthgen.hpp"
#include "oracles.hpp"

using namespace hretan;

namespace {

LearnedForest forest_from(std::vector<Edge> edges) {
    LearnedForest f;
    f.selected_edges = std::move(edges);
    f.selected_weights.assign(f.selected_edges.size(), 1.0);
    return root_forest(std::move(f));
}

/// Six-feature hierarchy (two trees) with a random hierarchy-consistent dataset.
struct SmallWorld {
    FeatureDag dag;
    ClosureTable closure;
    Dataset train;
    Dataset test;
};

SmallWorld small_world(std::uint64_t seed, std::size_t n_train = 16, std::size_t n_test = 20) {
    SynthConfig cfg;
    cfg.n_features = 6;
    cfg.n_instances = n_train + n_test;
    cfg.depth = 3;
    cfg.max_parents = 2;
    cfg.dependence_strength = 0.7;
    cfg.seed = seed;
    auto data = generate(cfg);
    std::vector<std::size_t> tr, te;
    for (std::size_t i = 0; i < data.dataset.size(); ++i) (i < n_train ? tr : te).push_back(i);
    auto train = data.dataset.subset(tr);
    auto test = data.dataset.subset(te);
    auto closure = build_closure(data.dag);
    return {std::move(data.dag), std::move(closure), std::move(train), std::move(test)};
}

int mode_code(AlgorithmKind algo) {
    switch (candidate_mode(algo)) {
    case CandidateMode::All: return 0;
    case CandidateMode::Mix: return 1;
    case CandidateMode::Plus: return 2;
    }
    return 0;
}

} // namespace

TEST(Classifier, AlgorithmNames) {
    for (auto algo : {AlgorithmKind::Tan, AlgorithmKind::HreTan, AlgorithmKind::HreTanMix, AlgorithmKind::HreTanPlus})
        EXPECT_EQ(parse_algorithm(algorithm_name(algo)), algo);
    EXPECT_EQ(parse_algorithm("hre-tan+"), AlgorithmKind::HreTanPlus);
    EXPECT_FALSE(parse_algorithm("nb").has_value());
}

TEST(Classifier, PriorsOnlyWithEmptyForest) {
    Dataset train({}, {"anti", "pro"}, {{{}, "pro"}, {{}, "pro"}, {{}, "pro"}, {{}, "anti"}});
    auto params = fit_parameters(train, LearnedForest{});
    EXPECT_DOUBLE_EQ(params.class_prior[1], 4.0 / 6.0);
    EXPECT_DOUBLE_EQ(params.class_prior[0], 2.0 / 6.0);
    auto pred = posterior(params, Instance{{}, ""});
    EXPECT_TRUE(pred.fallback);
    EXPECT_EQ(pred.label, "pro");
    EXPECT_NEAR(pred.posterior[1], 2.0 / 3.0, 1e-12);
}

TEST(Classifier, RootCptSmoothing) {
    std::vector<Instance> rows;
    for (int i = 0; i < 5; ++i) rows.push_back({{1}, "a"});
    for (int i = 0; i < 5; ++i) rows.push_back({{1}, "b"});
    Dataset train({"x"}, {"a", "b"}, rows);
    LearnedForest f;
    f.features = {0};
    f.parent_of[0] = std::nullopt;
    f.roots = {0};
    auto params = fit_parameters(train, f);
    for (int c = 0; c < 2; ++c) {
        EXPECT_DOUBLE_EQ(params.probability(0, 1, 0, c), 6.0 / 7.0);
        EXPECT_DOUBLE_EQ(params.probability(0, 0, 0, c), 1.0 / 7.0);
    }
}

TEST(Classifier, CptsMatchCountingOracle) {
    Rng rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        auto train = fixtures::random_dataset(rng, 12, 3);
        auto forest = forest_from({{0, 1}, {1, 2}});
        auto params = fit_parameters(train, forest);
        const std::vector<long> parents{-1, 0, 1};
        double prior_sum = params.class_prior[0] + params.class_prior[1];
        EXPECT_NEAR(prior_sum, 1.0, 1e-9);
        for (std::size_t j = 0; j < 3; ++j)
            for (int pv = 0; pv < 2; ++pv)
                for (int c = 0; c < 2; ++c) {
                    double total = 0.0;
                    for (int v = 0; v < 2; ++v) {
                        const double p = params.probability(j, v, pv, c);
                        EXPECT_GT(p, 0.0);
                        EXPECT_LT(p, 1.0);
                        total += p;
                        EXPECT_NEAR(p, oracle::cpt_by_counting(train, j, parents[j], v, pv, train.labels()[c]), 1e-12);
                    }
                    EXPECT_NEAR(total, 1.0, 1e-9);
                }
    }
}

TEST(Classifier, SymmetricClassesTieToSmallerLabel) {
    std::vector<Instance> rows{{{0}, "b"}, {{1}, "b"}, {{0}, "a"}, {{1}, "a"}};
    Dataset train({"x"}, {"a", "b"}, rows);
    LearnedForest f;
    f.features = {0};
    f.parent_of[0] = std::nullopt;
    f.roots = {0};
    auto params = fit_parameters(train, f);
    auto pred = posterior(params, Instance{{1}, ""});
    EXPECT_NEAR(pred.posterior[0], 0.5, 1e-12);
    EXPECT_NEAR(pred.posterior[1], 0.5, 1e-12);
    EXPECT_EQ(pred.label, "a");
}

TEST(Classifier, TieFallsToLargerPrior) {
    TanParameters params;
    params.labels = {"a", "b"};
    params.positive_class = "b";
    params.class_prior = {0.4, 0.6};
    params.features = {"x"};
    params.parent = {std::nullopt};
    params.cpt.resize(1);
    params.cpt[0][0][0] = {0.25, 0.75};  // 0.4 * 0.75 = 0.3
    params.cpt[0][0][1] = {0.5, 0.5};    // 0.6 * 0.5  = 0.3
    auto pred = posterior(params, Instance{{1}, ""});
    EXPECT_NEAR(pred.posterior[0], 0.5, 1e-12);
    EXPECT_EQ(pred.label, "b");
}

TEST(Classifier, PosteriorMatchesJointEnumeration) {
    Rng rng(777);
    for (int trial = 0; trial < 100; ++trial) {
        auto train = fixtures::random_dataset(rng, 10 + rng.below(20), 3, rng.uniform(0.2, 0.8));
        // random rooted tree on 3 features
        std::vector<Edge> edges = rng.bernoulli(0.5) ? std::vector<Edge>{{0, 1}, {0, 2}} : std::vector<Edge>{{0, 2}, {1, 2}};
        auto forest = forest_from(edges);
        auto params = fit_parameters(train, forest);
        std::vector<long> parents;
        for (auto p : params.parent) parents.push_back(p ? static_cast<long>(*p) : -1);
        for (std::uint32_t ev = 0; ev < 8; ++ev) {
            Instance inst{{static_cast<std::uint8_t>(ev & 1U), static_cast<std::uint8_t>(ev >> 1 & 1U),
                           static_cast<std::uint8_t>(ev >> 2 & 1U)},
                          ""};
            auto pred = posterior(params, inst);
            auto expected = oracle::posterior_by_enumeration(train, parents, inst.values);
            ASSERT_NEAR(pred.posterior[0], expected[0], 1e-9);
            ASSERT_NEAR(pred.posterior[1], expected[1], 1e-9);
            ASSERT_NEAR(pred.posterior[0] + pred.posterior[1], 1.0, 1e-9);
        }
    }
}

TEST(Classifier, PosteriorRejectsWrongArity) {
    TanParameters params = fit_parameters(Dataset({}, {"a", "b"}, {{{}, "a"}}), LearnedForest{});
    EXPECT_THROW(posterior(params, Instance{{1}, ""}), ContractError);
}

TEST(Classifier, AllPositiveInstanceMixEqualsPlus) {
    auto world = small_world(3);
    Instance ones{std::vector<std::uint8_t>(6, 1), "pro"};
    auto mix = lazy_classify(world.train, ones, AlgorithmKind::HreTanMix, world.closure);
    auto plus = lazy_classify(world.train, ones, AlgorithmKind::HreTanPlus, world.closure);
    EXPECT_EQ(mix, plus);
}

TEST(Classifier, AllZeroInstanceUnderPlusFallsBackToPriors) {
    auto world = small_world(4);
    Instance zeros{std::vector<std::uint8_t>(6, 0), "pro"};
    auto pred = lazy_classify(world.train, zeros, AlgorithmKind::HreTanPlus, world.closure);
    EXPECT_TRUE(pred.fallback);
    EXPECT_TRUE(pred.used_features.empty());
    const auto counts = world.train.class_counts();
    const double n = static_cast<double>(world.train.size());
    EXPECT_NEAR(pred.posterior[0], (static_cast<double>(counts[0]) + 1.0) / (n + 2.0), 1e-12);
}

TEST(Classifier, LazyPipelineMatchesReferenceTrace) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto world = small_world(seed);
        const auto rel = FeatureRelations::from_closure(world.closure, world.train.features());
        for (auto algo : {AlgorithmKind::Tan, AlgorithmKind::HreTan, AlgorithmKind::HreTanMix, AlgorithmKind::HreTanPlus}) {
            for (std::size_t t = 0; t < 4; ++t) {
                const auto& inst = world.test[t];
                auto pred = lazy_classify(world.train, inst, algo, world.closure);
                auto ref = oracle::reference_pipeline(
                    world.train, inst, mode_code(algo), uses_hierarchy(algo),
                    [&](std::size_t a, std::size_t b) { return rel.related(a, b); },
                    [&](std::size_t a) { return rel.relatives(a); });
                std::vector<std::pair<std::string, std::string>> got;
                for (auto e : pred.structure.selected_edges)
                    got.emplace_back(world.train.features()[e.a], world.train.features()[e.b]);
                ASSERT_EQ(got, ref.selected) << algorithm_name(algo) << " seed " << seed;
                ASSERT_EQ(pred.used_features, ref.used);
                ASSERT_NEAR(pred.posterior[0], ref.posterior[0], 1e-9);
                ASSERT_NEAR(pred.posterior[1], ref.posterior[1], 1e-9);
            }
        }
    }
}

TEST(Classifier, FeatureUseSoundness) {
    for (std::uint64_t seed = 20; seed < 30; ++seed) {
        auto world = small_world(seed);
        for (auto algo : {AlgorithmKind::HreTanMix, AlgorithmKind::HreTanPlus}) {
            auto preds = classify_testset(world.train, world.test, algo, world.closure);
            for (std::size_t i = 0; i < preds.size(); ++i) {
                const auto& p = preds[i];
                const auto& v = world.test[i].values;
                EXPECT_NEAR(p.posterior[0] + p.posterior[1], 1.0, 1e-9);
                for (auto e : p.structure.selected_edges) {
                    if (algo == AlgorithmKind::HreTanPlus) EXPECT_TRUE(v[e.a] && v[e.b]);
                    else EXPECT_TRUE(v[e.a] || v[e.b]);
                }
                std::vector<std::string> endpoints;
                for (auto f : p.structure.features) endpoints.push_back(world.train.features()[f]);
                EXPECT_EQ(p.used_features, endpoints);
            }
        }
    }
}

TEST(Classifier, FlatHierarchyReducesToTan) {
    Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        auto train = fixtures::random_dataset(rng, 30, 7);
        auto test = fixtures::random_dataset(rng, 10, 7);
        auto closure = build_closure(FeatureDag::from_edges(train.features(), {}));
        auto hre = classify_testset(train, test, AlgorithmKind::HreTan, closure);
        auto tan = classify_testset(train, test, AlgorithmKind::Tan, closure);
        EXPECT_EQ(hre, tan);
    }
}

TEST(Classifier, TestsetOrderPurityAndConcurrency) {
    auto world = small_world(42);
    LazyClassifier model(world.train, AlgorithmKind::HreTanMix, world.closure);
    EXPECT_TRUE(classify_testset(model, world.test.subset(std::vector<std::size_t>{})).empty());

    auto dup = world.test.subset(std::vector<std::size_t>{2, 2, 2});
    auto three = classify_testset(model, dup, 3);
    EXPECT_EQ(three[0], three[1]);
    EXPECT_EQ(three[1], three[2]);

    auto serial = classify_testset_serial(model, world.test);
    for (int threads : {1, 2, 4, 8}) EXPECT_EQ(classify_testset(model, world.test, threads), serial);
}

TEST(Classifier, SchemaMismatchIsRejected) {
    auto world = small_world(1);
    auto closure = world.closure;
    Dataset other({"q"}, {"anti", "pro"}, {{{1}, "pro"}});
    LazyClassifier model(world.train, AlgorithmKind::HreTan, closure);
    EXPECT_THROW(classify_testset(model, other), SchemaError);
    EXPECT_THROW(model.classify(Instance{{1}, "pro"}), ContractError);
}
