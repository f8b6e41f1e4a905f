#include "hretan/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "hretan/error.hpp"

namespace hretan {

std::string_view algorithm_name(AlgorithmKind algo) noexcept {
    switch (algo) {
    case AlgorithmKind::Tan: return "tan";
    case AlgorithmKind::HreTan: return "hre-tan";
    case AlgorithmKind::HreTanMix: return "hre-tan-mix";
    case AlgorithmKind::HreTanPlus: return "hre-tan-plus";
    }
    return "unknown";
}

std::optional<AlgorithmKind> parse_algorithm(std::string_view name) noexcept {
    for (auto algo : {AlgorithmKind::Tan, AlgorithmKind::HreTan, AlgorithmKind::HreTanMix, AlgorithmKind::HreTanPlus})
        if (algorithm_name(algo) == name) return algo;
    if (name == "hre-tan+") return AlgorithmKind::HreTanPlus;
    return std::nullopt;
}

CandidateMode candidate_mode(AlgorithmKind algo) noexcept {
    switch (algo) {
    case AlgorithmKind::HreTanMix: return CandidateMode::Mix;
    case AlgorithmKind::HreTanPlus: return CandidateMode::Plus;
    default: return CandidateMode::All;
    }
}

bool uses_hierarchy(AlgorithmKind algo) noexcept { return algo != AlgorithmKind::Tan; }

TanParameters fit_parameters(const Dataset& train, const LearnedForest& forest,
                             const std::optional<std::string>& positive_class) {
    if (train.empty()) throw InsufficientDataError("cannot fit parameters on an empty training set");
    if (train.num_features() != forest.features.size())
        throw ContractError("restricted training set does not match the forest's feature set");

    TanParameters params;
    params.labels = train.labels();
    params.positive_class = resolve_positive_class(train, positive_class);
    params.features = train.features();

    const auto counts = train.class_counts();
    const double n = static_cast<double>(train.size());
    for (int c = 0; c < 2; ++c) params.class_prior[c] = (static_cast<double>(counts[c]) + 1.0) / (n + 2.0);

    const std::size_t m = forest.features.size();
    auto position = [&](std::size_t schema_index) {
        auto it = std::lower_bound(forest.features.begin(), forest.features.end(), schema_index);
        if (it == forest.features.end() || *it != schema_index)
            throw ContractError("forest parent is not one of its features");
        return static_cast<std::size_t>(it - forest.features.begin());
    };
    params.parent.assign(m, std::nullopt);
    for (std::size_t j = 0; j < m; ++j) {
        auto it = forest.parent_of.find(forest.features[j]);
        if (it == forest.parent_of.end()) throw ContractError("forest is not rooted");
        if (it->second) params.parent[j] = position(*it->second);
    }

    // tally[j][pv][c][v]
    std::vector<std::array<std::array<std::array<double, 2>, 2>, 2>> tally(m);
    for (auto& t : tally)
        for (auto& pv : t)
            for (auto& c : pv) c = {0.0, 0.0};
    for (std::size_t i = 0; i < train.size(); ++i) {
        const auto c = train.class_of(i);
        const auto& v = train[i].values;
        for (std::size_t j = 0; j < m; ++j) {
            const int pv = params.parent[j] ? v[*params.parent[j]] : 0;
            tally[j][pv][c][v[j]] += 1.0;
        }
    }
    params.cpt.resize(m);
    for (std::size_t j = 0; j < m; ++j)
        for (int pv = 0; pv < 2; ++pv)
            for (int c = 0; c < 2; ++c) {
                const double denom = tally[j][pv][c][0] + tally[j][pv][c][1] + 2.0;
                for (int v = 0; v < 2; ++v) params.cpt[j][pv][c][v] = (tally[j][pv][c][v] + 1.0) / denom;
            }
    return params;
}

Prediction posterior(const TanParameters& params, const Instance& inst) {
    const std::size_t m = params.features.size();
    if (inst.values.size() != m) throw ContractError("instance values do not cover the model's features");

    std::array<double, 2> log_score{};
    for (int c = 0; c < 2; ++c) {
        double s = std::log(params.class_prior[c]);
        for (std::size_t j = 0; j < m; ++j) {
            const int v = inst.values[j];
            const int pv = params.parent[j] ? inst.values[*params.parent[j]] : 0;
            s += std::log(params.probability(j, v, pv, c));
        }
        log_score[c] = s;
    }
    const double top = std::max(log_score[0], log_score[1]);
    const double z0 = std::exp(log_score[0] - top);
    const double z1 = std::exp(log_score[1] - top);

    Prediction pred;
    pred.labels = params.labels;
    pred.posterior = {z0 / (z0 + z1), z1 / (z0 + z1)};
    pred.used_features = params.features;
    pred.fallback = m == 0;

    int winner;
    constexpr double tie_tolerance = 1e-12;
    if (std::abs(log_score[0] - log_score[1]) > tie_tolerance) winner = log_score[1] > log_score[0] ? 1 : 0;
    else if (params.class_prior[0] != params.class_prior[1]) winner = params.class_prior[1] > params.class_prior[0] ? 1 : 0;
    else winner = 0;  // labels are sorted, so index 0 is lexicographically smaller
    pred.label = params.labels[winner];
    return pred;
}

LazyClassifier::LazyClassifier(Dataset train, AlgorithmKind algo, const ClosureTable& closure, PipelineOptions options)
    : train_(std::move(train)), algo_(algo), options_(options),
      relations_(uses_hierarchy(algo) ? FeatureRelations::from_closure(closure, train_.features())
                                      : FeatureRelations::flat(train_.num_features())),
      stats_(train_), all_edges_(generate_edges(train_.num_features())) {
    if (train_.empty()) throw InsufficientDataError("training set is empty");
}

Prediction LazyClassifier::classify(const Instance& inst) const {
    if (inst.values.size() != train_.num_features())
        throw ContractError("test instance does not match the training schema");

    EdgeSet cands = filter_candidates(all_edges_, inst, candidate_mode(algo_), relations_);
    cands = score_edges(std::move(cands), stats_, options_.mi);
    LearnedForest forest = hre_mst(cands, relations_);

    const Dataset train_restricted = restrict(train_, std::span<const std::size_t>(forest.features));
    const Instance inst_restricted = restrict(inst, std::span<const std::size_t>(forest.features));
    const TanParameters params = fit_parameters(train_restricted, forest);
    Prediction pred = posterior(params, inst_restricted);
    pred.structure = std::move(forest);
    return pred;
}

Prediction lazy_classify(const Dataset& train, const Instance& inst, AlgorithmKind algo, const ClosureTable& closure,
                         PipelineOptions options) {
    return LazyClassifier(train, algo, closure, options).classify(inst);
}

namespace {

void check_schema(const LazyClassifier& model, const Dataset& test) {
    if (test.features() != model.train().features())
        throw SchemaError("test set features do not match the training set");
}

} // namespace

std::vector<Prediction> classify_testset_serial(const LazyClassifier& model, const Dataset& test) {
    check_schema(model, test);
    std::vector<Prediction> out;
    out.reserve(test.size());
    for (const auto& inst : test.instances()) out.push_back(model.classify(inst));
    return out;
}

std::vector<Prediction> classify_testset(const LazyClassifier& model, const Dataset& test, int threads) {
    check_schema(model, test);
    const auto n = static_cast<std::ptrdiff_t>(test.size());
    std::vector<Prediction> out(test.size());
    std::vector<std::exception_ptr> errors(test.size());
#ifdef _OPENMP
    const int nthreads = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(nthreads)
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            out[i] = model.classify(test[static_cast<std::size_t>(i)]);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    (void)threads;
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

std::vector<Prediction> classify_testset(const Dataset& train, const Dataset& test, AlgorithmKind algo,
                                         const ClosureTable& closure, PipelineOptions options, int threads) {
    LazyClassifier model(train, algo, closure, options);
    return classify_testset(model, test, threads);
}

} // namespace hretan
