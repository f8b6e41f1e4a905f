#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hretan/dataset.hpp"
#include "hretan/hierarchy.hpp"
#include "hretan/structure.hpp"

namespace hretan {

enum class AlgorithmKind { Tan, HreTan, HreTanMix, HreTanPlus };

/// "tan", "hre-tan", "hre-tan-mix", "hre-tan-plus".
std::string_view algorithm_name(AlgorithmKind algo) noexcept;
std::optional<AlgorithmKind> parse_algorithm(std::string_view name) noexcept;
CandidateMode candidate_mode(AlgorithmKind algo) noexcept;
/// Baseline TAN ignores the hierarchy entirely.
bool uses_hierarchy(AlgorithmKind algo) noexcept;

/// Smoothed TAN conditional probability tables over a restricted schema.
struct TanParameters {
    std::array<std::string, 2> labels;
    std::string positive_class;
    std::array<double, 2> class_prior{};
    std::vector<std::string> features;
    /// Parent position within `features`; nullopt for roots.
    std::vector<std::optional<std::size_t>> parent;
    /// cpt[j][pv][c][v] = P(X_j = v | X_parent(j) = pv, C = c). Roots use pv = 0 only.
    std::vector<std::array<std::array<std::array<double, 2>, 2>, 2>> cpt;

    double probability(std::size_t j, int value, int parent_value, int cls) const {
        return cpt[j][parent[j] ? parent_value : 0][cls][value];
    }
};

/// Add-1 estimates: priors over the two labels, root CPTs P(v|c), and
/// non-root CPTs P(v|parent value, c). `train_restricted` must carry exactly
/// the forest's features, in ascending schema order (what `restrict` yields).
TanParameters fit_parameters(const Dataset& train_restricted, const LearnedForest& forest,
                             const std::optional<std::string>& positive_class = std::nullopt);

struct Prediction {
    std::string label;
    std::array<std::string, 2> labels;
    std::array<double, 2> posterior{};  ///< aligned with labels
    std::vector<std::string> used_features;
    bool fallback = false;
    /// Forest the prediction was made with (indices into the training schema).
    LearnedForest structure;

    friend bool operator==(const Prediction&, const Prediction&) = default;
};

/// Normalised TAN posterior, computed in log space. Ties go to the larger
/// prior, then the lexicographically smaller label.
Prediction posterior(const TanParameters& params, const Instance& inst_restricted);

struct PipelineOptions {
    MiMode mi = MiMode::Conditional;
};

/// Per-training-set state shared by every lazy classification: the projected
/// hierarchy, pair-count masks and the full edge list. Read-only after
/// construction, so one instance may serve many threads.
class LazyClassifier {
public:
    LazyClassifier(Dataset train, AlgorithmKind algo, const ClosureTable& closure, PipelineOptions options = {});

    /// One full train-and-predict cycle for `inst` (schema of the training set).
    Prediction classify(const Instance& inst) const;

    const Dataset& train() const noexcept { return train_; }
    AlgorithmKind algorithm() const noexcept { return algo_; }
    const FeatureRelations& relations() const noexcept { return relations_; }

private:
    Dataset train_;
    AlgorithmKind algo_;
    PipelineOptions options_;
    FeatureRelations relations_;
    PairStatistics stats_;
    std::vector<Edge> all_edges_;
};

Prediction lazy_classify(const Dataset& train, const Instance& inst, AlgorithmKind algo, const ClosureTable& closure,
                         PipelineOptions options = {});

/// Sequential reference: one lazy classification per test instance, in order.
std::vector<Prediction> classify_testset_serial(const LazyClassifier& model, const Dataset& test);

/// OpenMP kernel over test instances. Output is identical to the serial
/// reference. `threads` <= 0 uses the OpenMP default.
std::vector<Prediction> classify_testset(const LazyClassifier& model, const Dataset& test, int threads = 0);

std::vector<Prediction> classify_testset(const Dataset& train, const Dataset& test, AlgorithmKind algo,
                                         const ClosureTable& closure, PipelineOptions options = {},
                                         int threads = 0);

} // namespace hretan
