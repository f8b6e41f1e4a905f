#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "hretan/dataset.hpp"
#include "hretan/hierarchy.hpp"

namespace hretan {

struct SynthConfig {
    std::size_t n_features = 50;
    std::size_t n_instances = 100;
    std::size_t max_parents = 2;
    /// Number of DAG layers (clamped to [2, n_features]).
    std::size_t depth = 4;
    /// Target 1 - minor/major.
    double imbalance = 0.0;
    /// 0 = labels independent of features, 1 = strongest planted signal.
    double dependence_strength = 0.5;
    std::uint64_t seed = 1;
};

/// Labels used by generated datasets; the positive class is the minority.
inline const std::string kSynthPositiveLabel = "pro";
inline const std::string kSynthNegativeLabel = "anti";

struct SynthData {
    FeatureDag dag;
    Dataset dataset;
};

/// Class sizes (minor, major) whose imbalance degree is closest to `imbalance`.
/// Throws ConfigError when the target lies more than 1/n_instances outside
/// the range of attainable splits (1 .. n/2 minority instances).
std::pair<std::size_t, std::size_t> synth_class_sizes(std::size_t n_instances, double imbalance);

/// Seeded layered DAG plus a hierarchy-consistent dataset.
///
/// Every non-root feature gets 1..max_parents parents from shallower layers
/// and every root gets at least one child, so every feature lies on an edge.
/// Class signal is planted on the deeper half of the layers; instance values
/// are closed upwards over the DAG, which makes them consistent.
SynthData generate(const SynthConfig& config);

} // namespace hretan
