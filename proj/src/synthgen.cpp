#include "hretan/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "hretan/error.hpp"
#include "hretan/random.hpp"

namespace hretan {

namespace {

std::string feature_name(std::size_t i, std::size_t width) {
    std::string digits = std::to_string(i);
    if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
    return "T" + digits;
}

// Roots get a small share; deeper layers grow linearly.
std::vector<std::size_t> layer_sizes(std::size_t n, std::size_t depth) {
    std::vector<std::size_t> sizes(depth, 1);
    std::size_t roots = std::clamp<std::size_t>(n / 20, 1, 3);
    std::size_t remaining = n - depth;
    std::size_t extra_roots = std::min(roots - 1, remaining);
    sizes[0] += extra_roots;
    remaining -= extra_roots;

    double total_weight = 0.0;
    for (std::size_t l = 1; l < depth; ++l) total_weight += static_cast<double>(l);
    std::size_t assigned = 0;
    for (std::size_t l = 1; l < depth; ++l) {
        auto share = static_cast<std::size_t>(std::floor(static_cast<double>(remaining) * static_cast<double>(l) / total_weight));
        sizes[l] += share;
        assigned += share;
    }
    sizes[depth - 1] += remaining - assigned;
    // Layer 1 must be able to give every root a child.
    while (sizes[1] < sizes[0]) {
        --sizes[0];
        ++sizes[1];
    }
    return sizes;
}

} // namespace

std::pair<std::size_t, std::size_t> synth_class_sizes(std::size_t n_instances, double imbalance) {
    if (!(imbalance >= 0.0 && imbalance < 1.0)) throw ConfigError("imbalance must lie in [0, 1)");
    const double n = static_cast<double>(n_instances);
    std::size_t best_minor = 0;
    double best_err = 1e300;
    for (std::size_t minor = 1; minor * 2 <= n_instances; ++minor) {
        const std::size_t major = n_instances - minor;
        const double err = std::abs(1.0 - static_cast<double>(minor) / static_cast<double>(major) - imbalance);
        if (err < best_err) {
            best_err = err;
            best_minor = minor;
        }
    }
    if (best_minor == 0) throw ConfigError("imbalance needs at least 2 instances");
    // Adjacent splits lie up to 4/n apart in I, so any target inside the
    // attainable range takes its nearest split; only targets more than 1/n
    // outside that range are rejected.
    const double half = static_cast<double>(n_instances / 2);
    const double lowest = 1.0 - half / (n - half);
    const double highest = 1.0 - 1.0 / (n - 1.0);
    if (imbalance < lowest - 1.0 / n || imbalance > highest + 1.0 / n)
        throw ConfigError("imbalance " + std::to_string(imbalance) + " is unreachable with " +
                          std::to_string(n_instances) + " instances");
    return {best_minor, n_instances - best_minor};
}

SynthData generate(const SynthConfig& config) {
    if (config.n_features < 2) throw ConfigError("synthetic data needs at least 2 features");
    if (config.n_instances < 4) throw ConfigError("synthetic data needs at least 4 instances");
    if (config.max_parents < 1) throw ConfigError("max_parents must be at least 1");
    if (!(config.dependence_strength >= 0.0 && config.dependence_strength <= 1.0))
        throw ConfigError("dependence_strength must lie in [0, 1]");
    const auto [n_minor, n_major] = synth_class_sizes(config.n_instances, config.imbalance);

    Rng rng(config.seed);
    const std::size_t n = config.n_features;
    const std::size_t depth = std::clamp<std::size_t>(config.depth, 2, n);
    const auto sizes = layer_sizes(n, depth);

    const std::size_t width = std::to_string(n - 1).size();
    std::vector<std::string> names(n);
    for (std::size_t i = 0; i < n; ++i) names[i] = feature_name(i, width);

    std::vector<std::size_t> layer_start(depth + 1, 0);
    for (std::size_t l = 0; l < depth; ++l) layer_start[l + 1] = layer_start[l] + sizes[l];
    std::vector<std::size_t> layer_of(n);
    for (std::size_t l = 0; l < depth; ++l)
        for (std::size_t i = layer_start[l]; i < layer_start[l + 1]; ++i) layer_of[i] = l;

    std::vector<std::vector<std::size_t>> parents(n);
    std::vector<std::pair<std::string, std::string>> edges;
    for (std::size_t i = layer_start[1]; i < n; ++i) {
        const std::size_t l = layer_of[i];
        auto& ps = parents[i];
        if (l == 1 && i - layer_start[1] < sizes[0]) ps.push_back(i - layer_start[1]);
        else ps.push_back(layer_start[l - 1] + rng.below(sizes[l - 1]));
        const std::size_t want = 1 + rng.below(config.max_parents);
        const std::size_t pool = layer_start[l];
        for (std::size_t tries = 0; ps.size() < want && tries < 4 * config.max_parents; ++tries) {
            const std::size_t p = rng.below(pool);
            if (std::find(ps.begin(), ps.end(), p) == ps.end()) ps.push_back(p);
        }
        std::sort(ps.begin(), ps.end());
        for (auto p : ps) edges.emplace_back(names[i], names[p]);
    }
    FeatureDag dag = FeatureDag::from_edges(names, edges);

    // Deeper half of the layers carries the class signal.
    const std::size_t signal_layer = std::max<std::size_t>(1, depth / 2);
    struct Signal {
        double base;
        int favoured;
    };
    std::vector<Signal> signal(n, Signal{0.0, 0});
    int alternate = 0;
    for (std::size_t i = layer_start[signal_layer]; i < n; ++i) {
        signal[i].base = rng.uniform(0.03, 0.12);
        signal[i].favoured = alternate;
        alternate ^= 1;
    }
    constexpr double lift = 0.5;

    // 1 = positive (minority) class.
    std::vector<int> classes(config.n_instances, 0);
    std::fill(classes.begin(), classes.begin() + static_cast<std::ptrdiff_t>(n_minor), 1);
    rng.shuffle(std::span<int>(classes));

    std::vector<Instance> instances;
    instances.reserve(config.n_instances);
    for (auto cls : classes) {
        Instance inst;
        inst.values.assign(n, 0);
        inst.label = cls ? kSynthPositiveLabel : kSynthNegativeLabel;
        for (std::size_t i = layer_start[signal_layer]; i < n; ++i) {
            double p = signal[i].base;
            if (signal[i].favoured == cls) p += config.dependence_strength * lift;
            if (rng.bernoulli(p)) inst.values[i] = 1;
        }
        // Parents have smaller indices, so one descending sweep closes upwards.
        for (std::size_t i = n; i-- > 0;)
            if (inst.values[i])
                for (auto p : parents[i]) inst.values[p] = 1;
        instances.push_back(std::move(inst));
    }
    Dataset ds(names, {kSynthNegativeLabel, kSynthPositiveLabel}, std::move(instances));
    return {std::move(dag), std::move(ds)};
}

} // namespace hretan
