#pragma once

#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hretan/dataset.hpp"
#include "hretan/hierarchy.hpp"
#include "hretan/random.hpp"

namespace fixtures {

/// Six-feature hierarchy of the running example: C -> E -> F, B -> F, D -> A.
inline hretan::FeatureDag running_example_dag() {
    return hretan::FeatureDag::from_edges({"F", "B", "E", "C", "A", "D"},
                                          {{"E", "F"}, {"B", "F"}, {"C", "E"}, {"D", "A"}});
}

/// Instance with C = E = F = 1 and A = B = D = 0, schema F,B,E,C,A,D.
inline hretan::Instance running_example_instance(std::string label = "pro") {
    return {{1, 0, 1, 1, 0, 0}, std::move(label)};
}

inline const char* go_fragment_tsv() {
    return "# example GO biological-process fragment\n"
           "GO:0009987\tGO:0008150\n"
           "GO:0008152\tGO:0008150\n"
           "GO:0044237\tGO:0009987\n"
           "GO:0044237\tGO:0008152\n"
           "GO:0009056\tGO:0008152\n"
           "GO:0071704\tGO:0008152\n";
}

inline hretan::FeatureDag parse_dag(const std::string& text) {
    std::istringstream in(text);
    return hretan::load_hierarchy(in);
}

inline hretan::Dataset parse_dataset(const std::string& text) {
    std::istringstream in(text);
    return hretan::load_dataset(in);
}

/// Random DAG on n nodes: each node may take parents only among lower indices.
inline std::pair<std::size_t, std::vector<std::pair<std::size_t, std::size_t>>> random_dag(hretan::Rng& rng,
                                                                                         std::size_t n,
                                                                                         double edge_p) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t c = 1; c < n; ++c)
        for (std::size_t p = 0; p < c; ++p)
            if (rng.bernoulli(edge_p)) edges.emplace_back(c, p);
    return {n, edges};
}

inline std::vector<std::string> numbered(std::size_t n, const std::string& prefix = "f") {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

inline hretan::FeatureDag named_dag(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    const auto names = numbered(n);
    std::vector<std::pair<std::string, std::string>> named;
    for (auto [c, p] : edges) named.emplace_back(names[c], names[p]);
    return hretan::FeatureDag::from_edges(names, named);
}

/// Uniform random binary dataset with both labels present.
inline hretan::Dataset random_dataset(hretan::Rng& rng, std::size_t n_instances, std::size_t n_features,
                                      double p_one = 0.5) {
    std::vector<hretan::Instance> rows;
    for (std::size_t i = 0; i < n_instances; ++i) {
        hretan::Instance inst;
        for (std::size_t j = 0; j < n_features; ++j) inst.values.push_back(rng.bernoulli(p_one) ? 1 : 0);
        inst.label = (i < 2) ? (i == 0 ? "anti" : "pro") : (rng.bernoulli(0.5) ? "pro" : "anti");
        rows.push_back(std::move(inst));
    }
    return hretan::Dataset(numbered(n_features), {"anti", "pro"}, std::move(rows));
}

} // namespace fixtures
