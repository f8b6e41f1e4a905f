#include "hretan/structure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hretan/error.hpp"

namespace hretan {

FeatureRelations FeatureRelations::from_closure(const ClosureTable& closure, const std::vector<std::string>& features) {
    FeatureRelations rel;
    rel.n_ = features.size();
    std::vector<std::size_t> dag_index(rel.n_);
    for (std::size_t i = 0; i < rel.n_; ++i) {
        auto found = closure.find(features[i]);
        if (!found) throw SchemaError("feature '" + features[i] + "' is not in the hierarchy");
        dag_index[i] = *found;
    }
    rel.matrix_ = BitMatrix(rel.n_, rel.n_);
    rel.relatives_.assign(rel.n_, {});
    for (std::size_t i = 0; i < rel.n_; ++i) {
        for (std::size_t j = 0; j < rel.n_; ++j) {
            if (i != j && closure.related(dag_index[i], dag_index[j])) {
                rel.matrix_.set(i, j);
                rel.relatives_[i].push_back(j);
            }
        }
    }
    return rel;
}

FeatureRelations FeatureRelations::flat(std::size_t n_features) {
    FeatureRelations rel;
    rel.n_ = n_features;
    rel.relatives_.assign(n_features, {});
    return rel;
}

PairStatistics::PairStatistics(const Dataset& train)
    : n_(train.size()), n_features_(train.num_features()) {
    class_count_ = train.class_counts();
    for (int c = 0; c < 2; ++c) {
        ones_[c] = BitMatrix(n_features_, class_count_[c]);
        ones_count_[c].assign(n_features_, 0);
    }
    std::array<std::size_t, 2> slot{0, 0};
    for (std::size_t i = 0; i < n_; ++i) {
        const auto c = train.class_of(i);
        const auto& v = train[i].values;
        for (std::size_t f = 0; f < n_features_; ++f) {
            if (v[f]) {
                ones_[c].set(f, slot[c]);
                ++ones_count_[c][f];
            }
        }
        ++slot[c];
    }
}

JointCounts PairStatistics::joint(std::size_t i, std::size_t j) const {
    JointCounts n{};
    for (int c = 0; c < 2; ++c) {
        const std::size_t n11 = popcount_and(ones_[c].row(i), ones_[c].row(j));
        const std::size_t n1x = ones_count_[c][i];
        const std::size_t nx1 = ones_count_[c][j];
        n[1][1][c] = n11;
        n[1][0][c] = n1x - n11;
        n[0][1][c] = nx1 - n11;
        n[0][0][c] = class_count_[c] - n1x - nx1 + n11;
    }
    return n;
}

double mutual_information_bits(const JointCounts& counts, MiMode mode, double pseudocount) {
    double p[2][2][2];
    double total = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) {
                p[a][b][c] = static_cast<double>(counts[a][b][c]) + pseudocount;
                total += p[a][b][c];
            }
    if (total <= 0.0) throw InsufficientDataError("mutual information of an empty table");
    for (auto& plane : p)
        for (auto& row : plane)
            for (auto& cell : row) cell /= total;

    double mi = 0.0;
    if (mode == MiMode::Conditional) {
        double pac[2][2] = {}, pbc[2][2] = {}, pc[2] = {};
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int c = 0; c < 2; ++c) {
                    pac[a][c] += p[a][b][c];
                    pbc[b][c] += p[a][b][c];
                    pc[c] += p[a][b][c];
                }
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int c = 0; c < 2; ++c) {
                    const double cell = p[a][b][c];
                    if (cell > 0.0) mi += cell * std::log2(cell * pc[c] / (pac[a][c] * pbc[b][c]));
                }
    } else {
        double pab[2][2] = {}, pa[2] = {}, pb[2] = {};
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (int c = 0; c < 2; ++c) {
                    pab[a][b] += p[a][b][c];
                    pa[a] += p[a][b][c];
                    pb[b] += p[a][b][c];
                }
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                if (pab[a][b] > 0.0) mi += pab[a][b] * std::log2(pab[a][b] / (pa[a] * pb[b]));
    }
    // Rounding can leave a tiny negative for independent variables.
    return std::max(mi, 0.0);
}

std::vector<Edge> generate_edges(std::size_t n_features) {
    std::vector<Edge> edges;
    if (n_features < 2) return edges;
    edges.reserve(n_features * (n_features - 1) / 2);
    for (std::size_t a = 0; a < n_features; ++a)
        for (std::size_t b = a + 1; b < n_features; ++b) edges.push_back({a, b});
    return edges;
}

EdgeSet filter_candidates(std::span<const Edge> edges, const Instance& inst, CandidateMode mode,
                          const FeatureRelations& relations) {
    EdgeSet out;
    for (const auto& e : edges) {
        if (e.a >= inst.values.size() || e.b >= inst.values.size())
            throw ContractError("instance has no value for edge endpoint");
        const bool va = inst.values[e.a] != 0;
        const bool vb = inst.values[e.b] != 0;
        bool keep = true;
        switch (mode) {
        case CandidateMode::All: break;
        case CandidateMode::Mix: keep = va || vb; break;
        case CandidateMode::Plus: keep = va && vb; break;
        }
        if (keep && relations.related(e.a, e.b)) keep = false;
        if (keep) out.edges.push_back(e);
    }
    out.weight.assign(out.edges.size(), std::nullopt);
    out.status.assign(out.edges.size(), EdgeStatus::Available);
    return out;
}

EdgeSet score_edges(EdgeSet cands, const PairStatistics& stats, MiMode mode) {
    if (stats.num_instances() == 0) throw InsufficientDataError("cannot score edges on an empty training set");
    cands.weight.resize(cands.edges.size());
    for (std::size_t i = 0; i < cands.edges.size(); ++i) {
        const auto& e = cands.edges[i];
        if (e.a >= stats.num_features() || e.b >= stats.num_features())
            throw ContractError("edge endpoint outside the training schema");
        cands.weight[i] = mutual_information_bits(stats.joint(e.a, e.b), mode);
    }
    return cands;
}

EdgeSet score_edges(EdgeSet cands, const Dataset& train, MiMode mode) {
    if (train.empty()) throw InsufficientDataError("cannot score edges on an empty training set");
    return score_edges(std::move(cands), PairStatistics(train), mode);
}

double LearnedForest::total_weight() const noexcept {
    return std::accumulate(selected_weights.begin(), selected_weights.end(), 0.0);
}

namespace {

class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) {
        std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    bool unite(std::size_t x, std::size_t y) {
        x = find(x);
        y = find(y);
        if (x == y) return false;
        if (rank_[x] < rank_[y]) std::swap(x, y);
        parent_[y] = x;
        if (rank_[x] == rank_[y]) ++rank_[x];
        return true;
    }

private:
    std::vector<std::size_t> parent_;
    std::vector<unsigned char> rank_;
};

} // namespace

LearnedForest hre_mst(EdgeSet& cands, const FeatureRelations& relations) {
    const std::size_t m = cands.edges.size();
    if (cands.weight.size() != m || cands.status.size() != m)
        throw ContractError("edge set vectors are not parallel");
    for (std::size_t i = 0; i < m; ++i) {
        if (!cands.weight[i]) throw ContractError("candidate edge has no weight");
        if (!std::isfinite(*cands.weight[i]) || *cands.weight[i] < 0.0)
            throw ContractError("candidate edge weight must be finite and non-negative");
        if (cands.status[i] != EdgeStatus::Available) throw ContractError("candidate edge is not Available");
    }

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        if (*cands.weight[x] != *cands.weight[y]) return *cands.weight[x] > *cands.weight[y];
        return cands.edges[x] < cands.edges[y];
    });

    std::size_t n = relations.size();
    for (const auto& e : cands.edges) n = std::max(n, e.b + 1);
    DisjointSets sets(n);
    std::vector<bool> blocked(n, false);
    std::vector<bool> in_forest(n, false);

    LearnedForest forest;
    for (auto idx : order) {
        const auto& e = cands.edges[idx];
        if (blocked[e.a] || blocked[e.b] || !sets.unite(e.a, e.b)) {
            cands.status[idx] = EdgeStatus::Removed;
            continue;
        }
        forest.selected_edges.push_back(e);
        forest.selected_weights.push_back(*cands.weight[idx]);
        in_forest[e.a] = in_forest[e.b] = true;
        if (!relations.is_flat()) {
            for (auto r : relations.relatives(e.a)) blocked[r] = true;
            for (auto r : relations.relatives(e.b)) blocked[r] = true;
        }
    }
    for (std::size_t f = 0; f < n; ++f)
        if (in_forest[f]) forest.features.push_back(f);
    return root_forest(std::move(forest));
}

LearnedForest root_forest(LearnedForest forest) {
    std::map<std::size_t, std::vector<std::size_t>> adjacency;
    for (auto f : forest.features) adjacency[f];
    for (const auto& e : forest.selected_edges) {
        adjacency[e.a].push_back(e.b);
        adjacency[e.b].push_back(e.a);
    }
    forest.features.clear();
    for (auto& [f, nbrs] : adjacency) {
        std::sort(nbrs.begin(), nbrs.end());
        forest.features.push_back(f);
    }

    forest.parent_of.clear();
    forest.roots.clear();
    // std::map iterates in ascending index, so the first unseen feature of a component is its root.
    for (const auto& [start, unused] : adjacency) {
        if (forest.parent_of.count(start)) continue;
        forest.roots.push_back(start);
        forest.parent_of[start] = std::nullopt;
        std::vector<std::size_t> queue{start};
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const auto cur = queue[head];
            for (auto nb : adjacency[cur]) {
                if (forest.parent_of.count(nb)) continue;
                forest.parent_of[nb] = cur;
                queue.push_back(nb);
            }
        }
    }
    return forest;
}

} // namespace hretan
