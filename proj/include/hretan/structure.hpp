#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hretan/bitset.hpp"
#include "hretan/dataset.hpp"
#include "hretan/hierarchy.hpp"

namespace hretan {

/// Unordered feature pair stored with a < b (indices into the dataset schema).
struct Edge {
    std::size_t a;
    std::size_t b;

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

enum class EdgeStatus : std::uint8_t { Available, Removed };

/// Which edges an instance admits as candidates.
enum class CandidateMode : std::uint8_t {
    All,   ///< every pair
    Mix,   ///< at least one endpoint positive in the instance
    Plus,  ///< both endpoints positive in the instance
};

enum class MiMode : std::uint8_t { Conditional, Unconditional };

/// Candidate edges with per-edge weight and selection status. The three
/// vectors are parallel; an empty optional weight means "not scored yet".
struct EdgeSet {
    std::vector<Edge> edges;
    std::vector<std::optional<double>> weight;
    std::vector<EdgeStatus> status;

    std::size_t size() const noexcept { return edges.size(); }
    bool empty() const noexcept { return edges.empty(); }
};

/// Hierarchical relations projected onto a dataset's feature schema.
/// `flat(n)` has no relations, which turns HRE-MST into a plain maximum
/// spanning forest.
class FeatureRelations {
public:
    FeatureRelations() = default;
    /// Throws SchemaError if a feature is absent from the closure.
    static FeatureRelations from_closure(const ClosureTable& closure, const std::vector<std::string>& features);
    static FeatureRelations flat(std::size_t n_features);

    std::size_t size() const noexcept { return n_; }
    bool related(std::size_t i, std::size_t j) const noexcept { return matrix_.rows() && matrix_.test(i, j); }
    /// Ancestors and descendants of i within the schema, ascending.
    const std::vector<std::size_t>& relatives(std::size_t i) const { return relatives_[i]; }
    bool is_flat() const noexcept { return matrix_.rows() == 0; }

private:
    std::size_t n_ = 0;
    BitMatrix matrix_;
    std::vector<std::vector<std::size_t>> relatives_;
};

/// Per-class instance masks over a training set, so pair counts reduce to
/// popcounts.
class PairStatistics {
public:
    explicit PairStatistics(const Dataset& train);

    std::size_t num_instances() const noexcept { return n_; }
    std::size_t num_features() const noexcept { return n_features_; }
    /// counts[a][b][c] for feature values a, b and class c.
    std::array<std::array<std::array<std::size_t, 2>, 2>, 2> joint(std::size_t i, std::size_t j) const;

private:
    std::size_t n_ = 0;
    std::size_t n_features_ = 0;
    std::array<std::size_t, 2> class_count_{};
    std::array<BitMatrix, 2> ones_;  // per class: feature x instance-in-class
    std::array<std::vector<std::size_t>, 2> ones_count_;
};

using JointCounts = std::array<std::array<std::array<std::size_t, 2>, 2>, 2>;

/// I(Xa;Xb|C) (or I(Xa;Xb)) in bits from counts n[a][b][c] with
/// `pseudocount` added to every one of the 8 cells.
double mutual_information_bits(const JointCounts& counts, MiMode mode, double pseudocount = 1.0);

/// All n(n-1)/2 pairs in canonical (a, b) order.
std::vector<Edge> generate_edges(std::size_t n_features);

/// Keeps edges admitted by `mode` for `inst` and drops pairs related in
/// `relations`. Survivors are Available with unassigned weight.
EdgeSet filter_candidates(std::span<const Edge> edges, const Instance& inst, CandidateMode mode,
                          const FeatureRelations& relations);

EdgeSet score_edges(EdgeSet cands, const PairStatistics& stats, MiMode mode = MiMode::Conditional);
/// Throws InsufficientDataError on an empty training set.
EdgeSet score_edges(EdgeSet cands, const Dataset& train, MiMode mode = MiMode::Conditional);

/// Tree-structured feature representation learned from candidate edges.
struct LearnedForest {
    std::vector<Edge> selected_edges;        ///< acceptance order
    std::vector<double> selected_weights;    ///< parallel to selected_edges
    std::vector<std::size_t> features;       ///< X', ascending schema index
    std::map<std::size_t, std::optional<std::size_t>> parent_of;  ///< filled by root_forest
    std::vector<std::size_t> roots;          ///< ascending

    double total_weight() const noexcept;
    friend bool operator==(const LearnedForest&, const LearnedForest&) = default;
};

/// Greedy maximum-weight spanning forest with hierarchical blocking.
///
/// Candidates are scanned by descending weight (ties by canonical edge order).
/// An edge is accepted when neither endpoint is blocked and it joins two
/// different components; accepting (a, b) blocks every relative of a and b.
/// Statuses in `cands` become Available for accepted edges and Removed for
/// the rest. The result is rooted. Throws ContractError if a weight is unset.
LearnedForest hre_mst(EdgeSet& cands, const FeatureRelations& relations);

/// Roots each component at its smallest feature index and directs edges away
/// from it breadth-first, visiting neighbours in ascending index.
LearnedForest root_forest(LearnedForest forest);

} // namespace hretan
