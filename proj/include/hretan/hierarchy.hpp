#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hretan/bitset.hpp"

namespace hretan {

/// Directed child -> parent edge between two feature indices.
struct ParentEdge {
    std::size_t child;
    std::size_t parent;

    friend bool operator==(const ParentEdge&, const ParentEdge&) = default;
};

/// An is-a feature hierarchy. Immutable after construction; construction
/// validates identifiers and acyclicity.
class FeatureDag {
public:
    FeatureDag() = default;

    /// Builds a DAG from named edges. Features are ordered by first appearance
    /// in `features`, then in `edges`. Duplicate edges collapse.
    /// Throws ParseError on bad identifiers and CycleError on cycles.
    static FeatureDag from_edges(const std::vector<std::string>& features,
                                 const std::vector<std::pair<std::string, std::string>>& edges);

    std::size_t size() const noexcept { return features_.size(); }
    const std::vector<std::string>& features() const noexcept { return features_; }
    const std::vector<ParentEdge>& parent_edges() const noexcept { return edges_; }
    const std::vector<std::size_t>& parents(std::size_t i) const { return parents_[i]; }
    const std::vector<std::size_t>& children(std::size_t i) const { return children_[i]; }

    /// Parents always precede children.
    const std::vector<std::size_t>& topological_order() const noexcept { return topo_; }

    std::optional<std::size_t> find(std::string_view name) const;
    /// Throws LookupError for unknown names.
    std::size_t index_of(std::string_view name) const;

private:
    std::size_t intern(const std::string& name);
    void finalize();

    std::vector<std::string> features_;
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<ParentEdge> edges_;
    std::vector<std::vector<std::size_t>> parents_;
    std::vector<std::vector<std::size_t>> children_;
    std::vector<std::size_t> topo_;
};

/// Reads `child<TAB>parent` lines. '#' lines and blank lines are skipped.
FeatureDag load_hierarchy(std::istream& in);
/// Writes the edge list in load_hierarchy's format.
void write_hierarchy(std::ostream& out, const FeatureDag& dag);

/// Strict transitive ancestor/descendant sets for every DAG feature.
class ClosureTable {
public:
    ClosureTable() = default;
    explicit ClosureTable(const FeatureDag& dag);

    std::size_t size() const noexcept { return names_.size(); }
    const std::vector<std::string>& features() const noexcept { return names_; }
    std::optional<std::size_t> find(std::string_view name) const;
    std::size_t index_of(std::string_view name) const;

    /// y is a strict ancestor of x.
    bool is_ancestor(std::size_t y, std::size_t x) const noexcept { return ancestors_.test(x, y); }

    std::vector<std::size_t> ancestors(std::size_t x) const { return ancestors_.members(x); }
    std::vector<std::size_t> descendants(std::size_t x) const { return descendants_.members(x); }
    std::vector<std::string> ancestor_names(std::string_view x) const;
    std::vector<std::string> descendant_names(std::string_view x) const;

    bool related(std::size_t x, std::size_t y) const noexcept {
        return ancestors_.test(x, y) || ancestors_.test(y, x);
    }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, std::size_t> index_;
    BitMatrix ancestors_;
    BitMatrix descendants_;
};

inline ClosureTable build_closure(const FeatureDag& dag) { return ClosureTable(dag); }

/// True iff one feature is a strict ancestor of the other. Throws LookupError
/// for unknown names.
bool is_hier_related(const ClosureTable& closure, std::string_view x, std::string_view y);

} // namespace hretan
