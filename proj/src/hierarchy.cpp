#include "hretan/hierarchy.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>
#include <set>

#include "hretan/error.hpp"

namespace hretan {

namespace {

bool valid_identifier(std::string_view id) {
    if (id.empty()) return false;
    return std::none_of(id.begin(), id.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

} // namespace

std::size_t FeatureDag::intern(const std::string& name) {
    if (!valid_identifier(name)) throw SchemaError("invalid feature identifier '" + name + "'");
    auto [it, inserted] = index_.try_emplace(name, features_.size());
    if (inserted) features_.push_back(name);
    return it->second;
}

FeatureDag FeatureDag::from_edges(const std::vector<std::string>& features,
                                  const std::vector<std::pair<std::string, std::string>>& edges) {
    FeatureDag dag;
    for (const auto& f : features) dag.intern(f);
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& [child, parent] : edges) {
        auto c = dag.intern(child);
        auto p = dag.intern(parent);
        if (seen.emplace(c, p).second) dag.edges_.push_back({c, p});
    }
    dag.finalize();
    return dag;
}

void FeatureDag::finalize() {
    const auto n = features_.size();
    parents_.assign(n, {});
    children_.assign(n, {});
    for (const auto& e : edges_) {
        if (e.child == e.parent) throw CycleError(features_[e.child]);
        parents_[e.child].push_back(e.parent);
        children_[e.parent].push_back(e.child);
    }
    for (auto& v : parents_) std::sort(v.begin(), v.end());
    for (auto& v : children_) std::sort(v.begin(), v.end());

    // Kahn's algorithm from the roots downwards.
    std::vector<std::size_t> pending(n);
    for (std::size_t i = 0; i < n; ++i) pending[i] = parents_[i].size();
    topo_.clear();
    topo_.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        if (pending[i] == 0) topo_.push_back(i);
    for (std::size_t head = 0; head < topo_.size(); ++head) {
        for (auto c : children_[topo_[head]])
            if (--pending[c] == 0) topo_.push_back(c);
    }
    if (topo_.size() == n) return;

    // Every leftover node has a leftover parent; walking parents must revisit a node on a cycle.
    std::size_t cur = 0;
    while (pending[cur] == 0) ++cur;
    std::vector<bool> visited(n, false);
    while (!visited[cur]) {
        visited[cur] = true;
        auto it = std::find_if(parents_[cur].begin(), parents_[cur].end(),
                               [&](std::size_t p) { return pending[p] != 0; });
        cur = *it;
    }
    throw CycleError(features_[cur]);
}

std::optional<std::size_t> FeatureDag::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t FeatureDag::index_of(std::string_view name) const {
    if (auto i = find(name)) return *i;
    throw LookupError(std::string(name));
}

FeatureDag load_hierarchy(std::istream& in) {
    std::vector<std::pair<std::string, std::string>> edges;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c) != 0; }))
            continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
            throw ParseError(lineno, "expected exactly 2 tab-separated fields");
        std::string child = line.substr(0, tab);
        std::string parent = line.substr(tab + 1);
        if (!valid_identifier(child) || !valid_identifier(parent))
            throw ParseError(lineno, "identifiers must be non-empty and contain no whitespace");
        edges.emplace_back(std::move(child), std::move(parent));
    }
    return FeatureDag::from_edges({}, edges);
}

void write_hierarchy(std::ostream& out, const FeatureDag& dag) {
    for (const auto& e : dag.parent_edges())
        out << dag.features()[e.child] << '\t' << dag.features()[e.parent] << '\n';
}

ClosureTable::ClosureTable(const FeatureDag& dag)
    : names_(dag.features()), ancestors_(dag.size(), dag.size()), descendants_(dag.size(), dag.size()) {
    for (std::size_t i = 0; i < names_.size(); ++i) index_.emplace(names_[i], i);
    // Parents come first in topological order, so their rows are complete when read.
    for (auto x : dag.topological_order()) {
        for (auto p : dag.parents(x)) {
            ancestors_.set(x, p);
            ancestors_.or_row(x, p);
        }
    }
    for (std::size_t x = 0; x < names_.size(); ++x)
        for (auto y : ancestors_.members(x)) descendants_.set(y, x);
}

std::optional<std::size_t> ClosureTable::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t ClosureTable::index_of(std::string_view name) const {
    if (auto i = find(name)) return *i;
    throw LookupError(std::string(name));
}

std::vector<std::string> ClosureTable::ancestor_names(std::string_view x) const {
    std::vector<std::string> out;
    for (auto i : ancestors(index_of(x))) out.push_back(names_[i]);
    return out;
}

std::vector<std::string> ClosureTable::descendant_names(std::string_view x) const {
    std::vector<std::string> out;
    for (auto i : descendants(index_of(x))) out.push_back(names_[i]);
    return out;
}

bool is_hier_related(const ClosureTable& closure, std::string_view x, std::string_view y) {
    auto i = closure.index_of(x);
    auto j = closure.index_of(y);
    return i != j && closure.related(i, j);
}

} // namespace hretan
