#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hretan/hierarchy.hpp"

namespace hretan {

/// One row of a binary feature matrix. `values` is aligned to the owning
/// dataset's (or caller-supplied) feature schema.
struct Instance {
    std::vector<std::uint8_t> values;
    std::string label;

    friend bool operator==(const Instance&, const Instance&) = default;
};

/// Binary-labelled dataset over binary features.
///
/// The label pair is part of the schema: subsets produced by `subset` keep
/// both labels even if one class no longer occurs.
class Dataset {
public:
    Dataset() = default;
    /// Validates every instance against the schema. `labels` need not be sorted.
    Dataset(std::vector<std::string> features, std::array<std::string, 2> labels,
            std::vector<Instance> instances);

    std::size_t size() const noexcept { return instances_.size(); }
    bool empty() const noexcept { return instances_.empty(); }
    std::size_t num_features() const noexcept { return features_.size(); }
    const std::vector<std::string>& features() const noexcept { return features_; }
    /// Sorted ascending.
    const std::array<std::string, 2>& labels() const noexcept { return labels_; }
    const std::vector<Instance>& instances() const noexcept { return instances_; }
    const Instance& operator[](std::size_t i) const { return instances_[i]; }

    /// 0 or 1 (index into labels()).
    std::uint8_t class_of(std::size_t i) const { return classes_[i]; }
    std::uint8_t class_index(std::string_view label) const;
    std::array<std::size_t, 2> class_counts() const noexcept;

    std::optional<std::size_t> find(std::string_view feature) const;
    std::size_t index_of(std::string_view feature) const;

    /// Instances at `indices`, in that order.
    Dataset subset(std::span<const std::size_t> indices) const;

    friend bool operator==(const Dataset& a, const Dataset& b) {
        return a.features_ == b.features_ && a.labels_ == b.labels_ && a.instances_ == b.instances_;
    }

private:
    std::vector<std::string> features_;
    std::unordered_map<std::string, std::size_t> index_;
    std::array<std::string, 2> labels_;
    std::vector<Instance> instances_;
    std::vector<std::uint8_t> classes_;
};

/// Header `f1,...,fn,class`, then one row per instance with 0/1 values.
Dataset load_dataset(std::istream& in);
void write_dataset(std::ostream& out, const Dataset& ds);

/// An instance with V(feature)=1 but V(ancestor)=0.
struct Violation {
    std::size_t instance;
    std::string feature;
    std::string ancestor;

    friend bool operator==(const Violation&, const Violation&) = default;
};

/// Lists every hierarchy-consistency violation. Throws SchemaError when a
/// dataset feature is missing from the hierarchy.
std::vector<Violation> validate_consistency(const Dataset& ds, const ClosureTable& closure);

struct FoldAssignment {
    std::vector<std::size_t> fold_of;
    std::size_t k = 0;
    std::uint64_t seed = 0;

    std::vector<std::size_t> test_indices(std::size_t fold) const;
    std::vector<std::size_t> train_indices(std::size_t fold) const;

    friend bool operator==(const FoldAssignment&, const FoldAssignment&) = default;
};

/// Seeded per-class shuffle followed by one round-robin pass that continues
/// across classes, so both per-class and total fold sizes differ by at most 1.
FoldAssignment stratified_folds(const Dataset& ds, std::size_t k, std::uint64_t seed);

/// Projection onto `keep` (any order); output keeps the dataset's feature
/// order. Throws LookupError for unknown names.
Dataset restrict(const Dataset& ds, std::span<const std::string> keep);
/// Index form; `keep` must be strictly increasing.
Dataset restrict(const Dataset& ds, std::span<const std::size_t> keep);

Instance restrict(const Instance& inst, const std::vector<std::string>& schema,
                  std::span<const std::string> keep);
Instance restrict(const Instance& inst, std::span<const std::size_t> keep);

/// Lexicographically greater label, unless `requested` names one of the two.
std::string resolve_positive_class(const Dataset& ds, const std::optional<std::string>& requested);

} // namespace hretan
