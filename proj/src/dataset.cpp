#include "hretan/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>
#include <set>

#include "hretan/error.hpp"
#include "hretan/random.hpp"

namespace hretan {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

bool blank(const std::string& line) {
    return std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

} // namespace

Dataset::Dataset(std::vector<std::string> features, std::array<std::string, 2> labels,
                 std::vector<Instance> instances)
    : features_(std::move(features)), labels_(std::move(labels)), instances_(std::move(instances)) {
    if (labels_[0] == labels_[1]) throw SchemaError("dataset needs two distinct class labels");
    if (labels_[1] < labels_[0]) std::swap(labels_[0], labels_[1]);
    for (std::size_t i = 0; i < features_.size(); ++i)
        if (!index_.emplace(features_[i], i).second)
            throw SchemaError("duplicate feature '" + features_[i] + "'");
    classes_.reserve(instances_.size());
    for (std::size_t i = 0; i < instances_.size(); ++i) {
        const auto& inst = instances_[i];
        if (inst.values.size() != features_.size())
            throw SchemaError("instance " + std::to_string(i) + " has " + std::to_string(inst.values.size()) +
                              " values, expected " + std::to_string(features_.size()));
        if (std::any_of(inst.values.begin(), inst.values.end(), [](std::uint8_t v) { return v > 1; }))
            throw SchemaError("instance " + std::to_string(i) + " has a non-binary value");
        classes_.push_back(class_index(inst.label));
    }
}

std::uint8_t Dataset::class_index(std::string_view label) const {
    if (label == labels_[0]) return 0;
    if (label == labels_[1]) return 1;
    throw SchemaError("unknown class label '" + std::string(label) + "'");
}

std::array<std::size_t, 2> Dataset::class_counts() const noexcept {
    std::array<std::size_t, 2> counts{0, 0};
    for (auto c : classes_) ++counts[c];
    return counts;
}

std::optional<std::size_t> Dataset::find(std::string_view feature) const {
    auto it = index_.find(std::string(feature));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

std::size_t Dataset::index_of(std::string_view feature) const {
    if (auto i = find(feature)) return *i;
    throw LookupError(std::string(feature));
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
    std::vector<Instance> picked;
    picked.reserve(indices.size());
    for (auto i : indices) picked.push_back(instances_.at(i));
    return Dataset(features_, labels_, std::move(picked));
}

Dataset load_dataset(std::istream& in) {
    std::string line;
    std::size_t row = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (blank(line)) continue;
        header = split_csv(line);
        break;
    }
    if (header.empty()) throw LoadError(LoadError::Code::EmptyDataset, 0, "dataset has no header");
    if (header.back() != "class")
        throw LoadError(LoadError::Code::Header, row, "last header column must be 'class'");
    header.pop_back();
    std::set<std::string> seen;
    for (const auto& f : header) {
        if (f.empty() || std::any_of(f.begin(), f.end(), [](unsigned char c) { return std::isspace(c) != 0; }))
            throw LoadError(LoadError::Code::Header, row, "invalid feature identifier '" + f + "'");
        if (!seen.insert(f).second)
            throw LoadError(LoadError::Code::Header, row, "duplicate feature '" + f + "'");
    }

    std::vector<Instance> instances;
    std::vector<std::string> labels;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (blank(line)) continue;
        auto fields = split_csv(line);
        if (fields.size() != header.size() + 1)
            throw LoadError(LoadError::Code::ColumnCount, row,
                            "expected " + std::to_string(header.size() + 1) + " columns, found " +
                                std::to_string(fields.size()));
        Instance inst;
        inst.values.reserve(header.size());
        for (std::size_t j = 0; j < header.size(); ++j) {
            if (fields[j] == "0") inst.values.push_back(0);
            else if (fields[j] == "1") inst.values.push_back(1);
            else
                throw LoadError(LoadError::Code::NonBinaryValue, row,
                                "feature '" + header[j] + "' has non-binary value '" + fields[j] + "'");
        }
        inst.label = std::move(fields.back());
        if (inst.label.empty()) throw LoadError(LoadError::Code::EmptyLabel, row, "empty class label");
        if (std::find(labels.begin(), labels.end(), inst.label) == labels.end()) {
            if (labels.size() == 2)
                throw LoadError(LoadError::Code::LabelCount, row,
                                "third distinct class label '" + inst.label + "'");
            labels.push_back(inst.label);
        }
        instances.push_back(std::move(inst));
    }
    if (instances.empty()) throw LoadError(LoadError::Code::EmptyDataset, 0, "dataset has no instances");
    if (labels.size() != 2)
        throw LoadError(LoadError::Code::LabelCount, 0, "dataset must contain exactly 2 class labels");
    return Dataset(std::move(header), {labels[0], labels[1]}, std::move(instances));
}

void write_dataset(std::ostream& out, const Dataset& ds) {
    for (const auto& f : ds.features()) out << f << ',';
    out << "class\n";
    for (const auto& inst : ds.instances()) {
        for (auto v : inst.values) out << (v ? '1' : '0') << ',';
        out << inst.label << '\n';
    }
}

std::vector<Violation> validate_consistency(const Dataset& ds, const ClosureTable& closure) {
    std::vector<std::size_t> dag_index(ds.num_features());
    for (std::size_t j = 0; j < ds.num_features(); ++j) {
        auto found = closure.find(ds.features()[j]);
        if (!found) throw SchemaError("dataset feature '" + ds.features()[j] + "' is not in the hierarchy");
        dag_index[j] = *found;
    }
    // Ancestors outside the dataset schema carry no value and cannot be violated.
    std::vector<std::vector<std::size_t>> ancestors_in_ds(ds.num_features());
    for (std::size_t j = 0; j < ds.num_features(); ++j)
        for (std::size_t k = 0; k < ds.num_features(); ++k)
            if (closure.is_ancestor(dag_index[k], dag_index[j])) ancestors_in_ds[j].push_back(k);

    std::vector<Violation> out;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto& v = ds[i].values;
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (!v[j]) continue;
            for (auto k : ancestors_in_ds[j])
                if (!v[k]) out.push_back({i, ds.features()[j], ds.features()[k]});
        }
    }
    return out;
}

std::vector<std::size_t> FoldAssignment::test_indices(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold_of.size(); ++i)
        if (fold_of[i] == fold) out.push_back(i);
    return out;
}

std::vector<std::size_t> FoldAssignment::train_indices(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold_of.size(); ++i)
        if (fold_of[i] != fold) out.push_back(i);
    return out;
}

FoldAssignment stratified_folds(const Dataset& ds, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw ConfigError("fold count must be at least 2");
    if (k > ds.size())
        throw ConfigError("fold count " + std::to_string(k) + " exceeds instance count " +
                          std::to_string(ds.size()));
    auto counts = ds.class_counts();
    if (counts[0] == 0 || counts[1] == 0) throw InsufficientDataError("stratified folds need both classes");

    FoldAssignment folds{std::vector<std::size_t>(ds.size()), k, seed};
    Rng rng(seed);
    std::size_t next_fold = 0;
    for (std::uint8_t c = 0; c < 2; ++c) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < ds.size(); ++i)
            if (ds.class_of(i) == c) members.push_back(i);
        rng.shuffle(std::span<std::size_t>(members));
        for (auto i : members) {
            folds.fold_of[i] = next_fold;
            next_fold = (next_fold + 1) % k;
        }
    }
    return folds;
}

Dataset restrict(const Dataset& ds, std::span<const std::size_t> keep) {
    for (std::size_t i = 0; i < keep.size(); ++i) {
        if (keep[i] >= ds.num_features()) throw LookupError("#" + std::to_string(keep[i]));
        if (i > 0 && keep[i] <= keep[i - 1]) throw ContractError("restrict indices must be strictly increasing");
    }
    std::vector<std::string> features;
    features.reserve(keep.size());
    for (auto j : keep) features.push_back(ds.features()[j]);
    std::vector<Instance> instances;
    instances.reserve(ds.size());
    for (const auto& inst : ds.instances()) instances.push_back(restrict(inst, keep));
    return Dataset(std::move(features), ds.labels(), std::move(instances));
}

Dataset restrict(const Dataset& ds, std::span<const std::string> keep) {
    std::vector<std::size_t> idx;
    idx.reserve(keep.size());
    for (const auto& name : keep) idx.push_back(ds.index_of(name));
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    return restrict(ds, std::span<const std::size_t>(idx));
}

Instance restrict(const Instance& inst, std::span<const std::size_t> keep) {
    Instance out;
    out.label = inst.label;
    out.values.reserve(keep.size());
    for (auto j : keep) {
        if (j >= inst.values.size()) throw LookupError("#" + std::to_string(j));
        out.values.push_back(inst.values[j]);
    }
    return out;
}

Instance restrict(const Instance& inst, const std::vector<std::string>& schema, std::span<const std::string> keep) {
    std::vector<std::size_t> idx;
    for (const auto& name : keep) {
        auto it = std::find(schema.begin(), schema.end(), name);
        if (it == schema.end()) throw LookupError(name);
        idx.push_back(static_cast<std::size_t>(it - schema.begin()));
    }
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    return restrict(inst, std::span<const std::size_t>(idx));
}

std::string resolve_positive_class(const Dataset& ds, const std::optional<std::string>& requested) {
    if (!requested) return ds.labels()[1];
    if (*requested != ds.labels()[0] && *requested != ds.labels()[1])
        throw ConfigError("positive class '" + *requested + "' is not a dataset label");
    return *requested;
}

} // namespace hretan
