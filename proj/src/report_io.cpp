#include "hretan/report_io.hpp"

#include <cstdio>

#include "hretan/error.hpp"

namespace hretan {

using nlohmann::json;

json to_json(const EvalReport& report) {
    json per_fold = json::array();
    for (const auto& c : report.per_fold) per_fold.push_back({{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn}});
    return {
        {"spec_version", kReportFormatVersion},
        {"algorithm", std::string(algorithm_name(report.algorithm))},
        {"dataset", report.dataset},
        {"positive_class", report.positive_class},
        {"seed", report.seed},
        {"folds", report.folds},
        {"per_fold", per_fold},
        {"sensitivity", report.sensitivity},
        {"specificity", report.specificity},
        {"gmean", report.gmean},
        {"sensitivity_se", report.sensitivity_se},
        {"specificity_se", report.specificity_se},
        {"imbalance_degree", report.imbalance_degree},
    };
}

EvalReport report_from_json(const json& j) {
    try {
        EvalReport r;
        const auto name = j.at("algorithm").get<std::string>();
        auto algo = parse_algorithm(name);
        if (!algo) throw SchemaError("unknown algorithm '" + name + "' in report");
        r.algorithm = *algo;
        r.dataset = j.at("dataset").get<std::string>();
        r.positive_class = j.value("positive_class", std::string{});
        r.seed = j.value("seed", std::uint64_t{0});
        r.folds = j.value("folds", std::size_t{0});
        if (j.contains("per_fold"))
            for (const auto& f : j.at("per_fold"))
                r.per_fold.push_back({f.at("tp").get<std::size_t>(), f.at("fp").get<std::size_t>(),
                                      f.at("tn").get<std::size_t>(), f.at("fn").get<std::size_t>()});
        r.sensitivity = j.value("sensitivity", 0.0);
        r.specificity = j.value("specificity", 0.0);
        r.gmean = j.at("gmean").get<double>();
        r.sensitivity_se = j.value("sensitivity_se", 0.0);
        r.specificity_se = j.value("specificity_se", 0.0);
        r.imbalance_degree = j.value("imbalance_degree", 0.0);
        return r;
    } catch (const json::exception& e) {
        throw SchemaError(std::string("malformed report JSON: ") + e.what());
    }
}

json to_json(const FoldAssignment& folds) {
    return {{"seed", folds.seed}, {"k", folds.k}, {"fold_of", folds.fold_of}};
}

FoldAssignment folds_from_json(const json& j) {
    try {
        FoldAssignment f;
        f.seed = j.at("seed").get<std::uint64_t>();
        f.k = j.at("k").get<std::size_t>();
        f.fold_of = j.at("fold_of").get<std::vector<std::size_t>>();
        return f;
    } catch (const json::exception& e) {
        throw SchemaError(std::string("malformed fold JSON: ") + e.what());
    }
}

json forest_to_json(const LearnedForest& forest, const std::vector<std::string>& schema) {
    json edges = json::array();
    for (std::size_t i = 0; i < forest.selected_edges.size(); ++i) {
        const auto& e = forest.selected_edges[i];
        edges.push_back({schema.at(e.a), schema.at(e.b), forest.selected_weights.at(i)});
    }
    json roots = json::array();
    for (auto r : forest.roots) roots.push_back(schema.at(r));
    json parent_of = json::object();
    for (const auto& [f, p] : forest.parent_of) parent_of[schema.at(f)] = p ? json(schema.at(*p)) : json(nullptr);
    return {{"edges", edges}, {"roots", roots}, {"parent_of", parent_of}};
}

json to_json(const CorrelationResult& result) {
    return {{"r", result.r}, {"slope", result.slope}, {"intercept", result.intercept}, {"n", result.n}};
}

std::string summary_line(const EvalReport& report) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s %.1f±%.1f %.1f±%.1f %.1f", std::string(algorithm_name(report.algorithm)).c_str(),
                  report.sensitivity, report.sensitivity_se, report.specificity, report.specificity_se, report.gmean);
    return buf;
}

} // namespace hretan
