#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "hretan/dataset.hpp"
#include "hretan/evaluation.hpp"
#include "hretan/structure.hpp"

namespace hretan {

/// Written into every report so consumers can detect format changes.
inline constexpr const char* kReportFormatVersion = "1.0";

nlohmann::json to_json(const EvalReport& report);
/// Throws SchemaError on missing or mistyped fields.
EvalReport report_from_json(const nlohmann::json& j);

nlohmann::json to_json(const FoldAssignment& folds);
FoldAssignment folds_from_json(const nlohmann::json& j);

/// {edges: [[a, b, weight]...], roots: [...], parent_of: {...}} with feature names.
nlohmann::json forest_to_json(const LearnedForest& forest, const std::vector<std::string>& schema);

nlohmann::json to_json(const CorrelationResult& result);

/// "hre-tan-mix 34.9±2.7 78.3±3.3 52.3"
std::string summary_line(const EvalReport& report);

} // namespace hretan
