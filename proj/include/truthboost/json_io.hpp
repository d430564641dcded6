#pragma once

// JSON encodings of models, trees and reports. Every document carries "schema_version"; the layouts are
// described by the files under docs/schemas/v1/.

#include "truthboost/analytic.hpp"
#include "truthboost/boosting.hpp"
#include "truthboost/compare.hpp"
#include "truthboost/outcome_tree.hpp"
#include "truthboost/risk.hpp"

#include <json.hpp>

#include <cstddef>
#include <filesystem>

namespace truthboost {

inline constexpr int kSchemaVersion = 1;

/// A trained model plus the dataset shape it was trained on.
struct ModelFile {
    BoostModel model;
    std::size_t n = 0;
    std::size_t d = 0;
    nlohmann::json seed_info;  // null, or {"generator", "seed", ...} copied from the dataset sidecar
};

nlohmann::json stump_to_json(const DecisionStump &stump);
DecisionStump stump_from_json(const nlohmann::json &j);

nlohmann::json model_to_json(const ModelFile &file);
ModelFile model_from_json(const nlohmann::json &j);

/// {"p": depth, "counts": [null, c_1, c_2, ...]}
nlohmann::json tree_to_json(const OutcomeTree &tree);
OutcomeTree tree_from_json(const nlohmann::json &j);

/// {"betas_analytic", "taus", "per_level": {"a_k", "b_k"}}
nlohmann::json analytic_to_json(const AnalyticState &state);

nlohmann::json risk_comparison_to_json(const RiskComparison &comparison);
RiskComparison risk_comparison_from_json(const nlohmann::json &j);

nlohmann::json compare_report_to_json(const CompareReport &report);
CompareReport compare_report_from_json(const nlohmann::json &j);

nlohmann::json packet_reduction_to_json(const PacketReduction &reduction);

nlohmann::json read_json(const std::filesystem::path &path);
void write_json(const nlohmann::json &j, const std::filesystem::path &path);

}  // namespace truthboost
