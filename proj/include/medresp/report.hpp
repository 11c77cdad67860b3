#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "medresp/evaluation.hpp"
#include "medresp/forest.hpp"

namespace medresp {

inline constexpr int kReportSchemaVersion = 1;

/// Feature indices by decreasing importance; equal values keep column order.
std::vector<std::size_t> importance_ranking(std::span<const double> importance);

/// Structured evaluation report. `config` is the effective configuration
/// echoed verbatim.
nlohmann::json evaluation_report(const Dataset& data, const CVResult& cv, const KsResult& ks,
                                 const nlohmann::json& config, std::size_t top_k = 20);

/// rep, TP, FP, TN, FN, sensitivity, specificity, accuracy and the random
/// classifier counterparts.
void write_repetitions_csv(std::ostream& out, const CVResult& cv);

/// rank, feature_id, test, description, importance.
void write_importance_csv(std::ostream& out, std::span<const std::string> feature_ids,
                          std::span<const double> importance);

/// participant_id, n_instances, accuracy, daily_led (empty when unknown).
void write_participant_csv(std::ostream& out, const CVResult& cv,
                           const std::map<std::string, double>* led = nullptr);

/// Long-format treatment minus baseline differences of every feature over
/// every complete pair (same group key), with the per-feature median on each
/// row: feature_id, test, pair, participant_id, difference, median_difference.
void write_feature_differences_csv(std::ostream& out, const Dataset& data);

/// Per-feature medians of treatment minus baseline over complete pairs.
std::vector<double> median_feature_differences(const Dataset& data);

}  // namespace medresp
