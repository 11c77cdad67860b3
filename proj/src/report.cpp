#include "medresp/report.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include "medresp/csv.hpp"
#include "medresp/error.hpp"
#include "medresp/registry.hpp"
#include "medresp/stats.hpp"

namespace medresp {

using nlohmann::json;

std::vector<std::size_t> importance_ranking(std::span<const double> importance) {
  std::vector<std::size_t> order(importance.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return importance[a] > importance[b]; });
  return order;
}

namespace {

json metrics_json(const Metrics& m) {
  return {{"sensitivity", m.sensitivity}, {"specificity", m.specificity}, {"accuracy", m.accuracy}};
}

json mean_std_json(const MeanStd& m) { return {{"mean", m.mean}, {"std", m.std}}; }

json confusion_json(const ConfusionMatrix& cm) {
  return {{"tp", cm.tp}, {"fp", cm.fp}, {"tn", cm.tn}, {"fn", cm.fn}};
}

std::string feature_test(const std::string& id) {
  const FeatureSpec* spec = find_feature(id);
  return spec ? spec->test : "";
}

std::string feature_description(const std::string& id) {
  const FeatureSpec* spec = find_feature(id);
  return spec ? spec->description : "";
}

// Complete baseline/treatment pairs as (group, baseline row, treatment row).
struct PairRows {
  std::string group;
  std::size_t baseline, treatment;
};

std::vector<PairRows> complete_pairs(const Dataset& data) {
  if (data.groups.size() != data.size()) throw ContractError("feature differences need group keys");
  std::map<std::string, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < data.size(); ++i) members[data.groups[i]].push_back(i);
  std::vector<PairRows> pairs;
  for (const auto& [group, rows] : members) {
    if (rows.size() != 2 || data.labels[rows[0]] == data.labels[rows[1]]) continue;
    const bool first_is_baseline = data.labels[rows[0]] == 0;
    pairs.push_back({group, first_is_baseline ? rows[0] : rows[1], first_is_baseline ? rows[1] : rows[0]});
  }
  return pairs;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  return quantile_sorted(v, 0.5);
}

}  // namespace

json evaluation_report(const Dataset& data, const CVResult& cv, const KsResult& ks, const json& config,
                       std::size_t top_k) {
  json reps = json::array();
  for (std::size_t r = 0; r < cv.per_repetition.size(); ++r) {
    reps.push_back({{"repetition", r},
                    {"confusion", confusion_json(cv.confusion[r])},
                    {"metrics", metrics_json(cv.per_repetition[r])},
                    {"random_metrics", metrics_json(cv.random_per_repetition[r])}});
  }
  json top = json::array();
  const auto order = importance_ranking(cv.importance);
  for (std::size_t k = 0; k < std::min(top_k, order.size()); ++k) {
    const auto& id = data.feature_ids[order[k]];
    top.push_back({{"rank", k + 1},
                   {"feature_id", id},
                   {"test", feature_test(id)},
                   {"description", feature_description(id)},
                   {"importance", cv.importance[order[k]]}});
  }
  json participants = json::array();
  for (const auto& [id, pa] : cv.per_participant) {
    participants.push_back({{"participant_id", id}, {"n_instances", pa.n_instances}, {"accuracy", pa.accuracy()}});
  }
  return json{
      {"schema_version", kReportSchemaVersion},
      {"kind", "medresp-evaluation"},
      {"config", config},
      {"data",
       {{"n_instances", data.size()},
        {"n_features", data.n_features()},
        {"n_baseline", data.count(0)},
        {"n_treatment", data.count(1)},
        {"feature_ids_hash", feature_ids_hash(data.feature_ids)}}},
      {"summary",
       {{"sensitivity", mean_std_json(cv.sensitivity)},
        {"specificity", mean_std_json(cv.specificity)},
        {"accuracy", mean_std_json(cv.accuracy)},
        {"random_accuracy", mean_std_json(cv.random_accuracy)}}},
      {"ks_forest_vs_random", {{"statistic", ks.d}, {"p_value", ks.p}}},
      {"importance_top", top},
      {"repetitions", reps},
      {"participants", participants},
  };
}

void write_repetitions_csv(std::ostream& out, const CVResult& cv) {
  write_csv_row(out, {"repetition", "tp", "fp", "tn", "fn", "sensitivity", "specificity", "accuracy",
                      "random_sensitivity", "random_specificity", "random_accuracy"});
  for (std::size_t r = 0; r < cv.per_repetition.size(); ++r) {
    const auto& cm = cv.confusion[r];
    const auto& m = cv.per_repetition[r];
    const auto& rm = cv.random_per_repetition[r];
    write_csv_row(out, {std::to_string(r), std::to_string(cm.tp), std::to_string(cm.fp), std::to_string(cm.tn),
                        std::to_string(cm.fn), format_double(m.sensitivity), format_double(m.specificity),
                        format_double(m.accuracy), format_double(rm.sensitivity), format_double(rm.specificity),
                        format_double(rm.accuracy)});
  }
}

void write_importance_csv(std::ostream& out, std::span<const std::string> feature_ids,
                          std::span<const double> importance) {
  if (feature_ids.size() != importance.size()) throw InternalError("importance length mismatch");
  write_csv_row(out, {"rank", "feature_id", "test", "description", "importance"});
  const auto order = importance_ranking(importance);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const auto& id = feature_ids[order[k]];
    write_csv_row(out, {std::to_string(k + 1), id, feature_test(id), feature_description(id),
                        format_double(importance[order[k]])});
  }
}

void write_participant_csv(std::ostream& out, const CVResult& cv, const std::map<std::string, double>* led) {
  write_csv_row(out, {"participant_id", "n_instances", "accuracy", "daily_led"});
  for (const auto& [id, pa] : cv.per_participant) {
    std::string dose;
    if (led) {
      const auto it = led->find(id);
      if (it != led->end()) dose = format_double(it->second);
    }
    write_csv_row(out, {id, std::to_string(pa.n_instances), format_double(pa.accuracy()), dose});
  }
}

std::vector<double> median_feature_differences(const Dataset& data) {
  const auto pairs = complete_pairs(data);
  std::vector<double> medians(data.n_features(), 0.0);
  std::vector<double> diffs;
  for (std::size_t f = 0; f < data.n_features(); ++f) {
    diffs.clear();
    for (const auto& p : pairs) diffs.push_back(data.rows[p.treatment][f] - data.rows[p.baseline][f]);
    medians[f] = median_of(diffs);
  }
  return medians;
}

void write_feature_differences_csv(std::ostream& out, const Dataset& data) {
  const auto pairs = complete_pairs(data);
  const auto medians = median_feature_differences(data);
  write_csv_row(out, {"feature_id", "test", "pair", "participant_id", "difference", "median_difference"});
  for (std::size_t f = 0; f < data.n_features(); ++f) {
    const auto& id = data.feature_ids[f];
    const std::string test = feature_test(id);
    const std::string median = format_double(medians[f]);
    for (const auto& p : pairs) {
      const std::string participant = data.participants.empty() ? "" : data.participants[p.baseline];
      write_csv_row(out, {id, test, p.group, participant,
                          format_double(data.rows[p.treatment][f] - data.rows[p.baseline][f]), median});
    }
  }
}

}  // namespace medresp
