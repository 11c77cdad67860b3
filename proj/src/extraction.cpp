#include "medresp/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <set>

#include "medresp/csv.hpp"
#include "medresp/error.hpp"
#include "medresp/parallel.hpp"
#include "medresp/tap_reaction_features.hpp"

namespace medresp {

InstanceFeatures extract_instance(const ActiveTestInstance& instance, const ExtractionOptions& options) {
  InstanceFeatures out;
  out.participant_id = instance.participant_id;
  out.started_at = instance.started_at;
  out.label = instance.label;

  // per-test buffer; a test that throws adds nothing
  const auto run = [&](const char* test, bool present, auto&& extract) {
    if (!present) {
      out.failures.push_back(std::string(test) + ": missing");
      return;
    }
    try {
      FeatureVector part = extract();
      out.features.append(part);
    } catch (const Error& e) {
      out.failures.push_back(std::string(test) + ": " + e.what());
    }
  };

  run("voice", instance.voice.has_value(), [&] {
    VoiceResult r = extract_voice_features(*instance.voice, options.voice);
    out.flags.insert(out.flags.end(), r.flags.begin(), r.flags.end());
    return r.features;
  });
  run("balance", instance.balance.has_value(),
      [&] { return extract_accel_features(*instance.balance, options.accel); });
  run("gait", instance.gait.has_value(), [&] { return extract_accel_features(*instance.gait, options.accel); });
  run("dexterity", instance.dexterity.has_value(), [&] {
    IntervalFeatures r = extract_tap_features(*instance.dexterity);
    for (auto& s : r.short_stats) out.flags.push_back("short:" + s);
    return r.features;
  });
  run("reaction", instance.reaction.has_value(), [&] {
    IntervalFeatures r = extract_reaction_features(*instance.reaction);
    for (auto& s : r.short_stats) out.flags.push_back("short:" + s);
    return r.features;
  });
  return out;
}

std::vector<InstanceFeatures> extract_all(std::span<const ActiveTestInstance> instances,
                                          const ExtractionOptions& options, int threads) {
  std::vector<InstanceFeatures> out(instances.size());
  parallel_for(instances.size(), threads, [&](std::size_t i) { out[i] = extract_instance(instances[i], options); });
  return out;
}

TableBuildResult build_feature_table(std::span<const InstanceFeatures> features, bool allow_partial) {
  TableBuildResult result;
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto& f = features[i];
    if (!f.complete() && !allow_partial) {
      std::string reason;
      for (const auto& why : f.failures) reason += (reason.empty() ? "" : "; ") + why;
      result.excluded.emplace_back(i, reason);
      continue;
    }
    if (f.features.empty()) {
      result.excluded.emplace_back(i, "no features extracted");
      continue;
    }
    kept.push_back(i);
  }

  // Columns: registry ids present in every kept instance.
  std::map<std::string, std::size_t> present;
  for (std::size_t i : kept) {
    for (const auto& [id, v] : features[i].features.entries()) ++present[id];
  }
  auto& table = result.table;
  for (const auto& spec : feature_registry()) {
    const auto it = present.find(spec.name);
    if (it != present.end() && it->second == kept.size()) table.feature_ids.push_back(spec.name);
  }

  for (std::size_t i : kept) {
    const auto& f = features[i];
    std::map<std::string_view, double> lookup;
    for (const auto& [id, v] : f.features.entries()) lookup.emplace(id, v);
    std::vector<double> row;
    row.reserve(table.feature_ids.size());
    for (const auto& id : table.feature_ids) row.push_back(lookup.at(id));
    table.participant_ids.push_back(f.participant_id);
    table.started_at.push_back(f.started_at);
    table.labels.push_back(f.label);
    table.rows.push_back(std::move(row));
  }
  return result;
}

void write_feature_csv(std::ostream& out, const FeatureTable& table) {
  std::vector<std::string> header{"participant_id", "started_at", "label"};
  header.insert(header.end(), table.feature_ids.begin(), table.feature_ids.end());
  write_csv_row(out, header);
  std::vector<std::string> fields;
  for (std::size_t i = 0; i < table.size(); ++i) {
    fields.clear();
    fields.push_back(table.participant_ids[i]);
    fields.push_back(format_rfc3339(table.started_at[i]));
    fields.emplace_back(to_string(table.labels[i]));
    for (double v : table.rows[i]) fields.push_back(format_double(v));
    write_csv_row(out, fields);
  }
}

FeatureTable read_feature_csv(std::istream& in) {
  const auto rows = read_csv(in);
  if (rows.empty()) throw InputError("feature CSV is empty");
  const auto& header = rows.front();
  if (header.size() < 3 || header[0] != "participant_id" || header[1] != "started_at" || header[2] != "label") {
    throw InputError("feature CSV header must start with participant_id,started_at,label");
  }
  FeatureTable table;
  table.feature_ids.assign(header.begin() + 3, header.end());
  std::set<std::string> unique(table.feature_ids.begin(), table.feature_ids.end());
  if (unique.size() != table.feature_ids.size()) throw InputError("feature CSV has duplicate columns");

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() != header.size()) {
      throw InputError("feature CSV row " + std::to_string(r + 1) + " has " + std::to_string(row.size()) +
                       " fields, expected " + std::to_string(header.size()));
    }
    table.participant_ids.push_back(row[0]);
    table.started_at.push_back(parse_rfc3339(row[1]));
    table.labels.push_back(parse_label(row[2]));
    std::vector<double> values;
    values.reserve(row.size() - 3);
    for (std::size_t c = 3; c < row.size(); ++c) {
      const double v = parse_double(row[c]);
      if (!std::isfinite(v)) throw InputError("non-finite feature value in row " + std::to_string(r + 1));
      values.push_back(v);
    }
    table.rows.push_back(std::move(values));
  }
  return table;
}

FeatureTable read_feature_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return read_feature_csv(in);
}

}  // namespace medresp
