#include "medresp/registry.hpp"

#include <cmath>
#include <map>
#include <unordered_set>

#include "json.hpp"
#include "medresp/error.hpp"

namespace medresp {

void FeatureVector::add(std::string id, double value) {
  if (!std::isfinite(value)) throw InternalError("feature " + id + " is not finite");
  for (const auto& [existing, v] : entries_) {
    if (existing == id) throw InternalError("duplicate feature id " + id);
  }
  entries_.emplace_back(std::move(id), value);
}

void FeatureVector::append(const FeatureVector& other) {
  for (const auto& [id, v] : other.entries_) add(id, v);
}

std::optional<double> FeatureVector::get(std::string_view id) const {
  for (const auto& [name, v] : entries_) {
    if (name == id) return v;
  }
  return std::nullopt;
}

double FeatureVector::at(std::string_view id) const {
  const auto v = get(id);
  if (!v) throw ContractError("feature " + std::string(id) + " not present");
  return *v;
}

const std::vector<std::string>& accel_axis_stats() {
  static const std::vector<std::string> stats{"mean", "std",  "Q1",  "Q3",  "IQR", "median",
                                              "mode", "range", "skew", "kurt", "MSE", "En",
                                              "MCR",  "DFC",  "AMP", "meanTKEO", "AR1", "DFA"};
  return stats;
}

const std::vector<std::string>& accel_pair_stats() {
  static const std::vector<std::string> stats{"XCORR", "MI", "xEn"};
  return stats;
}

const std::vector<std::string>& tap_interval_stats() {
  static const std::vector<std::string> stats{"mean", "std", "Q1",  "Q3", "IQR",      "median", "mode", "range",
                                              "skew", "kurt", "MSE", "En", "meanTKEO", "AR1",    "DFA"};
  return stats;
}

const std::vector<std::string>& reaction_stats() {
  static const std::vector<std::string> stats{"sum",  "mean", "std", "Q1", "Q3",       "IQR", "median", "mode",
                                              "range", "skew", "kurt", "MSE", "En", "meanTKEO", "DFA"};
  return stats;
}

const std::vector<std::string>& voice_feature_suffixes() {
  static const std::vector<std::string> ids{
      "Len",         "AMP_mean",    "AMP_std",     "AMP_DFA",     "AMP_lin_c0",  "AMP_lin_c1",
      "AMP_quad_c0", "AMP_quad_c1", "AMP_quad_c2", "F0_mean",     "F0_std",      "F0_DFA",
      "F0_lin_c0",   "F0_lin_c1",   "F0_quad_c0",  "F0_quad_c1",  "F0_quad_c2",  "F0"};
  return ids;
}

namespace {

const std::map<std::string, std::string>& stat_descriptions() {
  static const std::map<std::string, std::string> d{
      {"mean", "mean"},
      {"std", "standard deviation"},
      {"Q1", "25th percentile"},
      {"Q3", "75th percentile"},
      {"IQR", "inter-quartile range"},
      {"median", "median"},
      {"mode", "mode (most populated bin)"},
      {"range", "data range"},
      {"skew", "skewness"},
      {"kurt", "kurtosis"},
      {"MSE", "mean squared energy"},
      {"En", "entropy"},
      {"MCR", "mean cross rate"},
      {"DFC", "dominant frequency component"},
      {"AMP", "the amplitude of the dominant frequency"},
      {"meanTKEO", "mean TKEO"},
      {"AR1", "lag-1 autoregression coefficient"},
      {"DFA", "detrended fluctuation analysis exponent"},
      {"sum", "sum"},
      {"XCORR", "cross-correlation"},
      {"MI", "mutual information"},
      {"xEn", "cross-entropy"},
  };
  return d;
}

std::string axis_phrase(const std::string& axis) {
  if (axis == "r") return "the radial distances";
  if (axis == "theta") return "the polar angles";
  if (axis == "phi") return "the azimuth angles";
  return "axis " + axis;
}

std::vector<FeatureSpec> build_registry() {
  std::vector<FeatureSpec> reg;
  const auto push = [&](std::string name, std::string test, std::string axis, std::string stat,
                        std::string description) {
    reg.push_back({std::move(name), std::move(test), std::move(axis), std::move(stat), reg.size(),
                   std::move(description)});
  };
  const auto& desc = stat_descriptions();

  const std::map<std::string, std::string> voice_desc{
      {"Len", "voice duration in seconds"},
      {"F0", "the dominant voice frequency"},
  };
  for (const auto& suffix : voice_feature_suffixes()) {
    std::string text;
    if (auto it = voice_desc.find(suffix); it != voice_desc.end()) {
      text = it->second;
    } else {
      const auto us = suffix.find('_');
      const std::string track = suffix.substr(0, us) == "AMP" ? "voice amplitude" : "voice frequency";
      const std::string what = suffix.substr(us + 1);
      if (what.rfind("lin_", 0) == 0) {
        text = "linear fit coefficient " + what.substr(4) + " of the " + track + " track";
      } else if (what.rfind("quad_", 0) == 0) {
        text = "quadratic fit coefficient " + what.substr(5) + " of the " + track + " track";
      } else {
        text = desc.at(what) + " of the " + track + " track";
      }
    }
    const auto us = suffix.find('_');
    push("voice_" + suffix, "voice", us == std::string::npos ? "" : suffix.substr(0, us),
         us == std::string::npos ? suffix : suffix.substr(us + 1), text);
  }

  for (const std::string test : {"balance", "gait"}) {
    for (const std::string axis : {"x", "y", "z", "r", "theta", "phi"}) {
      for (const auto& stat : accel_axis_stats()) {
        push(test + "_" + axis + "_" + stat, test, axis, stat, desc.at(stat) + " of " + axis_phrase(axis));
      }
    }
    for (const std::string pair : {"xy", "xz", "yz"}) {
      for (const auto& stat : accel_pair_stats()) {
        push(test + "_" + pair + "_" + stat, test, pair, stat,
             desc.at(stat) + " between axes " + pair.substr(0, 1) + " and " + pair.substr(1));
      }
    }
  }

  for (const std::string group : {"STAY", "MOVE"}) {
    const std::string what = group == "STAY" ? "finger pressing intervals" : "finger moving intervals";
    for (const auto& stat : tap_interval_stats()) {
      push("tap_" + group + "_" + stat, "dexterity", group, stat, desc.at(stat) + " of " + what);
    }
  }
  for (const auto& stat : reaction_stats()) {
    push("react_" + stat, "reaction", "", stat, desc.at(stat) + " of reaction lags");
  }
  return reg;
}

}  // namespace

const std::vector<FeatureSpec>& feature_registry() {
  static const std::vector<FeatureSpec> reg = build_registry();
  return reg;
}

const FeatureSpec* find_feature(std::string_view name) {
  static const std::map<std::string, std::size_t, std::less<>> index = [] {
    std::map<std::string, std::size_t, std::less<>> m;
    for (const auto& f : feature_registry()) m.emplace(f.name, f.ordinal);
    return m;
  }();
  const auto it = index.find(name);
  return it == index.end() ? nullptr : &feature_registry()[it->second];
}

std::vector<std::string> registry_ids_for_test(std::string_view test) {
  std::vector<std::string> ids;
  for (const auto& f : feature_registry()) {
    if (f.test == test) ids.push_back(f.name);
  }
  return ids;
}

std::uint64_t feature_ids_hash(std::span<const std::string> ids) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  bool first = true;
  for (const auto& id : ids) {
    if (!first) {
      h ^= static_cast<unsigned char>('\n');
      h *= 0x100000001b3ULL;
    }
    first = false;
    for (unsigned char c : id) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
  }
  return h;
}

std::string registry_manifest_json() {
  nlohmann::json features = nlohmann::json::array();
  std::vector<std::string> ids;
  for (const auto& f : feature_registry()) {
    features.push_back({{"name", f.name},
                        {"test", f.test},
                        {"axis", f.axis},
                        {"stat", f.stat},
                        {"ordinal", f.ordinal},
                        {"description", f.description}});
    ids.push_back(f.name);
  }
  nlohmann::json doc{{"schema_version", 1},
                     {"registry_version", kRegistryVersion},
                     {"feature_count", ids.size()},
                     {"ids_hash", feature_ids_hash(ids)},
                     {"features", std::move(features)}};
  return doc.dump(2);
}

}  // namespace medresp
