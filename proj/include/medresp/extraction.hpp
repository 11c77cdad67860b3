#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "medresp/accel_features.hpp"
#include "medresp/registry.hpp"
#include "medresp/signal_core.hpp"
#include "medresp/voice_features.hpp"

namespace medresp {

struct ExtractionOptions {
  VoiceOptions voice;
  AccelFeatureOptions accel;
};

/// Features of one instance. Tests that are absent or failed contribute no
/// features; `failures` records why, one entry per test.
struct InstanceFeatures {
  std::string participant_id;
  Timestamp started_at;
  Label label = Label::unlabeled;
  FeatureVector features;
  std::vector<std::string> failures;
  /// Low-quality markers: sentinel statistics, empty voiced run, ...
  std::vector<std::string> flags;

  bool complete() const noexcept { return failures.empty(); }
};

InstanceFeatures extract_instance(const ActiveTestInstance& instance, const ExtractionOptions& options = {});

/// Extracts every instance, in input order, on up to `threads` workers.
std::vector<InstanceFeatures> extract_all(std::span<const ActiveTestInstance> instances,
                                          const ExtractionOptions& options = {}, int threads = 1);

/// Rectangular feature table: metadata columns plus feature columns in
/// registry order.
struct FeatureTable {
  std::vector<std::string> feature_ids;
  std::vector<std::string> participant_ids;
  std::vector<Timestamp> started_at;
  std::vector<Label> labels;
  std::vector<std::vector<double>> rows;

  std::size_t size() const noexcept { return rows.size(); }
};

struct TableBuildResult {
  FeatureTable table;
  /// Index into the input and reason for every instance left out.
  std::vector<std::pair<std::size_t, std::string>> excluded;
};

/// Keeps instances with every test extracted. With `allow_partial`,
/// incomplete instances are kept too and feature columns missing from any
/// kept instance are dropped instead (no imputation).
TableBuildResult build_feature_table(std::span<const InstanceFeatures> features, bool allow_partial = false);

/// CSV with header participant_id,started_at,label,<feature ids...>.
void write_feature_csv(std::ostream& out, const FeatureTable& table);
FeatureTable read_feature_csv(std::istream& in);
FeatureTable read_feature_csv_file(const std::filesystem::path& path);

}  // namespace medresp
