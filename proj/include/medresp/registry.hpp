#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace medresp {

/// Ordered (feature id, value) entries for one instance.
class FeatureVector {
 public:
  /// Throws InternalError on a duplicate id or non-finite value.
  void add(std::string id, double value);
  void append(const FeatureVector& other);

  std::optional<double> get(std::string_view id) const;
  double at(std::string_view id) const;

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  const std::vector<std::pair<std::string, double>>& entries() const noexcept { return entries_; }

 private:
  std::vector<std::pair<std::string, double>> entries_;
};

struct FeatureSpec {
  std::string name;
  std::string test;  // voice, balance, gait, dexterity, reaction
  std::string axis;  // x, y, z, r, theta, phi, xy, ..., STAY, MOVE, or empty
  std::string stat;
  std::size_t ordinal = 0;
  std::string description;
};

inline constexpr int kRegistryVersion = 1;

/// Per-axis acceleration statistics in registry order (18).
const std::vector<std::string>& accel_axis_stats();
/// Pairwise acceleration statistics in registry order (3).
const std::vector<std::string>& accel_pair_stats();
/// Dexterity interval statistics (15).
const std::vector<std::string>& tap_interval_stats();
/// Reaction lag statistics (15).
const std::vector<std::string>& reaction_stats();
/// Voice feature suffixes in registry order (18).
const std::vector<std::string>& voice_feature_suffixes();

/// The complete ordered feature registry: voice, balance, gait, dexterity,
/// reaction.
const std::vector<FeatureSpec>& feature_registry();
const FeatureSpec* find_feature(std::string_view name);

/// Registry ids that belong to one test, in registry order.
std::vector<std::string> registry_ids_for_test(std::string_view test);

/// FNV-1a 64 over the newline-joined feature ids.
std::uint64_t feature_ids_hash(std::span<const std::string> ids);

/// Machine-readable manifest (JSON text) of the registry.
std::string registry_manifest_json();

}  // namespace medresp
