#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "medresp/led.hpp"
#include "medresp/signal_core.hpp"

namespace medresp {

/// Treatment effects at full response. Fractions scale the baseline value of
/// the targeted quantity.
struct EffectProfile {
  double tap_rhythm_stabilization = 0.3;  // STAY dispersion * (1 - s)
  double f0_shift = 0.1;                  // voice pitch * (1 + s)
  double gait_y_gain = 0.2;               // vertical gait amplitude * (1 + s)
  double reaction_speedup = 0.05;         // reaction lag * (1 - s)
  double noise_level = 1.0;               // scales within-person variability

  static EffectProfile null() { return {0.0, 0.0, 0.0, 0.0, 1.0}; }
  /// Throws ContractError on non-finite values, fractions outside [0, 1)
  /// where a reduction is applied, or noise_level <= 0.
  void validate() const;
};

nlohmann::json to_json(const EffectProfile& profile);
/// Missing keys keep their defaults; unknown keys are an input error.
EffectProfile effect_profile_from_json(const nlohmann::json& j);

/// Effect magnitude in [0, 1] as a function of daily LED:
/// logistic rise times logistic fall, or a constant when `constant` is set.
struct ResponseCurve {
  double rise_mid = 350.0;
  double rise_scale = 60.0;
  double fall_mid = 2300.0;
  double fall_scale = 250.0;
  std::optional<double> constant;

  static ResponseCurve flat(double value) {
    ResponseCurve c;
    c.constant = value;
    return c;
  }
  double operator()(double led_mg) const;
};

nlohmann::json to_json(const ResponseCurve& curve);
ResponseCurve response_curve_from_json(const nlohmann::json& j);

struct ParticipantModel {
  std::string participant_id;
  double daily_led = 0.0;
  double effect_magnitude = 0.0;  // response curve at daily_led
  EffectProfile effect;           // profile at full response
  int utc_offset_minutes = 0;

  double base_f0 = 150.0;         // Hz
  double tap_stay_mean = 0.11;    // s
  double tap_stay_sd = 0.025;     // s
  double tap_move_mean = 0.20;    // s
  double tap_move_sd = 0.05;      // s
  double gait_step_hz = 1.8;
  double gait_amp_x = 0.6, gait_amp_y = 1.0, gait_amp_z = 0.5;  // m/s^2
  double reaction_mu = -1.6;      // log-normal location of the lag part above the shift
  double reaction_sigma = 0.3;

  std::vector<RegimenItem> regimen;
};

nlohmann::json to_json(const ParticipantModel& model);

enum class Condition { baseline, treatment };

/// One session of all five tests. `start` is stamped on the instance.
ActiveTestInstance generate_instance(const ParticipantModel& model, Condition condition, const Timestamp& start,
                                     std::uint64_t seed);

struct CohortConfig {
  int n_participants = 20;
  int pairs_per_participant = 10;
  double led_min = 0.0;
  double led_max = 3000.0;
  ResponseCurve curve;
  EffectProfile profile;
  std::uint64_t seed = 0;
};

nlohmann::json to_json(const CohortConfig& config);

struct Cohort {
  std::vector<ParticipantModel> participants;
  /// Per participant, per pair: baseline then treatment one hour later on a
  /// day of its own.
  std::vector<ActiveTestInstance> instances;
  Regimens regimens;
};

ParticipantModel make_participant(const CohortConfig& config, int index);
Cohort generate_cohort(const CohortConfig& config, int threads = 1);

inline constexpr int kCohortSchemaVersion = 1;

/// manifest.json content: config, ground-truth profile and per-participant models.
nlohmann::json cohort_manifest(const CohortConfig& config, const Cohort& cohort);

/// Writes instances.jsonl (voice as WAV files under audio/ unless
/// `inline_audio`), regimens.csv and manifest.json into `dir`.
void write_cohort(const std::filesystem::path& dir, const CohortConfig& config, const Cohort& cohort,
                  bool inline_audio = false);

}  // namespace medresp
