#include "medresp/synth.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <cstdio>
#include <map>

#include "medresp/error.hpp"
#include "medresp/instance_io.hpp"
#include "medresp/parallel.hpp"
#include "medresp/rng.hpp"

namespace medresp {

using nlohmann::json;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kGravity = 9.81;

constexpr double kAccelRateHz = 40.0;
constexpr double kAccelJitter = 0.2;
constexpr double kAccelSeconds = 20.0;
constexpr double kGaitNoise = 2.5;

constexpr int kAudioRate = 4000;
constexpr double kAudioSeconds = 10.0;

constexpr int kTaps = 60;
constexpr double kTapOutlierRate = 0.05;
constexpr int kReactionTrials = 10;
constexpr double kReactionShift = 0.15;
constexpr double kReactionMissRate = 0.03;

bool finite_all(std::initializer_list<double> values) {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace

void EffectProfile::validate() const {
  if (!finite_all({tap_rhythm_stabilization, f0_shift, gait_y_gain, reaction_speedup, noise_level})) {
    throw ContractError("effect profile values must be finite");
  }
  if (tap_rhythm_stabilization < 0.0 || tap_rhythm_stabilization >= 1.0) {
    throw ContractError("tap_rhythm_stabilization must lie in [0, 1)");
  }
  if (reaction_speedup < 0.0 || reaction_speedup >= 1.0) throw ContractError("reaction_speedup must lie in [0, 1)");
  if (f0_shift <= -1.0) throw ContractError("f0_shift must be > -1");
  if (gait_y_gain <= -1.0) throw ContractError("gait_y_gain must be > -1");
  if (!(noise_level > 0.0)) throw ContractError("noise_level must be > 0");
}

json to_json(const EffectProfile& p) {
  return {{"tap_rhythm_stabilization", p.tap_rhythm_stabilization},
          {"f0_shift", p.f0_shift},
          {"gait_y_gain", p.gait_y_gain},
          {"reaction_speedup", p.reaction_speedup},
          {"noise_level", p.noise_level}};
}

namespace {

void read_number(const json& j, const char* key, double& out) {
  if (!j.contains(key)) return;
  if (!j.at(key).is_number()) throw InputError(std::string("'") + key + "' must be a number");
  out = j.at(key).get<double>();
}

void reject_unknown(const json& j, std::initializer_list<const char*> keys, const char* what) {
  if (!j.is_object()) throw InputError(std::string(what) + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; })) {
      throw InputError(std::string("unknown ") + what + " key '" + key + "'");
    }
  }
}

}  // namespace

EffectProfile effect_profile_from_json(const json& j) {
  reject_unknown(j, {"tap_rhythm_stabilization", "f0_shift", "gait_y_gain", "reaction_speedup", "noise_level"},
                 "effect profile");
  EffectProfile p;
  read_number(j, "tap_rhythm_stabilization", p.tap_rhythm_stabilization);
  read_number(j, "f0_shift", p.f0_shift);
  read_number(j, "gait_y_gain", p.gait_y_gain);
  read_number(j, "reaction_speedup", p.reaction_speedup);
  read_number(j, "noise_level", p.noise_level);
  p.validate();
  return p;
}

double ResponseCurve::operator()(double led_mg) const {
  if (constant) return *constant;
  const double rise = 1.0 / (1.0 + std::exp(-(led_mg - rise_mid) / rise_scale));
  const double fall = 1.0 / (1.0 + std::exp((led_mg - fall_mid) / fall_scale));
  return rise * fall;
}

json to_json(const ResponseCurve& c) {
  if (c.constant) return {{"constant", *c.constant}};
  return {{"rise_mid", c.rise_mid}, {"rise_scale", c.rise_scale}, {"fall_mid", c.fall_mid},
          {"fall_scale", c.fall_scale}};
}

ResponseCurve response_curve_from_json(const json& j) {
  reject_unknown(j, {"rise_mid", "rise_scale", "fall_mid", "fall_scale", "constant"}, "response curve");
  ResponseCurve c;
  if (j.contains("constant")) {
    double v = 0.0;
    read_number(j, "constant", v);
    if (!(v >= 0.0 && v <= 1.0)) throw ContractError("constant response must lie in [0, 1]");
    c.constant = v;
    return c;
  }
  read_number(j, "rise_mid", c.rise_mid);
  read_number(j, "rise_scale", c.rise_scale);
  read_number(j, "fall_mid", c.fall_mid);
  read_number(j, "fall_scale", c.fall_scale);
  if (!finite_all({c.rise_mid, c.rise_scale, c.fall_mid, c.fall_scale}) || c.rise_scale <= 0.0 ||
      c.fall_scale <= 0.0) {
    throw ContractError("response curve scales must be finite and positive");
  }
  return c;
}

json to_json(const ParticipantModel& m) {
  json regimen = json::array();
  for (const auto& item : m.regimen) {
    regimen.push_back({{"drug", item.drug}, {"dose_mg", item.dose_mg}, {"times_per_day", item.times_per_day}});
  }
  return {{"participant_id", m.participant_id},
          {"daily_led", m.daily_led},
          {"effect_magnitude", m.effect_magnitude},
          {"utc_offset_minutes", m.utc_offset_minutes},
          {"base_f0", m.base_f0},
          {"tap_stay_mean", m.tap_stay_mean},
          {"tap_stay_sd", m.tap_stay_sd},
          {"tap_move_mean", m.tap_move_mean},
          {"tap_move_sd", m.tap_move_sd},
          {"gait_step_hz", m.gait_step_hz},
          {"gait_amp", {m.gait_amp_x, m.gait_amp_y, m.gait_amp_z}},
          {"reaction_mu", m.reaction_mu},
          {"reaction_sigma", m.reaction_sigma},
          {"regimen", regimen}};
}

json to_json(const CohortConfig& c) {
  return {{"n_participants", c.n_participants},
          {"pairs_per_participant", c.pairs_per_participant},
          {"led_range", {c.led_min, c.led_max}},
          {"response_curve", to_json(c.curve)},
          {"effect", to_json(c.profile)},
          {"seed", c.seed}};
}

namespace {

// Session-level log-normal multiplier.
double session_factor(Rng& rng, double sd) { return std::exp(sd * rng.normal()); }

std::vector<double> jittered_times(Rng& rng) {
  const double dt = 1.0 / kAccelRateHz;
  std::vector<double> t;
  double now = rng.uniform(0.0, 0.005);
  while (now <= kAccelSeconds) {
    t.push_back(now);
    now += dt * (1.0 + rng.uniform(-kAccelJitter, kAccelJitter));
  }
  return t;
}

AccelSeries make_gait(const ParticipantModel& m, double gain, Rng& rng) {
  const double nl = m.effect.noise_level;
  const auto t = jittered_times(rng);
  const double f = m.gait_step_hz * session_factor(rng, 0.03 * nl);
  const double ay = m.gait_amp_y * session_factor(rng, 0.07 * nl) * gain;
  const double ax = m.gait_amp_x * session_factor(rng, 0.1 * nl);
  const double az = m.gait_amp_z * session_factor(rng, 0.1 * nl);
  const double phase = rng.uniform(0.0, 2.0 * kPi);
  const double sigma = kGaitNoise * nl;
  std::vector<double> x(t.size()), y(t.size()), z(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double w = 2.0 * kPi * f * t[i] + phase;
    x[i] = ax * std::sin(0.5 * w) + sigma * 0.4 * rng.normal();
    y[i] = kGravity + ay * (std::sin(w) + 0.3 * std::sin(2.0 * w)) + sigma * rng.normal();
    z[i] = az * std::sin(w + 0.7) + sigma * 0.4 * rng.normal();
  }
  return AccelSeries(AccelTest::gait, t, std::move(x), std::move(y), std::move(z));
}

AccelSeries make_balance(const ParticipantModel& m, Rng& rng) {
  const double nl = m.effect.noise_level;
  const auto t = jittered_times(rng);
  const double sway = 0.03 * session_factor(rng, 0.2 * nl);
  const double tilt = rng.normal(0.0, 0.05);
  std::vector<double> x(t.size()), y(t.size()), z(t.size());
  double sx = 0.0, sz = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    sx = 0.97 * sx + sway * rng.normal();
    sz = 0.97 * sz + sway * rng.normal();
    x[i] = kGravity * std::sin(tilt) + sx + 0.03 * rng.normal();
    y[i] = kGravity * std::cos(tilt) + 0.03 * rng.normal();
    z[i] = sz + 0.03 * rng.normal();
  }
  return AccelSeries(AccelTest::balance, t, std::move(x), std::move(y), std::move(z));
}

AudioRecording make_voice(const ParticipantModel& m, double f0_factor, Rng& rng) {
  const double nl = m.effect.noise_level;
  const double f0 = m.base_f0 * session_factor(rng, 0.025 * nl) * f0_factor;
  const double amp = 0.3 * session_factor(rng, 0.2);
  const double lead = rng.uniform(2.6, 3.2);
  const double tail = kAudioSeconds - rng.uniform(2.6, 3.2);
  const double vibrato = 0.004;
  const double drift = 0.01 * rng.uniform(-1.0, 1.0);
  const double drift_phase = rng.uniform(0.0, 2.0 * kPi);
  const auto n = static_cast<std::size_t>(kAudioRate * kAudioSeconds);
  std::vector<double> samples(n);
  double phase = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / kAudioRate;
    double v = 0.002 * rng.normal();
    if (t >= lead && t < tail) {
      const double f = f0 * (1.0 + vibrato * std::sin(2.0 * kPi * 5.5 * t) +
                             drift * std::sin(2.0 * kPi * 0.2 * t + drift_phase));
      phase += 2.0 * kPi * f / kAudioRate;
      const double ramp = std::min({1.0, (t - lead) / 0.05, (tail - t) / 0.05});
      const double a = amp * ramp * (1.0 + 0.05 * std::sin(2.0 * kPi * 3.0 * t));
      v += a * (std::sin(phase) + 0.5 * std::sin(2.0 * phase) + 0.25 * std::sin(3.0 * phase)) + 0.01 * rng.normal();
    }
    // On the 16-bit grid, so a WAV round trip is lossless.
    samples[i] = std::clamp(std::round(v * 32768.0), -32768.0, 32767.0) / 32768.0;
  }
  return AudioRecording(kAudioRate, std::move(samples));
}

TapSession make_taps(const ParticipantModel& m, double stabilization, Rng& rng) {
  const double nl = m.effect.noise_level;
  const double stay_mean = m.tap_stay_mean * session_factor(rng, 0.08 * nl);
  const double stay_sd = m.tap_stay_sd * session_factor(rng, 0.1 * nl) * stabilization;
  const double move_mean = m.tap_move_mean * session_factor(rng, 0.08 * nl);
  const double move_sd = m.tap_move_sd * session_factor(rng, 0.15 * nl);
  std::vector<TapEvent> events;
  double press = rng.uniform(0.5, 1.0);
  Button button = rng.bernoulli(0.5) ? Button::left : Button::right;
  for (int k = 0; k < kTaps; ++k) {
    double stay = std::max(0.03, rng.normal(stay_mean, stay_sd));
    if (rng.bernoulli(kTapOutlierRate)) stay *= rng.uniform(2.0, 4.0);
    const double release = press + stay;
    events.push_back({quantize_seconds(press), quantize_seconds(release), button});
    press = release + std::max(0.03, rng.normal(move_mean, move_sd));
    button = button == Button::left ? Button::right : Button::left;
  }
  return TapSession(std::move(events));
}

ReactionSession make_reaction(const ParticipantModel& m, double speed, Rng& rng) {
  const double nl = m.effect.noise_level;
  const double mu = m.reaction_mu + 0.1 * nl * rng.normal();
  std::vector<ReactionTrial> trials;
  double stimulus = rng.uniform(0.8, 1.5);
  bool any = false;
  for (int k = 0; k < kReactionTrials; ++k) {
    ReactionTrial trial;
    trial.stimulus = quantize_seconds(stimulus);
    const bool missed = rng.bernoulli(kReactionMissRate);
    const double lag = std::min(1.5, (kReactionShift + rng.lognormal(mu, m.reaction_sigma)) * speed);
    const double hold = rng.uniform(0.08, 0.15);
    if (!missed || (k == kReactionTrials - 1 && !any)) {
      trial.press = quantize_seconds(stimulus + lag);
      trial.release = quantize_seconds(stimulus + lag + hold);
      any = true;
    }
    trials.push_back(trial);
    stimulus += rng.uniform(2.0, 3.0);
  }
  return ReactionSession(std::move(trials));
}

std::int64_t base_day() {
  using namespace std::chrono;
  return sys_days{year{2026} / March / 2}.time_since_epoch().count();
}

}  // namespace

ActiveTestInstance generate_instance(const ParticipantModel& model, Condition condition, const Timestamp& start,
                                     std::uint64_t seed) {
  model.effect.validate();
  const double m = condition == Condition::treatment ? model.effect_magnitude : 0.0;
  const auto& e = model.effect;

  // One stream per test, so knobs of one test never shift another's draws.
  ActiveTestInstance inst;
  inst.participant_id = model.participant_id;
  inst.started_at = start;
  inst.label = condition == Condition::treatment ? Label::treatment : Label::baseline;
  Rng voice_rng(derive_seed(seed, 0)), balance_rng(derive_seed(seed, 1)), gait_rng(derive_seed(seed, 2)),
      tap_rng(derive_seed(seed, 3)), reaction_rng(derive_seed(seed, 4));
  inst.voice = make_voice(model, 1.0 + e.f0_shift * m, voice_rng);
  inst.balance = make_balance(model, balance_rng);
  inst.gait = make_gait(model, 1.0 + e.gait_y_gain * m, gait_rng);
  inst.dexterity = make_taps(model, 1.0 - e.tap_rhythm_stabilization * m, tap_rng);
  inst.reaction = make_reaction(model, 1.0 - e.reaction_speedup * m, reaction_rng);
  return inst;
}

ParticipantModel make_participant(const CohortConfig& config, int index) {
  Rng rng(derive_seed(derive_seed(config.seed, static_cast<std::uint64_t>(index)), 0));
  static constexpr int kOffsets[] = {-300, -240, 0, 60, 120, 330, 540};
  ParticipantModel m;
  char id[32];
  std::snprintf(id, sizeof id, "sim%04d", index + 1);
  m.participant_id = id;
  m.daily_led = std::round(rng.uniform(config.led_min, config.led_max));
  m.effect_magnitude = config.curve(m.daily_led);
  m.effect = config.profile;
  m.utc_offset_minutes = kOffsets[rng.index(std::size(kOffsets))];
  m.base_f0 = rng.uniform(100.0, 220.0);
  m.tap_stay_mean = rng.uniform(0.09, 0.14);
  m.tap_stay_sd = rng.uniform(0.02, 0.035);
  m.tap_move_mean = rng.uniform(0.15, 0.30);
  m.tap_move_sd = rng.uniform(0.04, 0.07);
  m.gait_step_hz = rng.uniform(1.6, 2.0);
  m.gait_amp_x = rng.uniform(0.4, 0.8);
  m.gait_amp_y = rng.uniform(0.8, 1.2);
  m.gait_amp_z = rng.uniform(0.3, 0.7);
  m.reaction_mu = std::log(rng.uniform(0.15, 0.30));
  m.reaction_sigma = 0.3;
  // Levodopa four times a day; dose/4*4 is exact, so the regimen reproduces the LED.
  if (m.daily_led > 0.0) m.regimen.push_back({"levodopa", m.daily_led / 4.0, 4.0});
  return m;
}

Cohort generate_cohort(const CohortConfig& config, int threads) {
  if (config.n_participants < 2) throw ContractError("a cohort needs at least 2 participants");
  if (config.pairs_per_participant < 1) throw ContractError("a cohort needs at least 1 pair per participant");
  if (!finite_all({config.led_min, config.led_max}) || config.led_min < 0.0 || config.led_max < config.led_min) {
    throw ContractError("LED range must satisfy 0 <= min <= max");
  }
  config.profile.validate();

  const auto n = static_cast<std::size_t>(config.n_participants);
  const auto pairs = static_cast<std::size_t>(config.pairs_per_participant);
  Cohort cohort;
  cohort.participants.resize(n);
  std::vector<std::vector<ActiveTestInstance>> per(n);
  parallel_for(n, threads, [&](std::size_t p) {
    const std::uint64_t pseed = derive_seed(config.seed, p);
    ParticipantModel model = make_participant(config, static_cast<int>(p));
    Rng schedule(derive_seed(pseed, 1));
    for (std::size_t j = 0; j < pairs; ++j) {
      const std::int64_t day = base_day() + static_cast<std::int64_t>(j);
      const double local_minutes = 7 * 60 + schedule.uniform(0.0, 5 * 60);
      Timestamp base;
      base.offset_minutes = model.utc_offset_minutes;
      base.utc_micros = (day * 1440 + static_cast<std::int64_t>(std::floor(local_minutes)) -
                         model.utc_offset_minutes) * 60'000'000LL;
      Timestamp treated = base;
      treated.utc_micros += static_cast<std::int64_t>(std::round(schedule.uniform(55.0, 65.0) * 60.0)) * 1'000'000LL;
      per[p].push_back(generate_instance(model, Condition::baseline, base, derive_seed(pseed, 2 + 2 * j)));
      per[p].push_back(generate_instance(model, Condition::treatment, treated, derive_seed(pseed, 3 + 2 * j)));
    }
    cohort.participants[p] = std::move(model);
  });
  for (std::size_t p = 0; p < n; ++p) {
    for (auto& inst : per[p]) cohort.instances.push_back(std::move(inst));
    const auto& model = cohort.participants[p];
    cohort.regimens.order.push_back(model.participant_id);
    cohort.regimens.items[model.participant_id] = model.regimen;
  }
  return cohort;
}

json cohort_manifest(const CohortConfig& config, const Cohort& cohort) {
  json participants = json::array();
  for (const auto& m : cohort.participants) participants.push_back(to_json(m));
  return {{"schema_version", kCohortSchemaVersion},
          {"kind", "medresp-cohort"},
          {"config", to_json(config)},
          {"n_instances", cohort.instances.size()},
          {"participants", participants}};
}

void write_cohort(const std::filesystem::path& dir, const CohortConfig& config, const Cohort& cohort,
                  bool inline_audio) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  InstanceWriteOptions options;
  options.inline_audio = inline_audio;
  options.output_dir = dir;
  std::vector<ActiveTestInstance> out;
  out.reserve(cohort.instances.size());
  std::map<std::string, int> counters;
  if (!inline_audio) fs::create_directories(dir / "audio");
  for (const auto& inst : cohort.instances) {
    ActiveTestInstance copy = inst;
    if (!inline_audio && copy.voice) {
      const int k = counters[inst.participant_id]++;
      char name[64];
      std::snprintf(name, sizeof name, "%s_%03d.wav", inst.participant_id.c_str(), k);
      const fs::path path = dir / "audio" / name;
      write_wav(path, *copy.voice);
      const auto samples = copy.voice->samples();
      copy.voice = AudioRecording(copy.voice->sample_rate(), std::vector<double>(samples.begin(), samples.end()),
                                  path.string());
    }
    out.push_back(std::move(copy));
  }
  {
    std::ofstream f(dir / "instances.jsonl", std::ios::binary);
    if (!f) throw InputError("cannot write " + (dir / "instances.jsonl").string());
    write_instances(f, out, options);
  }
  {
    std::ofstream f(dir / "regimens.csv", std::ios::binary);
    if (!f) throw InputError("cannot write " + (dir / "regimens.csv").string());
    write_regimens(f, cohort.regimens);
  }
  {
    std::ofstream f(dir / "manifest.json", std::ios::binary);
    if (!f) throw InputError("cannot write " + (dir / "manifest.json").string());
    f << cohort_manifest(config, cohort).dump(2) << '\n';
  }
}

}  // namespace medresp
