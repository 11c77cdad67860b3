#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "medresp/accel_features.hpp"
#include "medresp/error.hpp"
#include "medresp/evaluation.hpp"
#include "medresp/instance_io.hpp"
#include "medresp/led.hpp"
#include "medresp/rng.hpp"
#include "medresp/synth.hpp"
#include "medresp/voice_features.hpp"

using namespace medresp;

namespace {

ParticipantModel responder(double f0) {
  CohortConfig cfg;
  cfg.curve = ResponseCurve::flat(1.0);
  ParticipantModel m = make_participant(cfg, 0);
  m.base_f0 = f0;
  return m;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("response curve") {
  const ResponseCurve c;
  CHECK(c(0.0) < 0.05);
  CHECK(c(150.0) < 0.05);
  CHECK(c(1200.0) > 0.95);
  CHECK(c(3000.0) < 0.1);
  double best = 0.0, at = 0.0;
  for (double led = 0; led <= 3000; led += 10) {
    if (c(led) > best) best = c(led), at = led;
  }
  CHECK(at >= 500.0);
  CHECK(at <= 2000.0);
  CHECK(ResponseCurve::flat(0.4)(1234.0) == 0.4);
  const auto back = response_curve_from_json(to_json(c));
  CHECK(back(900.0) == c(900.0));
}

TEST_CASE("effect profile json") {
  EffectProfile p;
  p.f0_shift = 0.2;
  const auto q = effect_profile_from_json(to_json(p));
  CHECK(q.f0_shift == 0.2);
  CHECK(q.tap_rhythm_stabilization == p.tap_rhythm_stabilization);
  CHECK(effect_profile_from_json(nlohmann::json::object()).gait_y_gain == 0.2);
  CHECK_THROWS_AS(effect_profile_from_json(nlohmann::json{{"f0_shfit", 0.1}}), InputError);
  EffectProfile bad;
  bad.noise_level = 0.0;
  CHECK_THROWS_AS(bad.validate(), ContractError);
  bad = EffectProfile{};
  bad.tap_rhythm_stabilization = 1.0;
  CHECK_THROWS_AS(bad.validate(), ContractError);
}

TEST_CASE("generated instances are valid and deterministic") {
  const auto m = responder(150.0);
  const Timestamp ts = parse_rfc3339("2026-03-02T08:00:00+01:00");
  const auto a = generate_instance(m, Condition::baseline, ts, 5);
  CHECK(a == generate_instance(m, Condition::baseline, ts, 5));
  CHECK_FALSE(a == generate_instance(m, Condition::baseline, ts, 6));
  CHECK(a.has_all_tests());
  CHECK(a.label == Label::baseline);
  CHECK(a.started_at == ts);
  CHECK_NOTHROW(validate(a));

  // round trip through the external format
  const auto back = parse_instance(serialize_instance(a));
  CHECK(back == a);
}

TEST_CASE("null profile gives identical conditions") {
  ParticipantModel m = responder(150.0);
  m.effect = EffectProfile::null();
  const Timestamp ts = parse_rfc3339("2026-03-02T08:00:00Z");
  auto base = generate_instance(m, Condition::baseline, ts, 9);
  auto treat = generate_instance(m, Condition::treatment, ts, 9);
  treat.label = Label::baseline;
  CHECK(base == treat);
}

TEST_CASE("treatment raises F0 by the configured shift") {
  const auto m = responder(200.0);
  const Timestamp ts = parse_rfc3339("2026-03-02T08:00:00Z");
  double sum = 0.0;
  const int n = 20;
  for (int i = 0; i < n; ++i) {
    const auto inst = generate_instance(m, Condition::treatment, ts, 100 + i);
    sum += extract_voice_features(*inst.voice).features.at("voice_F0");
  }
  CHECK(std::abs(sum / n - 220.0) < 3.0);
}

TEST_CASE("gait y power ratio") {
  const auto m = responder(150.0);
  const Timestamp ts = parse_rfc3339("2026-03-02T08:00:00Z");
  double base = 0.0, treat = 0.0;
  for (int i = 0; i < 200; ++i) {
    const auto b = generate_instance(m, Condition::baseline, ts, derive_seed(1, 2 * i));
    const auto t = generate_instance(m, Condition::treatment, ts, derive_seed(1, 2 * i + 1));
    base += extract_accel_features(*b.gait).at("gait_y_AMP");
    treat += extract_accel_features(*t.gait).at("gait_y_AMP");
  }
  CHECK(treat / base == doctest::Approx(1.44).epsilon(0.08));
}

TEST_CASE("cohort layout and file determinism") {
  CohortConfig cfg;
  cfg.n_participants = 3;
  cfg.pairs_per_participant = 2;
  cfg.seed = 12;
  const auto c = generate_cohort(cfg);
  CHECK(c.participants.size() == 3);
  REQUIRE(c.instances.size() == 12);
  for (std::size_t i = 0; i < c.instances.size(); i += 2) {
    const auto& b = c.instances[i];
    const auto& t = c.instances[i + 1];
    CHECK(b.label == Label::baseline);
    CHECK(t.label == Label::treatment);
    CHECK(b.participant_id == t.participant_id);
    const double minutes = (t.started_at.utc_micros - b.started_at.utc_micros) / 60e6;
    CHECK(minutes >= 55.0);
    CHECK(minutes <= 65.0);
    CHECK(b.started_at.local_day() == t.started_at.local_day());
    if (i >= 2 && c.instances[i - 2].participant_id == b.participant_id) {
      CHECK(c.instances[i - 2].started_at.local_day() != b.started_at.local_day());
    }
  }
  for (const auto& p : c.participants) {
    CHECK(p.effect_magnitude == cfg.curve(p.daily_led));
    CHECK(daily_led(c.regimens.items.at(p.participant_id), default_led_table()) == doctest::Approx(p.daily_led));
  }
  CHECK(generate_cohort(cfg, 4).instances == c.instances);

  const auto root = std::filesystem::temp_directory_path() / "medresp_test_cohort";
  std::filesystem::remove_all(root);
  write_cohort(root / "a", cfg, c);
  write_cohort(root / "b", cfg, generate_cohort(cfg));
  for (const char* f : {"instances.jsonl", "regimens.csv", "manifest.json"}) {
    CHECK(slurp(root / "a" / f) == slurp(root / "b" / f));
  }
  CHECK(slurp(root / "a" / "audio" / (c.participants[0].participant_id + "_000.wav")).size() > 0);
  std::filesystem::remove_all(root);
}

TEST_CASE("null cohort features have uniform KS p-values") {
  CohortConfig cfg;
  cfg.n_participants = 4;
  cfg.pairs_per_participant = 10;
  cfg.profile = EffectProfile::null();
  cfg.seed = 3;
  const auto c = generate_cohort(cfg);
  std::vector<std::vector<double>> base, treat;
  for (const auto& inst : c.instances) {
    const auto f = extract_accel_features(*inst.gait);
    auto& dst = inst.label == Label::baseline ? base : treat;
    std::vector<double> row;
    for (const auto& [id, v] : f.entries()) row.push_back(v);
    dst.push_back(row);
  }
  int rejected = 0;
  const std::size_t p = base[0].size();
  for (std::size_t j = 0; j < p; ++j) {
    std::vector<double> a, b;
    for (const auto& r : base) a.push_back(r[j]);
    for (const auto& r : treat) b.push_back(r[j]);
    rejected += ks_two_sample(a, b).p < 0.01;
  }
  // 117 correlated tests at the 1% level
  CHECK(rejected <= 5);
}
