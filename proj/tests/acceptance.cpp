// Acceptance run: one PASS/FAIL line per criterion. Pass criterion numbers as
// arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "medresp/evaluation.hpp"
#include "medresp/extraction.hpp"
#include "medresp/forest.hpp"
#include "medresp/report.hpp"
#include "medresp/rng.hpp"
#include "medresp/spectral.hpp"
#include "medresp/stats.hpp"
#include "medresp/synth.hpp"
#include "oracles.hpp"

using namespace medresp;

namespace {

// Tolerances and budgets.
constexpr double kStatsRelTol = 1e-9;
constexpr double kStatsBudget = 10.0;
constexpr int kSpectralMinHits = 99;
constexpr double kSpectralBudget = 30.0;
constexpr double kDfaWhiteLo = 0.4, kDfaWhiteHi = 0.6;
constexpr double kDfaWalkLo = 1.4, kDfaWalkHi = 1.6;
constexpr double kDfaBudget = 60.0;
constexpr double kSeparableMin = 0.98;
constexpr double kNullLo = 0.45, kNullHi = 0.55;
constexpr int kSignalFirstMin = 45;
constexpr double kNullKsMinP = 0.01;
constexpr double kNullBudget = 5 * 60.0;
constexpr double kEffectMinAccuracy = 0.65;
constexpr double kEffectKsMaxP = 0.001;
constexpr double kEffectBudget = 15 * 60.0;
constexpr double kIdentityUlps = 4.0;
constexpr double kVertexLo = 500.0, kVertexHi = 2000.0;

// Desk-scale experiment settings for the end-to-end runs.
constexpr int kE2eRepetitions = 10;
constexpr int kE2eTrees = 200;
constexpr std::uint64_t kE2eSeed = 1;

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

using clk = std::chrono::steady_clock;

double since(clk::time_point t0) { return std::chrono::duration<double>(clk::now() - t0).count(); }

int threads() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

bool report(int id, bool pass, const std::string& detail) {
  std::printf("criterion %d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  return pass;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// relative error, floored at unit scale
double rel_err(double got, double want) {
  if (got == want) return 0.0;
  return std::abs(got - want) / std::max(std::abs(want), 1.0);
}

bool c1_stats() {
  const auto t0 = clk::now();
  Rng rng(101);
  double worst = 0.0;
  std::string worst_what;
  int binned_mismatch = 0;
  for (int k = 0; k < 1000; ++k) {
    const std::size_t n = 2 + rng.index(499);
    std::vector<double> v(n);
    switch (k % 4) {
      case 0: for (auto& x : v) x = rng.normal(3.0, 2.0); break;
      case 1: for (auto& x : v) x = rng.lognormal(0.0, 1.0); break;
      case 2: for (auto& x : v) x = rng.uniform(10.0, 20.0); break;
      default: for (auto& x : v) x = std::round(rng.normal(50.0, 5.0)); break;  // ties
    }
    const auto s = descriptive_stats(v);
    const auto m = oracle::moments(v);
    const std::pair<const char*, std::pair<double, double>> checks[] = {
        {"mean", {s.mean, m.mean}},
        {"std", {s.std, m.std}},
        {"Q1", {s.q1, oracle::quantile(v, 0.25)}},
        {"Q3", {s.q3, oracle::quantile(v, 0.75)}},
        {"IQR", {s.iqr, oracle::quantile(v, 0.75) - oracle::quantile(v, 0.25)}},
        {"median", {s.median, oracle::quantile(v, 0.5)}},
        {"skew", {s.skew, m.skew}},
        {"kurt", {s.kurt, m.kurt}},
        {"MSE", {s.mse, m.mse}},
        {"MCR", {s.mcr, oracle::mcr(v)}},
        {"range", {s.range, m.range}},
    };
    for (const auto& [what, pair] : checks) {
      const double e = rel_err(pair.first, pair.second);
      if (e > worst) {
        worst = e;
        worst_what = what;
      }
    }
    binned_mismatch += s.mode != oracle::mode16(v);
    binned_mismatch += s.entropy != oracle::entropy16(v);
  }
  const double secs = since(t0);
  return report(1, worst <= kStatsRelTol && binned_mismatch == 0 && secs < kStatsBudget,
                fmt("max rel err %.3g (%s), binned mismatches %d, %.1fs", worst, worst_what.c_str(),
                    binned_mismatch, secs));
}

bool c2_spectral() {
  const auto t0 = clk::now();
  Rng rng(202);
  int hits = 0;
  for (int k = 0; k < 100; ++k) {
    std::vector<double> t, v;
    const double f = rng.uniform(0.5, 15.0), phase = rng.uniform(0.0, kTwoPi);
    for (double now = 0.0; now <= 20.0; now += 0.025 * (1.0 + rng.uniform(-0.2, 0.2))) {
      t.push_back(now);
      v.push_back(std::sin(kTwoPi * f * now + phase) + rng.normal(0.0, 0.5));
    }
    const double step = 1.0 / (kLombScargleOversampling * (t.back() - t.front()));
    hits += std::abs(lomb_scargle_peak(t, v, mean_nyquist(t)).frequency - f) <= step;
  }
  int regular = 0;
  for (int k = 0; k < 100; ++k) {
    const double rate = 40.0;
    const std::size_t n = 800;
    const double f = rng.uniform(0.5, 15.0), phase = rng.uniform(0.0, kTwoPi);
    std::vector<double> t(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = static_cast<double>(i) / rate;
      v[i] = std::sin(kTwoPi * f * t[i] + phase) + rng.normal(0.0, 0.5);
    }
    const double duration = t.back() - t.front();
    const double step = 1.0 / (kLombScargleOversampling * duration);
    const std::size_t padded = next_pow2(static_cast<std::size_t>(std::ceil(kLombScargleOversampling * duration * rate)));
    std::vector<std::complex<double>> buf(padded);
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) buf[i] = v[i] - mean;
    fft(buf);
    std::size_t best = 1;
    for (std::size_t b = 1; b < padded / 2; ++b) {
      if (std::norm(buf[b]) > std::norm(buf[best])) best = b;
    }
    const double fft_f = rate * static_cast<double>(best) / static_cast<double>(padded);
    regular += std::abs(lomb_scargle_peak(t, v, mean_nyquist(t)).frequency - fft_f) <= step;
  }
  const double secs = since(t0);
  return report(2, hits >= kSpectralMinHits && regular == 100 && secs < kSpectralBudget,
                fmt("jittered %d/100 within one grid step, regular %d/100 match FFT argmax, %.1fs", hits, regular,
                    secs));
}

bool c3_dfa() {
  const auto t0 = clk::now();
  double wlo = 1e9, whi = -1e9, rlo = 1e9, rhi = -1e9;
  for (std::uint64_t s = 0; s < 50; ++s) {
    Rng rng(derive_seed(303, s));
    std::vector<double> white(4096), walk(4096);
    double acc = 0.0;
    for (std::size_t i = 0; i < 4096; ++i) {
      white[i] = rng.normal();
      acc += rng.normal();
      walk[i] = acc;
    }
    const double a = dfa(white), b = dfa(walk);
    wlo = std::min(wlo, a), whi = std::max(whi, a);
    rlo = std::min(rlo, b), rhi = std::max(rhi, b);
  }
  const double secs = since(t0);
  const bool ok = wlo >= kDfaWhiteLo && whi <= kDfaWhiteHi && rlo >= kDfaWalkLo && rhi <= kDfaWalkHi;
  return report(3, ok && secs < kDfaBudget,
                fmt("white noise alpha [%.3f, %.3f], random walk alpha [%.3f, %.3f], %.1fs", wlo, whi, rlo, rhi, secs));
}

Dataset synthetic(std::size_t n, std::size_t p, Rng& rng, const std::function<int(const std::vector<double>&, Rng&)>& label) {
  Dataset d;
  for (std::size_t j = 0; j < p; ++j) d.feature_ids.push_back("f" + std::to_string(j));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(p);
    for (auto& v : row) v = rng.normal();
    d.labels.push_back(label(row, rng));
    d.rows.push_back(std::move(row));
  }
  return d;
}

bool c4_forest() {
  const auto t0 = clk::now();
  CVConfig cv;
  cv.repetitions = 1;
  cv.forest.n_trees = 50;

  Rng rng(404);
  const Dataset sep = synthetic(500, 1, rng, [](const auto& r, Rng&) { return r[0] > 0.0 ? 1 : 0; });
  cv.seed = 1;
  const double sep_acc = repeated_cv(sep, cv, threads()).accuracy.mean;

  Dataset null = synthetic(300, 10, rng, [](const auto& r, Rng& g) { return r[0] + g.normal() > 0.0 ? 1 : 0; });
  double null_sum = 0.0;
  for (std::uint64_t k = 0; k < 50; ++k) {
    Rng perm(derive_seed(405, k));
    for (std::size_t i = null.labels.size(); i > 1; --i) std::swap(null.labels[i - 1], null.labels[perm.index(i)]);
    cv.seed = k;
    null_sum += repeated_cv(null, cv, threads()).accuracy.mean;
  }
  const double null_acc = null_sum / 50.0;

  int first = 0;
  for (std::uint64_t k = 0; k < 50; ++k) {
    Rng g(derive_seed(406, k));
    const std::size_t signal = k % 10;
    const Dataset d = synthetic(300, 10, g, [&](const auto& r, Rng& h) { return r[signal] + 0.5 * h.normal() > 0 ? 1 : 0; });
    ForestConfig fc;
    fc.n_trees = 100;
    fc.seed = k;
    const auto imp = train_forest(d, fc, threads()).importance();
    first += static_cast<std::size_t>(std::max_element(imp.begin(), imp.end()) - imp.begin()) == signal;
  }
  const bool ok = sep_acc >= kSeparableMin && null_acc >= kNullLo && null_acc <= kNullHi && first >= kSignalFirstMin;
  return report(4, ok,
                fmt("separable CV accuracy %.4f, permutation null mean %.4f, signal feature first %d/50, %.1fs",
                    sep_acc, null_acc, first, since(t0)));
}

bool c5_harness() {
  const auto t0 = clk::now();
  Rng rng(505);
  Dataset d = synthetic(1000, 5, rng, [](const auto& r, Rng& g) { return r[0] - r[1] + g.normal() > 0 ? 1 : 0; });
  CVConfig cv;
  cv.repetitions = 100;
  cv.seed = 5;
  cv.forest.n_trees = 5;
  const CVResult one = repeated_cv(d, cv, 1);
  const CVResult eight = repeated_cv(d, cv, 8);

  bool once = one.folds.size() == 100;
  bool identities = true;
  for (std::size_t r = 0; r < one.confusion.size(); ++r) {
    // every row sits in exactly one validation fold and is counted once
    once = once && one.folds[r].size() == d.size() && one.confusion[r].total() == d.size() &&
           one.random_confusion[r].total() == d.size();
    std::vector<std::size_t> per_fold(10, 0);
    for (int f : one.folds[r]) {
      if (f < 0 || f >= 10) once = false;
      else ++per_fold[static_cast<std::size_t>(f)];
    }
    once = once && std::accumulate(per_fold.begin(), per_fold.end(), std::size_t{0}) == d.size();

    const auto& cm = one.confusion[r];
    const auto& m = one.per_repetition[r];
    identities = identities && cm.positives() == d.count(1) && cm.negatives() == d.count(0) &&
                 m.sensitivity == static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn) &&
                 m.specificity == static_cast<double>(cm.tn) / static_cast<double>(cm.tn + cm.fp) &&
                 m.accuracy == static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
    // accuracy = (sens P + spec N) / (P + N); exact in the counts, rounding in doubles
    const double p = static_cast<double>(cm.positives()), n = static_cast<double>(cm.negatives());
    const double recombined = (m.sensitivity * p + m.specificity * n) / (p + n);
    identities = identities && std::abs(recombined - m.accuracy) <= kIdentityUlps * 0x1p-52 * m.accuracy;
  }
  const bool identical = one == eight;
  return report(5, once && identities && identical,
                fmt("each row validated once per repetition: %s, metric identities: %s, threads 1 vs 8 identical: %s, "
                    "%.1fs",
                    once ? "yes" : "no", identities ? "yes" : "no", identical ? "yes" : "no", since(t0)));
}

struct Experiment {
  Cohort cohort;
  Dataset data;
  CVResult cv;
  KsResult ks;
  double seconds = 0.0;
};

Experiment run_experiment(const CohortConfig& cohort_config) {
  const auto t0 = clk::now();
  Experiment e;
  e.cohort = generate_cohort(cohort_config, threads());
  const auto pairs = pair_instances(e.cohort.instances, PairingWindow{});
  std::vector<ActiveTestInstance> paired;
  for (const auto& p : pairs) {
    paired.push_back(p.baseline);
    paired.push_back(p.treatment);
  }
  const auto features = extract_all(paired, {}, threads());
  e.data = dataset_from_table(build_feature_table(features).table);
  CVConfig cv;
  cv.repetitions = kE2eRepetitions;
  cv.seed = kE2eSeed;
  cv.forest.n_trees = kE2eTrees;
  e.cv = repeated_cv(e.data, cv, threads());
  std::vector<double> forest, random;
  for (const auto& m : e.cv.per_repetition) forest.push_back(m.accuracy);
  for (const auto& m : e.cv.random_per_repetition) random.push_back(m.accuracy);
  e.ks = ks_two_sample(forest, random);
  e.seconds = since(t0);
  return e;
}

bool c6_null() {
  CohortConfig cc;
  cc.n_participants = 20;
  cc.pairs_per_participant = 20;
  cc.profile = EffectProfile::null();
  cc.seed = kE2eSeed;
  const auto e = run_experiment(cc);
  const double acc = e.cv.accuracy.mean;
  const bool ok = acc >= kNullLo && acc <= kNullHi && e.ks.p >= kNullKsMinP && e.seconds < kNullBudget;
  return report(6, ok,
                fmt("%zu instances, accuracy %.4f +- %.4f, random %.4f, KS D %.2f p %.3g, %.0fs", e.data.size(), acc,
                    e.cv.accuracy.std, e.cv.random_accuracy.mean, e.ks.d, e.ks.p, e.seconds));
}

void c7_c8_effect(bool run7, bool run8, bool& ok7, bool& ok8) {
  CohortConfig cc;
  cc.n_participants = 50;
  cc.pairs_per_participant = 20;
  cc.seed = kE2eSeed;
  const auto e = run_experiment(cc);

  const auto order = importance_ranking(e.cv.importance);
  std::set<std::string> top10;
  std::string listed;
  for (std::size_t k = 0; k < 10 && k < order.size(); ++k) {
    top10.insert(e.data.feature_ids[order[k]]);
    listed += (k ? "," : "") + e.data.feature_ids[order[k]];
  }
  const bool leaders = top10.count("tap_STAY_IQR") && top10.count("gait_y_AMP") && top10.count("voice_F0");
  const double acc = e.cv.accuracy.mean;
  if (run7) {
    ok7 = report(7, acc >= kEffectMinAccuracy && e.ks.p < kEffectKsMaxP && leaders && e.seconds < kEffectBudget,
                 fmt("%zu instances, accuracy %.4f +- %.4f, random %.4f, KS p %.3g, top10 [%s], %.0fs", e.data.size(),
                     acc, e.cv.accuracy.std, e.cv.random_accuracy.mean, e.ks.p, listed.c_str(), e.seconds));
  }
  if (run8) {
    std::vector<LedPoint> points;
    for (const auto& m : e.cohort.participants) {
      const auto it = e.cv.per_participant.find(m.participant_id);
      if (it == e.cv.per_participant.end()) continue;
      points.push_back({m.participant_id, m.daily_led, it->second.accuracy(), it->second.n_instances});
    }
    const auto fit = accuracy_vs_led(points);
    const bool ok = fit.vertex && fit.vertex_is_maximum && *fit.vertex >= kVertexLo && *fit.vertex <= kVertexHi &&
                    e.seconds < kEffectBudget;
    ok8 = report(8, ok,
                 fmt("%zu participants, vertex %.0f mg (%s), c2 %.3g, %.0fs", fit.n_points, fit.vertex.value_or(NAN),
                     fit.vertex_is_maximum ? "maximum" : "minimum", fit.c2, e.seconds));
  }
}

bool c9_ks() {
  Rng rng(909);
  int exact = 0;
  for (int k = 0; k < 200; ++k) {
    const std::size_t n = 1 + rng.index(60), m = 1 + rng.index(60);
    std::vector<double> a(n), b(m);
    const bool coarse = k % 2 == 0;
    for (auto& v : a) v = coarse ? std::round(rng.normal() * 3) : rng.normal();
    for (auto& v : b) v = coarse ? std::round(rng.normal(0.5, 1.0) * 3) : rng.normal(0.5, 1.0);
    exact += ks_two_sample(a, b).d == oracle::ks_statistic(a, b);
  }
  const std::vector<double> same{0.61, 0.62, 0.62, 0.65, 0.7};
  const auto id = ks_two_sample(same, same);
  const auto disjoint = ks_two_sample(std::vector<double>(10, 0.5), std::vector<double>(10, 0.7));
  return report(9, exact == 200 && id.p == 1.0 && disjoint.d == 1.0,
                fmt("statistic exact on %d/200 pairs, identical samples p %.3g, disjoint point masses D %.3g", exact,
                    id.p, disjoint.d));
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> want;
  for (int i = 1; i < argc; ++i) want.insert(std::atoi(argv[i]));
  auto on = [&](int id) { return want.empty() || want.count(id) > 0; };

  bool all = true;
  if (on(1)) all &= c1_stats();
  if (on(2)) all &= c2_spectral();
  if (on(3)) all &= c3_dfa();
  if (on(4)) all &= c4_forest();
  if (on(5)) all &= c5_harness();
  if (on(6)) all &= c6_null();
  if (on(7) || on(8)) {
    bool ok7 = true, ok8 = true;
    c7_c8_effect(on(7), on(8), ok7, ok8);
    all &= ok7 && ok8;
  }
  if (on(9)) all &= c9_ks();
  return all ? 0 : 1;
}
