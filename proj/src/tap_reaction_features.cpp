#include "medresp/tap_reaction_features.hpp"

#include "medresp/error.hpp"
#include "medresp/stats.hpp"

namespace medresp {

TapIntervals tap_intervals(const TapSession& session) {
  const auto events = session.events();
  if (events.size() < 2) throw ContractError("tap_intervals: needs at least 2 tap events");
  TapIntervals out;
  out.stay.reserve(events.size());
  out.move.reserve(events.size() - 1);
  for (std::size_t i = 0; i < events.size(); ++i) {
    out.stay.push_back(events[i].release - events[i].press);
    if (i + 1 < events.size()) out.move.push_back(events[i + 1].press - events[i].release);
  }
  return out;
}

namespace {

// Shared by the dexterity and reaction feature sets; `with_sum` / `with_ar1`
// select the two statistics in which those sets differ.
IntervalFeatures summary_features(std::span<const double> v, const std::string& prefix, bool with_sum,
                                  bool with_ar1) {
  if (v.size() < 2) {
    throw ContractError(prefix + ": needs at least 2 intervals, got " + std::to_string(v.size()));
  }
  const DescriptiveStats d = descriptive_stats(v);
  IntervalFeatures out;
  auto& f = out.features;
  const auto guarded = [&](const char* stat, std::size_t min_len, auto&& compute) {
    if (v.size() >= min_len) {
      f.add(prefix + "_" + stat, compute());
    } else {
      f.add(prefix + "_" + stat, 0.0);
      out.short_stats.push_back(prefix + "_" + stat);
    }
  };

  // sum == mean * count exactly
  if (with_sum) f.add(prefix + "_sum", d.mean * static_cast<double>(v.size()));
  f.add(prefix + "_mean", d.mean);
  f.add(prefix + "_std", d.std);
  f.add(prefix + "_Q1", d.q1);
  f.add(prefix + "_Q3", d.q3);
  f.add(prefix + "_IQR", d.iqr);
  f.add(prefix + "_median", d.median);
  f.add(prefix + "_mode", d.mode);
  f.add(prefix + "_range", d.range);
  f.add(prefix + "_skew", d.skew);
  f.add(prefix + "_kurt", d.kurt);
  f.add(prefix + "_MSE", d.mse);
  f.add(prefix + "_En", d.entropy);
  guarded("meanTKEO", 3, [&] { return mean_tkeo(v); });
  if (with_ar1) guarded("AR1", 3, [&] { return ar1(v); });
  guarded("DFA", kDfaMinLength, [&] { return dfa(v); });
  return out;
}

}  // namespace

IntervalFeatures interval_feature_set(std::span<const double> v, std::string_view prefix) {
  return summary_features(v, std::string(prefix), false, true);
}

std::vector<double> reaction_lags(const ReactionSession& session) {
  std::vector<double> lags;
  for (const auto& trial : session.trials()) {
    if (trial.responded()) lags.push_back(*trial.press - trial.stimulus);
  }
  if (lags.empty()) throw ContractError("reaction_lags: no responded trials");
  return lags;
}

IntervalFeatures extract_reaction_features(const ReactionSession& session) {
  return summary_features(reaction_lags(session), "react", true, false);
}

IntervalFeatures extract_tap_features(const TapSession& session) {
  const TapIntervals iv = tap_intervals(session);
  IntervalFeatures out = interval_feature_set(iv.stay, "tap_STAY");
  IntervalFeatures move = interval_feature_set(iv.move, "tap_MOVE");
  out.features.append(move.features);
  out.short_stats.insert(out.short_stats.end(), move.short_stats.begin(), move.short_stats.end());
  return out;
}

}  // namespace medresp
