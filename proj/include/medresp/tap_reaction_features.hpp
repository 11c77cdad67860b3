#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "medresp/registry.hpp"
#include "medresp/signal_core.hpp"

namespace medresp {

struct TapIntervals {
  std::vector<double> stay;  // release - press, one per event
  std::vector<double> move;  // next press - release, one per consecutive pair
};

/// Requires at least two events.
TapIntervals tap_intervals(const TapSession& session);

struct IntervalFeatures {
  FeatureVector features;
  /// Statistics that fell back to the 0 sentinel because the sample was too
  /// short (e.g. "tap_STAY_DFA").
  std::vector<std::string> short_stats;
};

/// mean, std, Q1, Q3, IQR, median, mode, range, skew, kurt, MSE, En,
/// meanTKEO, AR1, DFA as "<prefix>_<stat>". Requires at least two values.
IntervalFeatures interval_feature_set(std::span<const double> v, std::string_view prefix);

/// press - stimulus over responded trials. Throws when no trial was answered.
std::vector<double> reaction_lags(const ReactionSession& session);

/// sum, mean, std, Q1, Q3, IQR, median, mode, range, skew, kurt, MSE, En,
/// meanTKEO, DFA as "react_<stat>". Requires at least two lags.
IntervalFeatures extract_reaction_features(const ReactionSession& session);

/// tap_STAY_* followed by tap_MOVE_* (30 features).
IntervalFeatures extract_tap_features(const TapSession& session);

}  // namespace medresp
