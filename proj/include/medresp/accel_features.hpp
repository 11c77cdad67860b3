#pragma once

#include <optional>

#include "medresp/registry.hpp"
#include "medresp/signal_core.hpp"

namespace medresp {

inline constexpr std::size_t kAccelMinLength = 16;

struct AccelFeatureOptions {
  /// Upper periodogram frequency; defaults to half the mean sampling rate.
  std::optional<double> f_max;
};

/// 18 statistics on each of x, y, z, r, theta, phi plus XCORR/MI/xEn on the
/// raw axis pairs xy, xz, yz: 117 features named "<test>_<axis>_<stat>".
/// Throws ContractError for series shorter than 16 samples.
FeatureVector extract_accel_features(const AccelSeries& series, const AccelFeatureOptions& options = {});

}  // namespace medresp
