#include "medresp/accel_features.hpp"

#include <array>
#include <string>
#include <tuple>

#include "medresp/error.hpp"
#include "medresp/spectral.hpp"
#include "medresp/stats.hpp"

namespace medresp {

FeatureVector extract_accel_features(const AccelSeries& series, const AccelFeatureOptions& options) {
  const std::string test(to_string(series.test()));
  if (series.size() < kAccelMinLength) {
    throw ContractError(test + ": acceleration series has " + std::to_string(series.size()) +
                        " samples, need at least " + std::to_string(kAccelMinLength));
  }
  const SphericalSeries sph = to_spherical(series);
  const auto t = series.t();
  const double f_max = options.f_max.value_or(mean_nyquist(t));

  const std::array<std::pair<const char*, std::span<const double>>, 6> axes{{
      {"x", series.x()},
      {"y", series.y()},
      {"z", series.z()},
      {"r", sph.r},
      {"theta", sph.theta},
      {"phi", sph.phi},
  }};

  FeatureVector out;
  for (const auto& [axis, v] : axes) {
    const std::string prefix = test + "_" + axis + "_";
    const DescriptiveStats d = descriptive_stats(v);
    const SpectralPeak peak = lomb_scargle_peak(t, v, f_max);
    out.add(prefix + "mean", d.mean);
    out.add(prefix + "std", d.std);
    out.add(prefix + "Q1", d.q1);
    out.add(prefix + "Q3", d.q3);
    out.add(prefix + "IQR", d.iqr);
    out.add(prefix + "median", d.median);
    out.add(prefix + "mode", d.mode);
    out.add(prefix + "range", d.range);
    out.add(prefix + "skew", d.skew);
    out.add(prefix + "kurt", d.kurt);
    out.add(prefix + "MSE", d.mse);
    out.add(prefix + "En", d.entropy);
    out.add(prefix + "MCR", d.mcr);
    out.add(prefix + "DFC", peak.frequency);
    out.add(prefix + "AMP", peak.power);
    out.add(prefix + "meanTKEO", mean_tkeo(v));
    out.add(prefix + "AR1", ar1(v));
    out.add(prefix + "DFA", dfa(v));
  }

  const std::array<std::tuple<const char*, std::span<const double>, std::span<const double>>, 3> pairs{{
      {"xy", series.x(), series.y()},
      {"xz", series.x(), series.z()},
      {"yz", series.y(), series.z()},
  }};
  for (const auto& [name, a, b] : pairs) {
    const PairwiseStats p = pairwise_features(a, b);
    const std::string prefix = test + "_" + name + "_";
    out.add(prefix + "XCORR", p.xcorr);
    out.add(prefix + "MI", p.mi);
    out.add(prefix + "xEn", p.xen);
  }
  return out;
}

}  // namespace medresp
