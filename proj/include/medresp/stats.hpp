#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace medresp {

/// Histogram bin count used for mode, entropy and cross-entropy.
inline constexpr int kMarginalBins = 16;
/// Per-axis bin count of the joint histogram used for mutual information.
inline constexpr int kJointBins = 8;

/// Bin of `v` among `bins` equal-width bins over [lo, hi]. The top edge
/// belongs to the last bin; a degenerate range maps everything to bin 0.
int equal_width_bin(double v, double lo, double hi, int bins) noexcept;

/// Sorted-sample quantile by linear interpolation at position p*(n-1).
double quantile_sorted(std::span<const double> sorted, double p);

struct DescriptiveStats {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (n-1)
  double q1 = 0.0;
  double q3 = 0.0;
  double iqr = 0.0;
  double median = 0.0;
  double mode = 0.0;   // centre of the most populated of 16 bins
  double range = 0.0;
  double skew = 0.0;   // m3 / m2^1.5
  double kurt = 0.0;   // m4 / m2^2 - 3
  double mse = 0.0;    // mean of squares
  double entropy = 0.0;  // bits, 16-bin histogram
  double mcr = 0.0;    // mean-crossing rate
};

/// Requires at least two finite values; throws ContractError otherwise.
/// Zero-variance input yields std = skew = kurt = 0.
DescriptiveStats descriptive_stats(std::span<const double> v);

/// Mean Teager-Kaiser energy, psi[n] = v[n]^2 - v[n-1] v[n+1], over the
/// interior samples. Requires n >= 3.
double mean_tkeo(std::span<const double> v);

/// Pearson correlation at lag 0; 0 when either side has zero variance.
double pearson(std::span<const double> a, std::span<const double> b);

/// Lag-1 autocorrelation as the Pearson correlation of v[0..n-2] with
/// v[1..n-1]. Requires n >= 3.
double ar1(std::span<const double> v);

inline constexpr std::size_t kDfaMinLength = 16;

/// Box sizes used by dfa() for a series of length n.
std::vector<std::size_t> dfa_box_sizes(std::size_t n);

/// Detrended fluctuation analysis scaling exponent (linear detrending in
/// non-overlapping boxes of the integrated, mean-removed series). Requires
/// n >= 16; returns 0 when the series has no fluctuation.
double dfa(std::span<const double> v);

struct PairwiseStats {
  double xcorr = 0.0;  // Pearson at lag 0
  double mi = 0.0;     // mutual information, bits, 8x8 joint histogram
  double xen = 0.0;    // cross-entropy of a against add-one smoothed b, bits
};

/// Requires equal lengths >= 16.
PairwiseStats pairwise_features(std::span<const double> a, std::span<const double> b);

}  // namespace medresp
