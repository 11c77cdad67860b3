#include "medresp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "medresp/error.hpp"

namespace medresp {

namespace {

void require_finite(std::span<const double> v, const char* op) {
  for (double x : v) {
    if (!std::isfinite(x)) throw ContractError(std::string(op) + ": non-finite input");
  }
}

void require_length(std::span<const double> v, std::size_t min, const char* op) {
  if (v.size() < min) {
    throw ContractError(std::string(op) + ": needs at least " + std::to_string(min) +
                        " values, got " + std::to_string(v.size()));
  }
}

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double entropy_bits(std::span<const std::size_t> counts, std::size_t total) {
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(total);
    h -= p * std::log2(p);
  }
  return h;
}

}  // namespace

int equal_width_bin(double v, double lo, double hi, int bins) noexcept {
  if (!(hi > lo)) return 0;
  const int k = static_cast<int>(std::floor((v - lo) / (hi - lo) * bins));
  return std::clamp(k, 0, bins - 1);
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw ContractError("quantile of empty sample");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

DescriptiveStats descriptive_stats(std::span<const double> v) {
  require_length(v, 2, "descriptive_stats");
  require_finite(v, "descriptive_stats");
  const std::size_t n = v.size();
  const double dn = static_cast<double>(n);

  std::vector<double> sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end());
  const double lo = sorted.front();
  const double hi = sorted.back();
  const bool constant = lo == hi;

  DescriptiveStats s;
  s.mean = mean_of(v);
  s.range = hi - lo;
  s.q1 = quantile_sorted(sorted, 0.25);
  s.median = quantile_sorted(sorted, 0.5);
  s.q3 = quantile_sorted(sorted, 0.75);
  s.iqr = s.q3 - s.q1;

  double m2 = 0.0, m3 = 0.0, m4 = 0.0, sq = 0.0;
  for (double x : v) {
    const double d = x - s.mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
    sq += x * x;
  }
  s.mse = sq / dn;
  if (!constant) {
    s.std = std::sqrt(m2 / (dn - 1.0));
    m2 /= dn;
    m3 /= dn;
    m4 /= dn;
    s.skew = m3 / std::pow(m2, 1.5);
    s.kurt = m4 / (m2 * m2) - 3.0;
  }

  std::size_t counts[kMarginalBins] = {};
  for (double x : v) ++counts[equal_width_bin(x, lo, hi, kMarginalBins)];
  s.entropy = entropy_bits(counts, n);
  const int top = static_cast<int>(std::max_element(std::begin(counts), std::end(counts)) - std::begin(counts));
  const double width = (hi - lo) / kMarginalBins;
  s.mode = lo + (top + 0.5) * width;

  std::size_t crossings = 0;
  for (std::size_t i = 1; i < n; ++i) {
    if ((v[i - 1] - s.mean) * (v[i] - s.mean) < 0.0) ++crossings;
  }
  s.mcr = static_cast<double>(crossings) / (dn - 1.0);
  return s;
}

double mean_tkeo(std::span<const double> v) {
  require_length(v, 3, "mean_tkeo");
  double sum = 0.0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) sum += v[i] * v[i] - v[i - 1] * v[i + 1];
  return sum / static_cast<double>(v.size() - 2);
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ContractError("pearson: unequal lengths");
  if (a.size() < 2) return 0.0;
  const double ma = mean_of(a);
  const double mb = mean_of(b);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma;
    const double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  const auto [amin, amax] = std::minmax_element(a.begin(), a.end());
  const auto [bmin, bmax] = std::minmax_element(b.begin(), b.end());
  if (*amin == *amax || *bmin == *bmax) return 0.0;
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double ar1(std::span<const double> v) {
  require_length(v, 3, "ar1");
  return pearson(v.first(v.size() - 1), v.subspan(1));
}

std::vector<std::size_t> dfa_box_sizes(std::size_t n) {
  constexpr std::size_t kMinBox = 4;
  constexpr std::size_t kMaxCandidates = 20;
  // short series: widen to n/2, at most 8
  const std::size_t hi = std::max(n / 4, std::min<std::size_t>(8, n / 2));
  std::vector<std::size_t> sizes;
  if (hi < kMinBox) return sizes;
  if (hi - kMinBox + 1 <= kMaxCandidates) {
    for (std::size_t s = kMinBox; s <= hi; ++s) sizes.push_back(s);
    return sizes;
  }
  const double log_lo = std::log(static_cast<double>(kMinBox));
  const double log_hi = std::log(static_cast<double>(hi));
  for (std::size_t k = 0; k < kMaxCandidates; ++k) {
    const double f = static_cast<double>(k) / (kMaxCandidates - 1);
    const auto s = static_cast<std::size_t>(std::llround(std::exp(log_lo + f * (log_hi - log_lo))));
    if (sizes.empty() || s != sizes.back()) sizes.push_back(std::clamp(s, kMinBox, hi));
  }
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  return sizes;
}

double dfa(std::span<const double> v) {
  require_length(v, kDfaMinLength, "dfa");
  require_finite(v, "dfa");
  const std::size_t n = v.size();
  const double mean = mean_of(v);
  std::vector<double> profile(n);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += v[i] - mean;
    profile[i] = acc;
  }

  std::vector<double> log_n, log_f;
  for (std::size_t box : dfa_box_sizes(n)) {
    const std::size_t boxes = n / box;
    // x = 0..box-1 within each box
    const double xm = (static_cast<double>(box) - 1.0) / 2.0;
    double sxx = 0.0;
    for (std::size_t j = 0; j < box; ++j) sxx += (j - xm) * (j - xm);
    double rss_total = 0.0;
    for (std::size_t b = 0; b < boxes; ++b) {
      const double* y = profile.data() + b * box;
      double ym = 0.0;
      for (std::size_t j = 0; j < box; ++j) ym += y[j];
      ym /= static_cast<double>(box);
      double sxy = 0.0, syy = 0.0;
      for (std::size_t j = 0; j < box; ++j) {
        const double dy = y[j] - ym;
        sxy += (j - xm) * dy;
        syy += dy * dy;
      }
      rss_total += std::max(0.0, syy - sxy * sxy / sxx);
    }
    const double f = std::sqrt(rss_total / static_cast<double>(boxes * box));
    if (f > 0.0) {
      log_n.push_back(std::log(static_cast<double>(box)));
      log_f.push_back(std::log(f));
    }
  }
  if (log_n.size() < 2) return 0.0;

  const double mx = mean_of(log_n);
  const double my = mean_of(log_f);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < log_n.size(); ++i) {
    sxy += (log_n[i] - mx) * (log_f[i] - my);
    sxx += (log_n[i] - mx) * (log_n[i] - mx);
  }
  return sxy / sxx;
}

PairwiseStats pairwise_features(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ContractError("pairwise_features: unequal lengths");
  require_length(a, 16, "pairwise_features");
  require_finite(a, "pairwise_features");
  require_finite(b, "pairwise_features");
  const std::size_t n = a.size();

  PairwiseStats out;
  out.xcorr = pearson(a, b);

  const auto [amin_it, amax_it] = std::minmax_element(a.begin(), a.end());
  const auto [bmin_it, bmax_it] = std::minmax_element(b.begin(), b.end());
  const double amin = *amin_it, amax = *amax_it, bmin = *bmin_it, bmax = *bmax_it;

  std::size_t joint[kJointBins][kJointBins] = {};
  std::size_t pa[kJointBins] = {};
  std::size_t pb[kJointBins] = {};
  for (std::size_t i = 0; i < n; ++i) {
    const int ia = equal_width_bin(a[i], amin, amax, kJointBins);
    const int ib = equal_width_bin(b[i], bmin, bmax, kJointBins);
    ++joint[ia][ib];
    ++pa[ia];
    ++pb[ib];
  }
  const double dn = static_cast<double>(n);
  double mi = 0.0;
  for (int i = 0; i < kJointBins; ++i) {
    for (int j = 0; j < kJointBins; ++j) {
      if (joint[i][j] == 0) continue;
      const double pij = joint[i][j] / dn;
      mi += pij * std::log2(pij / ((pa[i] / dn) * (pb[j] / dn)));
    }
  }
  out.mi = std::max(0.0, mi);

  const double lo = std::min(amin, bmin);
  const double hi = std::max(amax, bmax);
  std::size_t ca[kMarginalBins] = {};
  std::size_t cb[kMarginalBins] = {};
  for (std::size_t i = 0; i < n; ++i) {
    ++ca[equal_width_bin(a[i], lo, hi, kMarginalBins)];
    ++cb[equal_width_bin(b[i], lo, hi, kMarginalBins)];
  }
  double xen = 0.0;
  for (int k = 0; k < kMarginalBins; ++k) {
    if (ca[k] == 0) continue;
    const double p = ca[k] / dn;
    const double q = (cb[k] + 1.0) / (dn + kMarginalBins);
    xen -= p * std::log2(q);
  }
  out.xen = xen;
  return out;
}

}  // namespace medresp
