#include "medresp/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "medresp/error.hpp"

namespace medresp {

std::vector<double> lomb_scargle_grid(double duration, double f_max) {
  if (!(duration > 0.0)) throw ContractError("lomb_scargle: duration must be positive");
  if (!(f_max > 0.0)) throw ContractError("lomb_scargle: f_max must be positive");
  const double f_lo = 1.0 / duration;
  const double step = 1.0 / (kLombScargleOversampling * duration);
  std::vector<double> grid;
  for (std::size_t k = 0;; ++k) {
    const double f = f_lo + static_cast<double>(k) * step;
    if (f > f_max * (1.0 + 1e-12)) break;
    grid.push_back(f);
  }
  if (grid.empty()) throw ContractError("lomb_scargle: f_max is below the lowest resolvable frequency");
  return grid;
}

double mean_nyquist(std::span<const double> t) {
  if (t.size() < 2) throw ContractError("mean_nyquist: need at least two samples");
  const double duration = t.back() - t.front();
  if (!(duration > 0.0)) throw ContractError("mean_nyquist: zero duration");
  return 0.5 * static_cast<double>(t.size() - 1) / duration;
}

namespace {

void check_times(std::span<const double> t, std::span<const double> v) {
  if (t.size() != v.size()) throw ContractError("lomb_scargle: t and v differ in length");
  if (t.size() < 16) throw ContractError("lomb_scargle: needs at least 16 samples");
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (!(t[i] > t[i - 1])) throw ContractError("lomb_scargle: timestamps not strictly increasing");
  }
  for (double x : v) {
    if (!std::isfinite(x)) throw ContractError("lomb_scargle: non-finite value");
  }
}

// Evaluates the periodogram on a uniform grid f0 + k*df, k < count, with
// per-sample trigonometric recurrences. The recurrences are re-anchored with
// exact sin/cos every kReanchor steps to bound rounding drift.
std::vector<double> lomb_scargle_uniform(std::span<const double> t, std::span<const double> v, double f0,
                                         double df, std::size_t count) {
  constexpr std::size_t kReanchor = 64;
  const std::size_t n = t.size();
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(n);
  std::vector<double> y(n), tt(n);
  double var = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = v[i] - mean;
    tt[i] = t[i] - t[0];
    var += y[i] * y[i];
  }
  var /= static_cast<double>(n - 1);
  std::vector<double> power(count, 0.0);
  // the mean of a constant series need not reproduce it exactly
  const bool constant = std::all_of(v.begin(), v.end(), [&](double x) { return x == v[0]; });
  if (constant || !(var > 0.0)) return power;

  std::vector<double> c(n), s(n), dc(n), ds(n);
  const double two_pi = 2.0 * std::numbers::pi;
  for (std::size_t i = 0; i < n; ++i) {
    dc[i] = std::cos(two_pi * df * tt[i]);
    ds[i] = std::sin(two_pi * df * tt[i]);
  }

  for (std::size_t k = 0; k < count; ++k) {
    if (k % kReanchor == 0) {
      const double f = f0 + static_cast<double>(k) * df;
      for (std::size_t i = 0; i < n; ++i) {
        c[i] = std::cos(two_pi * f * tt[i]);
        s[i] = std::sin(two_pi * f * tt[i]);
      }
    }
    // One pass gathers the sums; the tau-shifted sums follow from them by
    // rotation, and the recurrence advances to the next frequency.
    double yc = 0.0, ys = 0.0, sum_cc = 0.0, sum_cs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double ci = c[i], si = s[i];
      yc += y[i] * ci;
      ys += y[i] * si;
      sum_cc += ci * ci;
      sum_cs += ci * si;
      c[i] = ci * dc[i] - si * ds[i];
      s[i] = si * dc[i] + ci * ds[i];
    }
    const double sum_ss = static_cast<double>(n) - sum_cc;
    // tan(2 w tau) = sum sin(2wt) / sum cos(2wt)
    const double wtau = 0.5 * std::atan2(2.0 * sum_cs, sum_cc - sum_ss);
    const double cw = std::cos(wtau);
    const double sw = std::sin(wtau);
    const double ycc = yc * cw + ys * sw;
    const double yss = ys * cw - yc * sw;
    const double cc = cw * cw * sum_cc + 2.0 * cw * sw * sum_cs + sw * sw * sum_ss;
    const double ss = sw * sw * sum_cc - 2.0 * cw * sw * sum_cs + cw * cw * sum_ss;
    double p = 0.0;
    if (cc > 1e-12 * static_cast<double>(n)) p += ycc * ycc / cc;
    if (ss > 1e-12 * static_cast<double>(n)) p += yss * yss / ss;
    power[k] = p / (2.0 * var);
  }
  return power;
}

}  // namespace

std::vector<double> lomb_scargle(std::span<const double> t, std::span<const double> v,
                                 std::span<const double> freqs) {
  check_times(t, v);
  std::vector<double> out(freqs.size());
  // Generic grids are evaluated one frequency at a time.
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    out[k] = lomb_scargle_uniform(t, v, freqs[k], 0.0, 1)[0];
  }
  return out;
}

SpectralPeak lomb_scargle_peak(std::span<const double> t, std::span<const double> v, double f_max) {
  check_times(t, v);
  const double duration = t.back() - t.front();
  const auto grid = lomb_scargle_grid(duration, f_max);
  const double df = 1.0 / (kLombScargleOversampling * duration);
  const auto power = lomb_scargle_uniform(t, v, grid.front(), df, grid.size());
  const auto best = std::max_element(power.begin(), power.end());
  if (!(*best > 0.0)) return {};
  return {grid[static_cast<std::size_t>(best - power.begin())], *best};
}

std::size_t next_pow2(std::size_t n) noexcept {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0) throw ContractError("fft: size must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
    const std::size_t half = len / 2;
    // Twiddles computed directly rather than by repeated multiplication.
    std::vector<std::complex<double>> w(half);
    for (std::size_t k = 0; k < half; ++k) {
      w[k] = std::polar(1.0, ang * static_cast<double>(k));
    }
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const auto u = a[i + k];
        const auto x = a[i + k + half] * w[k];
        a[i + k] = u + x;
        a[i + k + half] = u - x;
      }
    }
  }
}

SpectralPeak dominant_frequency(std::span<const double> samples, double sample_rate, double f_lo,
                                double f_hi, std::size_t min_padding) {
  if (samples.empty()) throw ContractError("dominant_frequency: empty input");
  if (!(sample_rate > 0.0) || !(f_hi > f_lo)) throw ContractError("dominant_frequency: bad band");
  const std::size_t nfft = next_pow2(samples.size() * std::max<std::size_t>(min_padding, 1));
  const double mean =
      std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(samples.size());
  std::vector<std::complex<double>> buf(nfft);
  for (std::size_t i = 0; i < samples.size(); ++i) buf[i] = samples[i] - mean;
  fft(buf);

  const double bin_hz = sample_rate / static_cast<double>(nfft);
  auto k_lo = static_cast<std::size_t>(std::ceil(f_lo / bin_hz));
  auto k_hi = static_cast<std::size_t>(std::floor(f_hi / bin_hz));
  k_hi = std::min(k_hi, nfft / 2);
  if (k_lo > k_hi) throw ContractError("dominant_frequency: band contains no bins");
  SpectralPeak best{static_cast<double>(k_lo) * bin_hz, -1.0};
  for (std::size_t k = k_lo; k <= k_hi; ++k) {
    const double p = std::norm(buf[k]);
    if (p > best.power) best = {static_cast<double>(k) * bin_hz, p};
  }
  best.power /= static_cast<double>(samples.size());
  return best;
}

}  // namespace medresp
