#pragma once

#include <complex>
#include <span>
#include <vector>

namespace medresp {

struct SpectralPeak {
  double frequency = 0.0;  // Hz
  double power = 0.0;
};

/// Frequencies at which lomb_scargle_peak() evaluates the periodogram for a
/// record of the given duration: 1/T, 1/T + 1/(4T), ... up to f_max.
std::vector<double> lomb_scargle_grid(double duration, double f_max);

/// Oversampling factor of the Lomb-Scargle frequency grid.
inline constexpr double kLombScargleOversampling = 4.0;

/// Normalized Lomb-Scargle periodogram (mean removed, divided by twice the
/// sample variance, per-frequency time offset tau) at the given frequencies.
std::vector<double> lomb_scargle(std::span<const double> t, std::span<const double> v,
                                 std::span<const double> freqs);

/// Dominant frequency and its normalized power over lomb_scargle_grid().
/// Requires strictly increasing t, n >= 16 and f_max > 0. Zero-variance
/// input returns {0, 0}.
SpectralPeak lomb_scargle_peak(std::span<const double> t, std::span<const double> v, double f_max);

/// Half the mean sampling rate, (n-1) / (2 (t_last - t_first)).
double mean_nyquist(std::span<const double> t);

/// In-place radix-2 FFT; size must be a power of two.
void fft(std::vector<std::complex<double>>& data);

std::size_t next_pow2(std::size_t n) noexcept;

/// Frequency of the largest periodogram bin within [f_lo, f_hi] after
/// removing the mean and zero-padding to a power of two of at least
/// `min_padding` times the input length.
SpectralPeak dominant_frequency(std::span<const double> samples, double sample_rate, double f_lo,
                                double f_hi, std::size_t min_padding = 4);

}  // namespace medresp
