#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "medresp/error.hpp"
#include "medresp/rng.hpp"
#include "medresp/spectral.hpp"
#include "oracles.hpp"

using namespace medresp;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<double> jittered(Rng& rng, double rate, double seconds) {
  std::vector<double> t;
  const double dt = 1.0 / rate;
  for (double now = 0.0; now <= seconds; now += dt * (1.0 + rng.uniform(-0.2, 0.2))) t.push_back(now);
  return t;
}

}  // namespace

TEST_CASE("grid spacing and range") {
  const auto grid = lomb_scargle_grid(10.0, 5.0);
  CHECK(grid.front() == doctest::Approx(0.1));
  CHECK(grid[1] - grid[0] == doctest::Approx(0.025));
  CHECK(grid.back() <= 5.0 + 1e-9);
  CHECK(grid.back() > 5.0 - 0.025);
  CHECK_THROWS_AS(lomb_scargle_grid(10.0, 0.01), ContractError);
}

TEST_CASE("periodogram recurrences match direct evaluation") {
  Rng rng(31);
  for (int trial = 0; trial < 5; ++trial) {
    const auto t = jittered(rng, 50.0, 10.0);
    std::vector<double> v;
    for (double ti : t) v.push_back(std::sin(kTwoPi * 2.3 * ti) + rng.normal(0.0, 0.5));
    const double nyq = mean_nyquist(t);
    const auto grid = lomb_scargle_grid(t.back() - t.front(), nyq);
    const auto peak = lomb_scargle_peak(t, v, nyq);
    double best = 0.0, best_f = 0.0;
    for (std::size_t k = 0; k < grid.size(); k += 7) {
      const double p = oracle::lomb_scargle(t, v, grid[k]);
      const double lib = lomb_scargle(t, v, std::vector<double>{grid[k]})[0];
      CHECK(oracle::close(lib, p, 1e-8));
    }
    for (double f : grid) {
      const double p = oracle::lomb_scargle(t, v, f);
      if (p > best) {
        best = p;
        best_f = f;
      }
    }
    CHECK(peak.frequency == doctest::Approx(best_f).epsilon(1e-12));
    CHECK(oracle::close(peak.power, best, 1e-8));
  }
}

TEST_CASE("lomb_scargle_peak examples") {
  Rng rng(5);
  const auto t = jittered(rng, 50.0, 10.0);
  const double step = 1.0 / (4.0 * (t.back() - t.front()));
  std::vector<double> single, mixed, flat(t.size(), 2.0);
  for (double ti : t) {
    single.push_back(std::sin(kTwoPi * 2.0 * ti));
    mixed.push_back(std::sin(kTwoPi * 1.0 * ti) + 0.2 * std::sin(kTwoPi * 3.0 * ti));
  }
  CHECK(std::abs(lomb_scargle_peak(t, single, mean_nyquist(t)).frequency - 2.0) <= step);
  CHECK(std::abs(lomb_scargle_peak(t, mixed, mean_nyquist(t)).frequency - 1.0) <= step);
  const auto none = lomb_scargle_peak(t, flat, mean_nyquist(t));
  CHECK(none.frequency == 0.0);
  CHECK(none.power == 0.0);

  std::vector<double> back = t;
  std::swap(back[3], back[4]);
  CHECK_THROWS_AS(lomb_scargle_peak(back, single, 10.0), ContractError);
  CHECK_THROWS_AS(lomb_scargle_peak(std::vector<double>(t.begin(), t.begin() + 15),
                                    std::vector<double>(single.begin(), single.begin() + 15), 10.0),
                  ContractError);
}

TEST_CASE("regular sampling agrees with an FFT argmax") {
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const double rate = 40.0;
    const std::size_t n = 400;
    const double f = rng.uniform(0.5, 15.0);
    const double phase = rng.uniform(0.0, kTwoPi);
    std::vector<double> t(n), v(n);
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = static_cast<double>(i) / rate;
      v[i] = std::sin(kTwoPi * f * t[i] + phase) + rng.normal(0.0, 0.1);
    }
    const double duration = t.back() - t.front();
    const double step = 1.0 / (4.0 * duration);
    const auto peak = lomb_scargle_peak(t, v, mean_nyquist(t));
    // FFT with the same resolution as the periodogram grid.
    std::size_t padded = next_pow2(static_cast<std::size_t>(std::ceil(4.0 * duration * rate)));
    std::vector<std::complex<double>> buf(padded);
    double mean = 0.0;
    for (double x : v) mean += x / n;
    for (std::size_t i = 0; i < n; ++i) buf[i] = v[i] - mean;
    fft(buf);
    std::size_t best = 1;
    for (std::size_t k = 1; k < padded / 2; ++k) {
      if (std::norm(buf[k]) > std::norm(buf[best])) best = k;
    }
    const double fft_f = rate * static_cast<double>(best) / static_cast<double>(padded);
    CHECK(std::abs(peak.frequency - fft_f) <= step);
  }
}

TEST_CASE("fft matches a direct DFT") {
  Rng rng(3);
  std::vector<std::complex<double>> x(64);
  for (auto& v : x) v = {rng.normal(), rng.normal()};
  auto y = x;
  fft(y);
  for (std::size_t k = 0; k < x.size(); ++k) {
    std::complex<long double> sum = 0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const long double a = -2.0L * oracle::kPi * k * j / x.size();
      sum += std::complex<long double>(x[j].real(), x[j].imag()) * std::complex<long double>(std::cos(a), std::sin(a));
    }
    CHECK(std::abs(y[k].real() - static_cast<double>(sum.real())) < 1e-10);
    CHECK(std::abs(y[k].imag() - static_cast<double>(sum.imag())) < 1e-10);
  }
  std::vector<std::complex<double>> odd(6);
  CHECK_THROWS(fft(odd));
}

TEST_CASE("dominant_frequency agrees with the DFT oracle") {
  Rng rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const double rate = 4000.0;
    const double f0 = rng.uniform(80.0, 400.0);
    std::vector<double> v(1000);
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double ph = kTwoPi * f0 * i / rate;
      v[i] = std::sin(ph) + 0.5 * std::sin(2 * ph) + rng.normal(0.0, 0.05);
    }
    const auto peak = dominant_frequency(v, rate, 50.0, 500.0);
    CHECK(peak.frequency == doctest::Approx(oracle::dft_argmax(v, rate, 4096, 50.0, 500.0)).epsilon(1e-12));
    CHECK(std::abs(peak.frequency - f0) <= rate / 4096);
  }
}
