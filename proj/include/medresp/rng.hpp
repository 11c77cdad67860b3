#pragma once

#include <cstdint>
#include <random>

namespace medresp {

/// Deterministic seed derivation. Every random stream in the library is
/// obtained as `derive_seed(parent, index)`, so results never depend on the
/// order in which streams are consumed or on the number of worker threads.
///
/// Derivation: splitmix64 finalizer applied to (parent + golden * (index + 1)).
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) noexcept;

/// Seedable generator with portable distributions.
///
/// std::mt19937_64 with hand-written distributions; sequences are identical
/// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer on [0, n). Unbiased (rejection sampling). n must be > 0.
  std::uint64_t index(std::uint64_t n);

  /// Standard normal via Box-Muller; the spare deviate is cached.
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }

  double lognormal(double mu, double sigma);

  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace medresp
