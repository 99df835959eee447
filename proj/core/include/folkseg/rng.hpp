#pragma once

#include <cstdint>
#include <random>

namespace folkseg {

/// Seeded random source with platform-independent draws.
///
/// The standard distributions are implementation defined, so corpora
/// generated with them would differ between standard libraries. Only the
/// engine (mt19937_64, fully specified) is taken from <random>; the
/// transforms below are fixed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer on [0, n), unbiased. n must be > 0.
  std::uint64_t below(std::uint64_t n);
  /// Standard normal via the polar method.
  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// splitmix64 finalizer; used to derive independent child seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace folkseg
