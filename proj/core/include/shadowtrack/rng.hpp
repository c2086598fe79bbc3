#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace shadowtrack {

/// Random source shared by the simulators and the filter.
///
/// Wraps a 64-bit Mersenne Twister together with the standard-normal
/// distribution object, so the polar-method cache is part of the stream
/// state: two Rng objects built from the same seed and driven through the
/// same call sequence produce identical values.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Standard normal draw.
  double normal() { return normal_(engine_); }

  /// Uniform on [0, 1).
  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }

  /// Uniform index in [0, n). Requires n > 0.
  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Poisson count; a nonpositive mean always yields 0.
  unsigned poisson(double mean);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Derives an independent substream seed from (base, stream, index) with a
/// SplitMix64 finalizer. Pure function of its arguments.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream, std::uint64_t index = 0);

}  // namespace shadowtrack
