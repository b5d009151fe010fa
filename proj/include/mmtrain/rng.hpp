#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace mmtrain {

/// splitmix64 finalizer; used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seeded random stream. Streams for parallel trials are derived from
/// (master seed, stream index) so results do not depend on scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  static Rng for_stream(std::uint64_t master_seed, std::uint64_t stream) {
    return Rng(mix64(master_seed) ^ mix64(stream + 0x632BE59BD9B4E019ULL));
  }

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

  /// Uniform integer in [0, bound).
  std::size_t below(std::size_t bound) {
    return std::uniform_int_distribution<std::size_t>(0, bound - 1)(engine_);
  }

  bool bernoulli(double p) { return uniform() < p; }

  double normal() { return normal_(engine_); }

  /// Circularly-symmetric complex Gaussian with E|w|^2 = variance.
  std::complex<double> complex_normal(double variance = 1.0) {
    const double s = std::sqrt(variance / 2.0);
    const double re = normal();
    const double im = normal();
    return {s * re, s * im};
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace mmtrain
