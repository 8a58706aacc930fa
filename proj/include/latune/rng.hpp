#ifndef LATUNE_RNG_HPP
#define LATUNE_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace latune {

/// Seed for a deterministic random stream. Equal seeds and equal call
/// sequences produce identical draws, independent of platform.
struct RngSeed {
  std::uint64_t value = 0;
};

namespace detail {

// splitmix64; used to derive decorrelated substream seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

/// Deterministic random stream. The engine core never uses the standard
/// library's distribution adaptors (their output is implementation-defined);
/// uniforms are built from raw mt19937_64 words so that a fixed seed
/// reproduces the same samples everywhere.
class Rng {
 public:
  explicit Rng(RngSeed seed) : gen_(seed.value) {}

  /// Substream `index` of a master seed. Distinct indices give
  /// decorrelated streams.
  static Rng substream(RngSeed master, std::uint64_t index) {
    return Rng(RngSeed{detail::mix64(master.value ^ detail::mix64(index))});
  }

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform double in [0, 1), 53 random bits.
  double next_unit() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double q) { return next_unit() < q; }

  /// Poisson draw. Inverse-transform for small means; larger means are
  /// split as a sum of two half-mean Poissons, which stays exact where a
  /// normal approximation would not.
  std::uint64_t poisson(double lambda) {
    if (lambda <= 0.0) return 0;
    if (lambda > kSplitThreshold) {
      return poisson(lambda / 2.0) + poisson(lambda / 2.0);
    }
    const double u = next_unit();
    double p = std::exp(-lambda);
    double cumulative = p;
    std::uint64_t k = 0;
    while (u >= cumulative) {
      ++k;
      p *= lambda / static_cast<double>(k);
      cumulative += p;
      if (k > kDrawCap) break;  // cumulative saturated numerically
    }
    return k;
  }

 private:
  static constexpr double kSplitThreshold = 30.0;
  static constexpr std::uint64_t kDrawCap = 20000;

  std::mt19937_64 gen_;
};

}  // namespace latune

#endif  // LATUNE_RNG_HPP
