#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>

namespace orthostab {

/// SplitMix64 finalizer. Used as the sequential generator step and as the
/// mixing function of the keyed (counter-based) noise field.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Folds a word into a running hash state.
inline constexpr std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  return mix64(h ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2)));
}

/// Drops the low 32 mantissa bits, i.e. snaps to a 2^-20 relative grid.
/// Scaling by powers of two only touches the exponent, so doubling
/// trajectories stay on the grid. Negative zero collapses to +0.
inline std::uint64_t quantize_bits(double d) {
  if (d == 0.0) d = 0.0;
  const auto bits = std::bit_cast<std::uint64_t>(d);
  return bits & ~0xffffffffull;
}

/// Deterministic sequential random stream (SplitMix64). All sampling in the
/// library goes through explicit streams so runs are reproducible bit for
/// bit given the seed.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix64(state_);
  }

  /// Uniform in the open interval (0, 1).
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform in magnitude on a log scale over [lo, hi], lo > 0.
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }

  /// Standard normal via Box-Muller (no cached second value, so the state
  /// advance per call is fixed).
  double gaussian() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

 private:
  std::uint64_t state_;
};

}  // namespace orthostab
