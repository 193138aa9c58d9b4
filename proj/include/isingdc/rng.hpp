#pragma once

// Counter-based pseudo-random generation.
//
// Every stream is a SplitMix64 sequence keyed by (seed, stream id). Row-wise
// generators open one stream per row so that any row range can be produced
// independently, in any order, by any worker, with identical results.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace isingdc {

/// SplitMix64 output finalizer (a bijective 64-bit mixer).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) noexcept
      : state_(mix64(seed ^ mix64(stream + 0x632BE59BD9B4E019ULL))) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }
  result_type operator()() noexcept { return next_u64(); }

  std::uint64_t next_u64() noexcept {
    state_ += kGamma;
    return mix64(state_);
  }

  /// Uniform on [0, 1).
  double uniform01() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform on the open interval (0, 1).
  double uniform_open01() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * uniform01();
  }

  /// Unbiased integer in [0, bound) (Lemire's multiply-and-reject).
  std::uint64_t below(std::uint64_t bound) noexcept {
    unsigned __int128 m =
        static_cast<unsigned __int128>(next_u64()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<unsigned __int128>(next_u64()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Standard normal via Box-Muller; the second variate is cached.
  double normal() noexcept {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    const double u1 = uniform_open01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(theta);
    has_cached_ = true;
    return r * std::cos(theta);
  }

  /// Fair +/-1.
  int spin() noexcept { return (next_u64() >> 63) != 0 ? 1 : -1; }

 private:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace isingdc
