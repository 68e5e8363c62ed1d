#pragma once

#include <cmath>
#include <cstdint>

namespace bqcs {

namespace detail {

// SplitMix64 finalizer (Stafford mix13). Bijective on uint64_t.
inline constexpr uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

}  // namespace detail

/// Identifies one reproducible random stream. Equal (value, stream_id) pairs
/// always produce identical sequences within one build of this library;
/// bit-equality across implementations is not promised.
struct Seed {
  uint64_t value = 0;
  uint64_t stream_id = 0;

  /// Deterministically derive the i-th sub-stream of this seed. Distinct i
  /// give distinct stream ids for a fixed parent.
  constexpr Seed derive(uint64_t i) const {
    return Seed{value, detail::mix64(stream_id + (i + 1) * detail::kGolden)};
  }

  friend constexpr bool operator==(const Seed&, const Seed&) = default;
};

/// SplitMix64 sequence generator. The state walks a Weyl sequence with the
/// golden-ratio increment and each output is the mix64 finalizer of the state,
/// so word i is a pure function of (seed, i). Gaussian variates come from the
/// Box-Muller transform of two uniforms.
class SplitMix64 {
 public:
  explicit SplitMix64(Seed seed)
      : state_(detail::mix64(detail::mix64(seed.value) +
                             detail::kGolden * (seed.stream_id + 1))) {}

  uint64_t next_u64() {
    state_ += detail::kGolden;
    return detail::mix64(state_);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double next_uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Unbiased integer in [0, bound) by rejection.
  uint64_t next_below(uint64_t bound) {
    // Rejection zone keeps the modulo exact.
    const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % bound;
  }

  /// Standard normal; Box-Muller pairs, one value cached.
  double next_gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] so the log is finite.
    const double u1 =
        (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = next_uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace bqcs
