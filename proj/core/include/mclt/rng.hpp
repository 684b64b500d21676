#pragma once

#include <cmath>
#include <cstdint>

namespace mclt {

// splitmix64 finalizer: bijective 64-bit mix with good avalanche.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based stream: output i is mix64(base + i * golden). Streams for
// distinct (master_seed, stream_index) pairs are derived by hashing both,
// so a batch of paths can be generated in any order, on any number of
// workers, with bit-identical results.
class RngStream {
 public:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
      : counter_(mix64(mix64(master_seed + kGolden) ^
                       mix64(stream_index + 0x6a09e667f3bcc909ULL))) {}

  std::uint64_t next_u64() {
    counter_ += kGolden;
    return mix64(counter_);
  }

  // Uniform in [0,1), 53 bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Marsaglia polar transform; pairs are cached.
  double next_gaussian() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u, v, s;
    do {
      u = 2.0 * next_double() - 1.0;
      v = 2.0 * next_double() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    double f = std::sqrt(-2.0 * std::log(s) / s);
    cached_ = v * f;
    have_cached_ = true;
    return u * f;
  }

 private:
  std::uint64_t counter_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace mclt
