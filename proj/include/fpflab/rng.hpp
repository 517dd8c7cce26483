#pragma once

#include <cmath>
#include <cstdint>

namespace fpflab {

/// Deterministic counter-based random stream.
///
/// A stream is identified by (seed, stream id); equal identifiers produce
/// bit-identical sequences no matter which thread consumes them, so
/// per-particle / per-trial noise is obtained by deriving child streams
/// instead of sharing one generator. The state advances along a Weyl
/// sequence and is finalized with the splitmix64 mixer.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed),
        stream_(stream),
        state_(mix(mix(seed + kGolden) ^ mix(stream))) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  /// Child stream keyed by `substream`; independent of draws already made.
  RngStream derive(std::uint64_t substream) const {
    return RngStream(seed_, combine(stream_, substream));
  }

  std::uint64_t next_u64() {
    state_ += kGolden;
    return mix(state_);
  }

  /// Uniform draw in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Standard normal via the Box-Muller transform; the second variate of
  /// each pair is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
    const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;          // [0,1)
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * kPi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
  static constexpr double kPi = 3.14159265358979323846;

  static std::uint64_t mix(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
  }

  static std::uint64_t combine(std::uint64_t a, std::uint64_t b) {
    return a ^ (mix(b + kGolden) + kGolden + (a << 6) + (a >> 2));
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace fpflab
