#pragma once

#include <cmath>
#include <cstdint>

namespace tgp {

namespace detail {
inline uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}
}  // namespace detail

// Counter-based generator (splitmix64 output function over a Weyl counter).
// State is two words, so chain state snapshots and replays are exact, and
// per-chain streams are derived without coordination.
class CounterRng {
public:
  explicit CounterRng(uint64_t seed, uint64_t stream = 0)
      : key_(detail::mix64(seed + 0x9E3779B97F4A7C15ULL) ^
             detail::mix64(stream * 0xD1B54A32D192ED03ULL + 0x8BB84B93962EACC9ULL)) {}

  uint64_t next_u64() {
    counter_ += 0x9E3779B97F4A7C15ULL;
    return detail::mix64(key_ ^ counter_);
  }

  // Uniform on (0,1), endpoints excluded.
  double next_unit() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  // Box-Muller; two uniforms per draw.
  double next_normal() {
    const double u1 = next_unit();
    const double u2 = next_unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
  }

  double next_normal(double mean, double sd) { return mean + sd * next_normal(); }

  // Normal(mean, sd) left-truncated at 0, by rejection. Acceptance probability
  // is Phi(mean/sd), so this is only used with mean > 0 (amplitude proposals).
  double next_truncated_normal_pos(double mean, double sd) {
    for (;;) {
      const double x = next_normal(mean, sd);
      if (x > 0.0) return x;
    }
  }

private:
  uint64_t key_;
  uint64_t counter_ = 0;
};

inline double norm_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865475244); }

inline double norm_pdf(double x) {
  return 0.3989422804014326779 * std::exp(-0.5 * x * x);
}

}  // namespace tgp
