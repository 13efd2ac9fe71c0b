#pragma once
// Deterministic, platform-independent random streams.
//
// Independent streams (ensemble members, noise modes) derive their seeds from
// a master seed through SplitMix64 so that the stream layout is a pure
// function of (master_seed, index) regardless of how many streams run in
// parallel. Normal deviates use Box-Muller on the raw 64-bit stream instead
// of std::normal_distribution, whose output sequence is
// implementation-defined.

#include <cmath>
#include <cstdint>

namespace tgf {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seed for sub-stream `index` of `master`.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t s = master;
  std::uint64_t a = splitmix64(s);
  s = master ^ (0x6a09e667f3bcc909ULL + index * 0x9e3779b97f4a7c15ULL);
  std::uint64_t b = splitmix64(s);
  return a ^ (b + index);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x853c49e6748fea9bULL) {}

  std::uint64_t next_u64() { return splitmix64(state_); }

  // Uniform in (0,1)
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
  }

  double next_normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.28318530717958647692 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace tgf
