#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

namespace drillsim {

// Domain separators for derived streams. Two streams with different salts
// never collide even when the rest of the key matches.
enum class StreamKind : std::uint64_t {
  Session = 1,
  Cohort = 2,
  Exam = 3,
  AssignTimeout = 4,
  AssignStopSign = 5,
  Generic = 6,
};

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// xoshiro256++ with splitmix64 seeding. All stochastic draws in the project
// flow through this class so that a (seed, key) pair pins an entire run.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) { reseed(seed); }

  // Derives an independent stream from (seed, name, index, kind).
  // Used to key per-(student, lecture) streams off one global seed.
  static Rng keyed(std::uint64_t seed, std::string_view name, std::uint64_t index,
                   StreamKind kind) {
    std::uint64_t s = seed;
    s = splitmix64(s) ^ fnv1a64(name);
    s = splitmix64(s) ^ (index * 0xd1b54a32d192ed03ULL);
    s = splitmix64(s) ^ static_cast<std::uint64_t>(kind);
    return Rng(splitmix64(s));
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

  bool bernoulli(double p) { return uniform01() < p; }

  // Uniform integer in [0, n). Rejection-free multiply-shift would bias by
  // at most 2^-64; rejection keeps it exact.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = -n % n;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // Box-Muller; consumes exactly two uniforms per call, no cached spare.
  double normal() {
    double u1 = 1.0 - uniform01();
    double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  // Lognormal parameterized by its median.
  double lognormal_median(double median, double sigma) {
    return std::exp(std::log(median) + sigma * normal());
  }

 private:
  void reseed(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& w : s_) w = splitmix64(s);
  }

  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t s_[4];
};

}  // namespace drillsim
