#pragma once

#include <cstdint>
#include <random>

namespace ccasters {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// One mt19937_64 stream per agent. Stream i is seeded with
// splitmix64(seed + 0x9e3779b97f4a7c15 * (i + 1)), which keeps streams apart
// and gives the same draws on every platform.
class AgentRng {
 public:
  AgentRng(std::uint64_t seed, std::uint64_t agent)
      : engine_(splitmix64(seed + 0x9e3779b97f4a7c15ULL * (agent + 1))) {}

  // Uniform in [0, 1) from the top 53 bits; std::uniform_real_distribution
  // is not portable across standard libraries.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ccasters
