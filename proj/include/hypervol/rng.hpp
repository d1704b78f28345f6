#pragma once

#include <cstdint>
#include <limits>

namespace hypervol {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based generator keyed by (seed, stream, id). Every random decision
// in the library draws from its own key, so results do not depend on
// iteration order or thread count.
class KeyedRng {
 public:
  using result_type = std::uint64_t;

  KeyedRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t id)
      : state_(splitmix64(splitmix64(seed ^ 0x5bd1e995ULL) ^ splitmix64(stream + 0x632be59bd9b4e019ULL) ^
                          splitmix64(id * 0x9e3779b97f4a7c15ULL + 1))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return splitmix64(state_);
  }

  // Uniform double in [0, 1).
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// Stream tags keep different consumers of the same seed independent.
namespace streams {
inline constexpr std::uint64_t kStrength = 1;
inline constexpr std::uint64_t kSpectral = 2;
inline constexpr std::uint64_t kComplex = 3;
inline constexpr std::uint64_t kExpansion = 4;
inline constexpr std::uint64_t kTest = 99;
}  // namespace streams

}  // namespace hypervol
