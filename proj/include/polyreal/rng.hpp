#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace polyreal {

/// SplitMix64 finalizer (Steele, Lea, Flood 2014). Used to derive independent
/// stream seeds; the streams themselves are std::mt19937_64, whose output
/// sequence is fixed by the standard.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed of the stream for one search instance.
inline std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t triangulation_index,
                                        std::uint64_t automorphism_index) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ triangulation_index);
  return splitmix64(h ^ (automorphism_index * 0xd1b54a32d192ed03ULL));
}

/// Deterministic generator. The bounded and real helpers avoid the standard
/// distributions, whose algorithms differ between library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound), bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do x = engine_();
    while (x >= limit);
    return x % bound;
  }

  /// Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  /// Uniform double in [0, 1).
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace polyreal
