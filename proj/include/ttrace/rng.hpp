#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace ttrace {

/// SplitMix64 finalizer. Used to derive independent stream seeds from one
/// master seed.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Fold a path of stream identifiers into a seed. derive_seed(s, {r, tag})
/// gives the seed for sub-stream `tag` of realization `r` under master seed s.
constexpr std::uint64_t derive_seed(std::uint64_t master,
                                    std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t s = mix64(master);
  for (std::uint64_t id : path) s = mix64(s ^ mix64(id + 0x632be59bd9b4e019ULL));
  return s;
}

/// Well-known sub-stream tags inside one realization.
enum class Stream : std::uint64_t { bias = 1, code = 2, coalition = 3, forge = 4 };

/// Seeded random source. The engine is std::mt19937_64; the conversions to
/// uniforms and integers are written out here so that draws are identical
/// across standard library implementations.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Child stream; the parent is left untouched.
  RandomStream substream(std::uint64_t tag) const {
    return RandomStream(derive_seed(seed_of_engine(), {tag}));
  }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0,1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on the open interval (0,1).
  double uniform_open() {
    return (static_cast<double>(engine_() >> 12) + 0.5) * 0x1.0p-52;
  }

  /// True with probability p; p <= 0 never fires and p >= 1 always fires.
  bool bernoulli(double p) { return uniform() < p; }

  /// Uniform integer in [0, bound). bound must be nonzero.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

 private:
  std::uint64_t seed_of_engine() const {
    auto copy = engine_;
    return copy();
  }

  std::mt19937_64 engine_;
};

}  // namespace ttrace
