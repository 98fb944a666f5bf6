#ifndef DGUM_RANDOM_HPP
#define DGUM_RANDOM_HPP

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace dgum {

/// User-facing seed. Same seed and same inputs give bit-identical outputs.
struct Seed {
  std::uint64_t value = 0;
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Hashes a seed together with a path of stream identifiers, e.g.
/// derive_key(seed, {component}) or derive_key(seed, {iteration, site}).
constexpr std::uint64_t derive_key(std::uint64_t seed,
                                   std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = mix64(seed ^ 0x5851f42d4c957f2dULL);
  for (std::uint64_t p : path) h = mix64(h ^ mix64(p + 0x632be59bd9b4e019ULL));
  return h;
}

/// Uniform double in [0, 1) from the top 53 bits.
constexpr double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Counter-based generator: output i of stream `key` is a pure function of
/// (key, i). Satisfies UniformRandomBitGenerator so it can drive the
/// standard distributions.
class CounterEngine {
 public:
  using result_type = std::uint64_t;

  explicit constexpr CounterEngine(std::uint64_t key) : key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() { return mix64(key_ ^ mix64(counter_++)); }

  constexpr double uniform() { return to_unit((*this)()); }

  constexpr std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace dgum

#endif  // DGUM_RANDOM_HPP
