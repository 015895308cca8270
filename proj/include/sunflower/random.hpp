#pragma once

#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "sunflower/element_set.hpp"

namespace sunflower {

/// Seeded generator with portable draws. std::uniform_int_distribution and
/// std::shuffle are implementation-defined, so bounded draws are done here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix(seed)), seed_(seed) {}

  /// Independent child stream; the same (seed, stream) pair always yields the
  /// same sequence.
  Rng split(std::uint64_t stream) const { return Rng(mix(seed_ ^ mix(stream + 0x632be59bd9b4e019ULL))); }

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t limit = (~std::uint64_t{0}) - ((~std::uint64_t{0}) % bound);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  std::vector<int> permutation(int n) {
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 0);
    shuffle(p);
    return p;
  }

  /// Uniform random size-r subset of pool.
  ElementSet sample_subset(const ElementSet& pool, int r) {
    std::vector<int> items = pool.indices();
    ElementSet out;
    for (int i = 0; i < r && i < static_cast<int>(items.size()); ++i) {
      std::size_t j = static_cast<std::size_t>(i) + static_cast<std::size_t>(below(items.size() - static_cast<std::size_t>(i)));
      std::swap(items[static_cast<std::size_t>(i)], items[j]);
      out.insert(items[static_cast<std::size_t>(i)]);
    }
    return out;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::mt19937_64 engine_;
  std::uint64_t seed_;
};

}  // namespace sunflower
