#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "pgm/value_set.hpp"

namespace pgm {

std::uint64_t splitmix64(std::uint64_t x);

/// Seeded random stream. Only the raw mt19937_64 output is used: bounded
/// draws and shuffles are implemented here because the standard
/// distributions are not reproducible across standard library vendors.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform integer in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n);
  /// Uniform integer in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi);
  bool coin() { return (next() >> 63) != 0; }
  /// True with probability num/den.
  bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }
  template <typename T>
  void shuffle(std::vector<T>& items) {
    shuffle(std::span<T>(items));
  }

  template <typename T>
  const T& pick(const std::vector<T>& items) {
    return items[static_cast<std::size_t>(below(items.size()))];
  }

  /// Uniform member of a non-empty set.
  std::size_t pick(ValueSet set);
  /// Uniform k-subset of `from`; k must not exceed from.size().
  ValueSet subset(ValueSet from, std::size_t k);

 private:
  std::mt19937_64 engine_;
};

}  // namespace pgm
