#include "pgm/rng.hpp"

#include <array>
#include <bit>
#include <stdexcept>

namespace pgm {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below(0)");
  // Reject the low sliver that would bias the modulo.
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = next();
    if (r >= threshold) return r % n;
  }
}

std::int64_t Rng::between(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw std::invalid_argument("Rng::between: empty range");
  return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

namespace {

// Members of a set in ascending order, without allocating.
std::size_t members(ValueSet set, std::array<std::uint8_t, 16>& out) {
  std::size_t n = 0;
  for (std::uint16_t b = set.bits(); b != 0; b &= static_cast<std::uint16_t>(b - 1))
    out[n++] = static_cast<std::uint8_t>(std::countr_zero(b));
  return n;
}

}  // namespace

std::size_t Rng::pick(ValueSet set) {
  std::array<std::uint8_t, 16> values;
  const auto n = members(set, values);
  if (n == 0) throw std::invalid_argument("Rng::pick: empty set");
  return values[static_cast<std::size_t>(below(n))];
}

ValueSet Rng::subset(ValueSet from, std::size_t k) {
  std::array<std::uint8_t, 16> values;
  const auto n = members(from, values);
  if (k > n) throw std::invalid_argument("Rng::subset: k exceeds set size");
  ValueSet out;
  // Partial Fisher-Yates.
  for (std::size_t i = 0; i < k; ++i) {
    auto j = i + static_cast<std::size_t>(below(n - i));
    std::swap(values[i], values[j]);
    out.insert(values[i]);
  }
  return out;
}

}  // namespace pgm
