#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace pgm {

/// Set of value indices (0..15) stored as a bitmask. Scalar attribute values
/// are singleton sets, so set algebra applies uniformly to every attribute.
class ValueSet {
 public:
  constexpr ValueSet() = default;
  constexpr explicit ValueSet(std::uint16_t bits) : bits_(bits) {}
  constexpr ValueSet(std::initializer_list<std::size_t> values) {
    for (auto v : values) bits_ |= static_cast<std::uint16_t>(1u << v);
  }

  static constexpr ValueSet singleton(std::size_t v) { return ValueSet(static_cast<std::uint16_t>(1u << v)); }
  /// {0, 1, ..., n-1}
  static constexpr ValueSet range(std::size_t n) {
    return ValueSet(static_cast<std::uint16_t>((1u << n) - 1u));
  }

  constexpr std::uint16_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr std::size_t size() const { return static_cast<std::size_t>(std::popcount(bits_)); }
  constexpr bool contains(std::size_t v) const { return v < 16 && ((bits_ >> v) & 1u) != 0; }
  constexpr bool is_singleton() const { return std::has_single_bit(bits_); }
  constexpr bool subset_of(ValueSet other) const { return (bits_ & ~other.bits_) == 0; }

  /// Index of the lowest member; the set must be non-empty.
  constexpr std::size_t min() const { return static_cast<std::size_t>(std::countr_zero(bits_)); }
  constexpr std::size_t max() const { return 15u - static_cast<std::size_t>(std::countl_zero(bits_)) ; }

  constexpr void insert(std::size_t v) { bits_ |= static_cast<std::uint16_t>(1u << v); }
  constexpr void erase(std::size_t v) { bits_ &= static_cast<std::uint16_t>(~(1u << v)); }

  std::vector<std::size_t> values() const {
    std::vector<std::size_t> out;
    for (std::uint16_t b = bits_; b != 0; b &= static_cast<std::uint16_t>(b - 1))
      out.push_back(static_cast<std::size_t>(std::countr_zero(b)));
    return out;
  }

  std::string to_string() const {
    std::string s = "{";
    bool first = true;
    for (auto v : values()) {
      if (!first) s += ',';
      s += std::to_string(v);
      first = false;
    }
    return s + "}";
  }

  friend constexpr ValueSet operator|(ValueSet a, ValueSet b) { return ValueSet(a.bits_ | b.bits_); }
  friend constexpr ValueSet operator&(ValueSet a, ValueSet b) { return ValueSet(a.bits_ & b.bits_); }
  friend constexpr ValueSet operator^(ValueSet a, ValueSet b) { return ValueSet(a.bits_ ^ b.bits_); }
  friend constexpr ValueSet operator-(ValueSet a, ValueSet b) {
    return ValueSet(static_cast<std::uint16_t>(a.bits_ & ~b.bits_));
  }
  friend constexpr bool operator==(ValueSet, ValueSet) = default;
  friend constexpr bool operator<(ValueSet a, ValueSet b) { return a.bits_ < b.bits_; }

 private:
  std::uint16_t bits_ = 0;
};

}  // namespace pgm
