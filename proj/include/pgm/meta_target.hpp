#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "pgm/core.hpp"

namespace pgm {

/// 12-bit label of the objects, attributes and relations in a structure.
/// Element order: shape, line, color, number, position, size, type,
/// progression, XOR, OR, AND, consistent_union. Element i is stored in bit i.
class MetaTarget {
 public:
  static constexpr std::size_t kBits = 12;

  constexpr MetaTarget() = default;
  constexpr explicit MetaTarget(std::uint16_t bits) : bits_(bits & 0x0FFFu) {}

  /// Parses a string such as "101000010000" (element 0 first).
  static std::optional<MetaTarget> parse(std::string_view s);

  constexpr std::uint16_t bits() const { return bits_; }
  constexpr bool test(std::size_t element) const { return ((bits_ >> element) & 1u) != 0; }
  std::size_t count() const;
  std::string to_string() const;

  friend constexpr MetaTarget operator|(MetaTarget a, MetaTarget b) { return MetaTarget(a.bits_ | b.bits_); }
  friend constexpr bool operator==(MetaTarget, MetaTarget) = default;

 private:
  std::uint16_t bits_ = 0;
};

std::size_t meta_element(ObjectType o);
std::size_t meta_element(AttributeType a);
std::size_t meta_element(RelationType r);

/// Three-hot encoding of one triple.
MetaTarget encode_triple(const Triple& t);
/// OR over the triples of a structure.
MetaTarget encode_meta(const Structure& s);

}  // namespace pgm
