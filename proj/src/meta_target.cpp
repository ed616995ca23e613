#include "pgm/meta_target.hpp"

#include <bit>

namespace pgm {

std::optional<MetaTarget> MetaTarget::parse(std::string_view s) {
  if (s.size() != kBits) return std::nullopt;
  std::uint16_t bits = 0;
  for (std::size_t i = 0; i < kBits; ++i) {
    if (s[i] == '1')
      bits |= static_cast<std::uint16_t>(1u << i);
    else if (s[i] != '0')
      return std::nullopt;
  }
  return MetaTarget(bits);
}

std::size_t MetaTarget::count() const { return static_cast<std::size_t>(std::popcount(bits_)); }

std::string MetaTarget::to_string() const {
  std::string s(kBits, '0');
  for (std::size_t i = 0; i < kBits; ++i)
    if (test(i)) s[i] = '1';
  return s;
}

std::size_t meta_element(ObjectType o) { return o == ObjectType::shape ? 0 : 1; }

std::size_t meta_element(AttributeType a) {
  switch (a) {
    case AttributeType::colour: return 2;
    case AttributeType::number: return 3;
    case AttributeType::position: return 4;
    case AttributeType::size: return 5;
    case AttributeType::type: return 6;
  }
  return 0;
}

std::size_t meta_element(RelationType r) { return 7 + static_cast<std::size_t>(r); }

MetaTarget encode_triple(const Triple& t) {
  return MetaTarget(static_cast<std::uint16_t>((1u << meta_element(t.object)) | (1u << meta_element(t.attribute)) |
                                               (1u << meta_element(t.relation))));
}

MetaTarget encode_meta(const Structure& s) {
  MetaTarget out;
  for (const auto& t : s.triples()) out = out | encode_triple(t);
  return out;
}

}  // namespace pgm
