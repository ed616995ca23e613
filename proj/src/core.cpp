#include "pgm/core.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace pgm {

namespace {

using enum RelationType;

struct CompatibilityRow {
  Dimension dimension;
  std::vector<RelationType> relations;
};

// Relations admitted per object-qualified attribute.
const std::vector<CompatibilityRow>& compatibility_table() {
  static const std::vector<CompatibilityRow> table = {
      {{ObjectType::shape, AttributeType::size}, {progression, XOR, OR, AND, consistent_union}},
      {{ObjectType::shape, AttributeType::colour}, {progression, XOR, OR, AND, consistent_union}},
      {{ObjectType::shape, AttributeType::number}, {progression, consistent_union}},
      {{ObjectType::shape, AttributeType::position}, {XOR, OR, AND}},
      {{ObjectType::shape, AttributeType::type}, {progression, XOR, OR, AND, consistent_union}},
      {{ObjectType::line, AttributeType::colour}, {progression, XOR, OR, AND, consistent_union}},
      {{ObjectType::line, AttributeType::type}, {XOR, OR, AND, consistent_union}},
  };
  return table;
}

std::string format_level(std::size_t i, std::size_t levels) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.4f", static_cast<double>(i) / static_cast<double>(levels - 1));
  return buf;
}

std::vector<ValueDomain> build_domains() {
  std::vector<ValueDomain> out;
  for (auto d : kDimensions) {
    ValueDomain vd{d, {}};
    switch (d.attribute) {
      case AttributeType::colour:
        for (std::size_t i = 0; i < kColourLevels; ++i) vd.labels.push_back(format_level(i, kColourLevels));
        break;
      case AttributeType::size:
        for (std::size_t i = 0; i < kSizeLevels; ++i) vd.labels.push_back(format_level(i, kSizeLevels));
        break;
      case AttributeType::number:
        for (std::size_t i = 0; i <= kMaxShapes; ++i) vd.labels.push_back(std::to_string(i));
        break;
      case AttributeType::position:
        for (std::size_t i = 0; i < kMaxShapes; ++i) {
          auto c = slot_coordinate(i);
          char buf[32];
          std::snprintf(buf, sizeof buf, "(%.2f, %.2f)", c.x, c.y);
          vd.labels.push_back(buf);
        }
        break;
      case AttributeType::type:
        if (d.object == ObjectType::shape)
          vd.labels = {"circle", "triangle", "square", "pentagon", "hexagon", "octagon", "star"};
        else
          vd.labels = {"diagonal_down", "diagonal_up", "vertical", "horizontal", "diamond", "circle"};
        break;
    }
    out.push_back(std::move(vd));
  }
  return out;
}

}  // namespace

std::string_view to_string(RelationType r) {
  switch (r) {
    case progression: return "progression";
    case XOR: return "XOR";
    case OR: return "OR";
    case AND: return "AND";
    case consistent_union: return "consistent_union";
  }
  return "?";
}

std::string_view to_string(ObjectType o) { return o == ObjectType::shape ? "shape" : "line"; }

std::string_view to_string(AttributeType a) {
  switch (a) {
    case AttributeType::size: return "size";
    case AttributeType::type: return "type";
    case AttributeType::colour: return "colour";
    case AttributeType::position: return "position";
    case AttributeType::number: return "number";
  }
  return "?";
}

std::string_view to_string(Arity a) {
  switch (a) {
    case Arity::unary: return "unary";
    case Arity::binary: return "binary";
    case Arity::ternary: return "ternary";
  }
  return "?";
}

std::optional<RelationType> parse_relation(std::string_view s) {
  for (auto r : kRelations)
    if (to_string(r) == s) return r;
  return std::nullopt;
}

std::optional<ObjectType> parse_object(std::string_view s) {
  for (auto o : kObjects)
    if (to_string(o) == s) return o;
  return std::nullopt;
}

std::optional<AttributeType> parse_attribute(std::string_view s) {
  for (auto a : kAttributes)
    if (to_string(a) == s) return a;
  return std::nullopt;
}

Arity classify_arity(RelationType r) {
  switch (r) {
    case progression: return Arity::unary;
    case XOR:
    case OR:
    case AND: return Arity::binary;
    case consistent_union: return Arity::ternary;
  }
  throw std::invalid_argument("unknown relation");
}

bool is_valid_dimension(Dimension d) {
  return std::find(kDimensions.begin(), kDimensions.end(), d) != kDimensions.end();
}

std::size_t dimension_index(Dimension d) {
  auto it = std::find(kDimensions.begin(), kDimensions.end(), d);
  if (it == kDimensions.end()) throw std::invalid_argument("invalid dimension " + to_string(d));
  return static_cast<std::size_t>(it - kDimensions.begin());
}

std::string to_string(Dimension d) {
  return std::string(to_string(d.object)) + "-" + std::string(to_string(d.attribute));
}

bool is_compatible(RelationType r, ObjectType o, AttributeType a) {
  for (const auto& row : compatibility_table()) {
    if (row.dimension == Dimension{o, a})
      return std::find(row.relations.begin(), row.relations.end(), r) != row.relations.end();
  }
  return false;
}

const std::vector<Triple>& enumerate_viable_triples() {
  static const std::vector<Triple> triples = [] {
    std::vector<Triple> out;
    for (auto d : kDimensions)
      for (auto r : kRelations)
        if (is_compatible(r, d.object, d.attribute)) out.push_back({r, d.object, d.attribute});
    return out;
  }();
  return triples;
}

int triple_index(const Triple& t) {
  const auto& all = enumerate_viable_triples();
  auto it = std::find(all.begin(), all.end(), t);
  return it == all.end() ? -1 : static_cast<int>(it - all.begin());
}

bool triple_less(const Triple& a, const Triple& b) {
  auto ia = static_cast<unsigned>(triple_index(a));
  auto ib = static_cast<unsigned>(triple_index(b));
  return ia < ib;
}

std::string to_string(const Triple& t) {
  return "[" + std::string(to_string(t.relation)) + ", " + std::string(to_string(t.object)) + ", " +
         std::string(to_string(t.attribute)) + "]";
}

bool is_number_position_cross(const Triple& a, const Triple& b) {
  auto np = [](AttributeType x, AttributeType y) {
    return x == AttributeType::number && y == AttributeType::position;
  };
  return np(a.attribute, b.attribute) || np(b.attribute, a.attribute);
}

const std::vector<TriplePair>& enumerate_viable_triple_pairs() {
  static const std::vector<TriplePair> pairs = [] {
    std::vector<TriplePair> out;
    const auto& all = enumerate_viable_triples();
    for (std::size_t i = 0; i < all.size(); ++i)
      for (std::size_t j = i + 1; j < all.size(); ++j)
        if (!is_number_position_cross(all[i], all[j])) out.push_back({all[i], all[j]});
    return out;
  }();
  return pairs;
}

const std::vector<DimensionPair>& enumerate_viable_attribute_pairs() {
  static const std::vector<DimensionPair> pairs = [] {
    std::vector<DimensionPair> out;
    for (std::size_t i = 0; i < kDimensions.size(); ++i) {
      for (std::size_t j = i + 1; j < kDimensions.size(); ++j) {
        DimensionPair candidate{kDimensions[i], kDimensions[j]};
        bool viable = std::any_of(
            enumerate_viable_triple_pairs().begin(), enumerate_viable_triple_pairs().end(),
            [&](const TriplePair& p) {
              auto a = p.first.dimension(), b = p.second.dimension();
              return (a == candidate.first && b == candidate.second) ||
                     (a == candidate.second && b == candidate.first);
            });
        if (viable) out.push_back(candidate);
      }
    }
    return out;
  }();
  return pairs;
}

std::optional<std::string> Structure::violation(std::span<const Triple> triples) {
  if (triples.empty()) return "structure must contain at least one triple";
  if (triples.size() > kMaxTriples) return "structure may contain at most four triples";
  for (std::size_t i = 0; i < triples.size(); ++i) {
    if (!is_compatible(triples[i])) return "incompatible triple " + to_string(triples[i]);
    for (std::size_t j = i + 1; j < triples.size(); ++j) {
      if (triples[i] == triples[j]) return "duplicate triple " + to_string(triples[i]);
      if (is_number_position_cross(triples[i], triples[j]))
        return "number and position may not co-occur";
    }
  }
  return std::nullopt;
}

Structure::Structure(std::vector<Triple> triples) : triples_(std::move(triples)) {
  if (auto why = violation(triples_)) throw InvalidStructure(*why);
  std::sort(triples_.begin(), triples_.end(), triple_less);
}

bool Structure::contains(const Triple& t) const {
  return std::find(triples_.begin(), triples_.end(), t) != triples_.end();
}

bool Structure::has_dimension(Dimension d) const { return find(d) != nullptr; }

bool Structure::has_object(ObjectType o) const {
  return std::any_of(triples_.begin(), triples_.end(), [o](const Triple& t) { return t.object == o; });
}

const Triple* Structure::find(Dimension d) const {
  for (const auto& t : triples_)
    if (t.dimension() == d) return &t;
  return nullptr;
}

std::string to_string(const Structure& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ", ";
    out += to_string(s.triples()[i]);
  }
  return out + "]";
}

const ValueDomain& value_domain(Dimension d) {
  static const std::vector<ValueDomain> domains = build_domains();
  return domains[dimension_index(d)];
}

double colour_intensity(std::size_t index) {
  if (index >= kColourLevels) throw std::out_of_range("colour index");
  return static_cast<double>(index) / static_cast<double>(kColourLevels - 1);
}

double size_scale(std::size_t index) {
  if (index >= kSizeLevels) throw std::out_of_range("size index");
  return static_cast<double>(index) / static_cast<double>(kSizeLevels - 1);
}

SlotCoordinate slot_coordinate(std::size_t slot) {
  static constexpr std::array<SlotCoordinate, kMaxShapes> slots = {{
      {0.25, 0.75},
      {0.75, 0.75},
      {0.75, 0.25},
      {0.25, 0.25},
      {0.5, 0.5},
      {0.5, 0.25},
      {0.5, 0.75},
      {0.25, 0.5},
      {0.75, 0.5},
  }};
  if (slot >= slots.size()) throw std::out_of_range("slot index");
  return slots[slot];
}

}  // namespace pgm
