#pragma once

// Catalogs for relations, objects, attributes and their value domains.
//
// Canonical orders (stable; relied on by enumeration output, meta-target
// bits and on-disk formats):
//   relations:  progression, XOR, OR, AND, consistent_union
//   objects:    shape, line
//   dimensions: shape-size, shape-colour, shape-number, shape-position,
//               shape-type, line-colour, line-type
//   triples:    by dimension, then by relation

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pgm/errors.hpp"

namespace pgm {

enum class RelationType : std::uint8_t { progression, XOR, OR, AND, consistent_union };
enum class ObjectType : std::uint8_t { shape, line };
enum class AttributeType : std::uint8_t { size, type, colour, position, number };
enum class Arity : std::uint8_t { unary, binary, ternary };

inline constexpr std::array<RelationType, 5> kRelations = {
    RelationType::progression, RelationType::XOR, RelationType::OR, RelationType::AND,
    RelationType::consistent_union};
inline constexpr std::array<ObjectType, 2> kObjects = {ObjectType::shape, ObjectType::line};
inline constexpr std::array<AttributeType, 5> kAttributes = {
    AttributeType::size, AttributeType::type, AttributeType::colour, AttributeType::position,
    AttributeType::number};

std::string_view to_string(RelationType r);
std::string_view to_string(ObjectType o);
std::string_view to_string(AttributeType a);
std::string_view to_string(Arity a);
std::optional<RelationType> parse_relation(std::string_view s);
std::optional<ObjectType> parse_object(std::string_view s);
std::optional<AttributeType> parse_attribute(std::string_view s);

Arity classify_arity(RelationType r);

/// An object-qualified attribute, e.g. shape-colour. Seven exist.
struct Dimension {
  ObjectType object;
  AttributeType attribute;

  friend constexpr bool operator==(Dimension, Dimension) = default;
};

inline constexpr std::size_t kDimensionCount = 7;
inline constexpr std::array<Dimension, kDimensionCount> kDimensions = {{
    {ObjectType::shape, AttributeType::size},
    {ObjectType::shape, AttributeType::colour},
    {ObjectType::shape, AttributeType::number},
    {ObjectType::shape, AttributeType::position},
    {ObjectType::shape, AttributeType::type},
    {ObjectType::line, AttributeType::colour},
    {ObjectType::line, AttributeType::type},
}};

/// Position of `d` in kDimensions; throws std::invalid_argument for lines
/// with size/number/position.
std::size_t dimension_index(Dimension d);
bool is_valid_dimension(Dimension d);
std::string to_string(Dimension d);

struct Triple {
  RelationType relation;
  ObjectType object;
  AttributeType attribute;

  Dimension dimension() const { return {object, attribute}; }
  friend constexpr bool operator==(const Triple&, const Triple&) = default;
};

/// Canonical index of a viable triple in enumerate_viable_triples(); -1 if
/// the triple is not viable.
int triple_index(const Triple& t);
/// Orders triples by canonical index (non-viable triples sort last).
bool triple_less(const Triple& a, const Triple& b);
std::string to_string(const Triple& t);

bool is_compatible(RelationType r, ObjectType o, AttributeType a);
inline bool is_compatible(const Triple& t) { return is_compatible(t.relation, t.object, t.attribute); }

/// All 29 compatible triples in canonical order.
const std::vector<Triple>& enumerate_viable_triples();

struct TriplePair {
  Triple first;
  Triple second;
  friend bool operator==(const TriplePair&, const TriplePair&) = default;
};

struct DimensionPair {
  Dimension first;
  Dimension second;
  friend bool operator==(const DimensionPair&, const DimensionPair&) = default;
};

/// Number and position are tied; triples over both may not share a matrix.
bool is_number_position_cross(const Triple& a, const Triple& b);

/// Unordered pairs of distinct viable triples, excluding number/position
/// crosses. Each pair has first < second in canonical order. 400 entries.
const std::vector<TriplePair>& enumerate_viable_triple_pairs();

/// Unordered pairs of dimensions covered by at least one viable triple
/// pair. 20 entries, first < second in dimension order.
const std::vector<DimensionPair>& enumerate_viable_attribute_pairs();

/// A set of 1-4 distinct viable triples without a number/position cross,
/// held in canonical order.
class Structure {
 public:
  static constexpr std::size_t kMaxTriples = 4;

  /// Throws InvalidStructure when any invariant is violated.
  explicit Structure(std::vector<Triple> triples);

  /// Empty optional when `triples` would form a valid Structure, otherwise
  /// the reason it would be rejected.
  static std::optional<std::string> violation(std::span<const Triple> triples);

  const std::vector<Triple>& triples() const { return triples_; }
  std::size_t size() const { return triples_.size(); }
  bool contains(const Triple& t) const;
  bool has_dimension(Dimension d) const;
  bool has_object(ObjectType o) const;
  const Triple* find(Dimension d) const;

  friend bool operator==(const Structure&, const Structure&) = default;

 private:
  std::vector<Triple> triples_;
};

std::string to_string(const Structure& s);

/// Discrete values of one dimension. Every value is addressed by its index;
/// `labels` gives a human readable rendering of each value.
struct ValueDomain {
  Dimension dimension;
  std::vector<std::string> labels;

  std::size_t cardinality() const { return labels.size(); }
};

const ValueDomain& value_domain(Dimension d);

inline constexpr std::size_t kColourLevels = 10;
inline constexpr std::size_t kSizeLevels = 10;
inline constexpr std::size_t kMaxShapes = 9;
inline constexpr std::size_t kShapeTypes = 7;
inline constexpr std::size_t kLineTypes = 6;

/// Greyscale intensity in [0,1] for a colour index.
double colour_intensity(std::size_t index);
/// Scale factor in [0,1] for a size index.
double size_scale(std::size_t index);

struct SlotCoordinate {
  double x;
  double y;
};
/// (x, y) of a grid slot in a (0,1) plot, y pointing up.
SlotCoordinate slot_coordinate(std::size_t slot);

}  // namespace pgm
