#pragma once

// Executable semantics of the five relations over 3x3 grids of attribute
// values. Every cell is a ValueSet: scalar values are singletons and
// multi-valued attributes (positions, the distinct colours present in a
// panel, ...) are general sets.

#include <array>
#include <cstddef>
#include <cstdint>
#include <string_view>

#include "pgm/core.hpp"
#include "pgm/rng.hpp"
#include "pgm/value_set.hpp"

namespace pgm {

enum class Orientation : std::uint8_t { rows, columns };

std::string_view to_string(Orientation o);
std::optional<Orientation> parse_orientation(std::string_view s);

/// Row-major 3x3 grid; cell 8 is the bottom-right panel.
using AttributeGrid = std::array<ValueSet, 9>;
/// Maximum set size per cell.
using CellCapacity = std::array<std::size_t, 9>;

inline constexpr CellCapacity kUnboundedCapacity = {16, 16, 16, 16, 16, 16, 16, 16, 16};

/// Cell indices of the three lines of an orientation. The third line of
/// either orientation ends in cell 8.
const std::array<std::array<std::size_t, 3>, 3>& grid_lines(Orientation o);

struct Realization {
  AttributeGrid grid;
  Orientation orientation;
};

/// Samples a non-degenerate grid satisfying `t`. Progression picks rows or
/// columns uniformly; binary and ternary relations run along rows. Throws
/// InfeasibleRealization when `allowed` (or `capacity`) cannot support the
/// relation.
Realization realize_relation(const Triple& t, const ValueDomain& domain, ValueSet allowed, Rng& rng,
                             const CellCapacity& capacity = kUnboundedCapacity);

/// Relation `r` on one complete line.
bool line_holds(RelationType r, ValueSet a, ValueSet b, ValueSet c);

bool check_relation(const AttributeGrid& grid, const Triple& t, Orientation orient);
bool holds_any_orientation(const AttributeGrid& grid, const Triple& t);

/// Context semantics: the two complete lines satisfy `t`, and some value of
/// the missing cell 8 would complete the third line. Cell 8 is ignored.
bool holds_on_context(const AttributeGrid& grid, const Triple& t, Orientation orient);

/// All nine cells equal.
bool is_constant(const AttributeGrid& grid);
/// Cells 0..7 equal.
bool is_constant_context(const AttributeGrid& grid);

}  // namespace pgm
