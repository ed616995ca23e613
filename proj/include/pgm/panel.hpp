#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pgm/core.hpp"
#include "pgm/relations.hpp"
#include "pgm/value_set.hpp"

namespace pgm {

struct ShapeSpec {
  std::uint8_t slot = 0;    // 0..8, see slot_coordinate
  std::uint8_t type = 0;    // 0..6
  std::uint8_t size = 0;    // 0..9
  std::uint8_t colour = 0;  // 0..9

  friend auto operator<=>(const ShapeSpec&, const ShapeSpec&) = default;
};

struct LineSpec {
  std::uint8_t type = 0;    // 0..5
  std::uint8_t colour = 0;  // 0..9

  friend auto operator<=>(const LineSpec&, const LineSpec&) = default;
};

/// Symbolic content of one panel. Canonical form keeps shapes sorted by
/// slot and lines by type, so equal content compares equal.
struct PanelSpec {
  std::vector<ShapeSpec> shapes;
  std::vector<LineSpec> lines;

  void canonicalize();
  /// Empty when well-formed, otherwise the first problem found.
  std::optional<std::string> violation() const;

  friend bool operator==(const PanelSpec&, const PanelSpec&) = default;
};

/// Value of a dimension on one panel: the set of distinct values present
/// (positions: occupied slots; number: the singleton shape count).
ValueSet panel_value(const PanelSpec& panel, Dimension d);

/// Grid over the nine panels of a matrix (row-major).
AttributeGrid extract_grid(std::span<const PanelSpec> panels, Dimension d);

/// Grid over 8 context panels, with `last` as cell 8 (empty set if absent).
AttributeGrid extract_grid(std::span<const PanelSpec> context, const PanelSpec* last, Dimension d);

struct ValueUsage;
void accumulate_usage(const PanelSpec& panel, ValueUsage& usage);

}  // namespace pgm
