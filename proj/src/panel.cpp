#include "pgm/panel.hpp"

#include <algorithm>
#include <stdexcept>

#include "pgm/regimes.hpp"

namespace pgm {

void PanelSpec::canonicalize() {
  std::sort(shapes.begin(), shapes.end());
  std::sort(lines.begin(), lines.end());
}

std::optional<std::string> PanelSpec::violation() const {
  if (shapes.size() > kMaxShapes) return "more than nine shapes";
  ValueSet slots, types;
  for (const auto& s : shapes) {
    if (s.slot >= kMaxShapes) return "shape slot out of range";
    if (s.type >= kShapeTypes) return "shape type out of range";
    if (s.size >= kSizeLevels) return "shape size out of range";
    if (s.colour >= kColourLevels) return "shape colour out of range";
    if (slots.contains(s.slot)) return "two shapes share a slot";
    slots.insert(s.slot);
  }
  for (const auto& l : lines) {
    if (l.type >= kLineTypes) return "line type out of range";
    if (l.colour >= kColourLevels) return "line colour out of range";
    if (types.contains(l.type)) return "duplicate line type";
    types.insert(l.type);
  }
  return std::nullopt;
}

ValueSet panel_value(const PanelSpec& p, Dimension d) {
  ValueSet out;
  if (d.object == ObjectType::shape) {
    if (d.attribute == AttributeType::number) return ValueSet::singleton(p.shapes.size());
    for (const auto& s : p.shapes) {
      switch (d.attribute) {
        case AttributeType::size: out.insert(s.size); break;
        case AttributeType::type: out.insert(s.type); break;
        case AttributeType::colour: out.insert(s.colour); break;
        case AttributeType::position: out.insert(s.slot); break;
        case AttributeType::number: break;
      }
    }
    return out;
  }
  for (const auto& l : p.lines) {
    switch (d.attribute) {
      case AttributeType::type: out.insert(l.type); break;
      case AttributeType::colour: out.insert(l.colour); break;
      default: throw std::invalid_argument("lines have no " + std::string(to_string(d.attribute)));
    }
  }
  return out;
}

AttributeGrid extract_grid(std::span<const PanelSpec> panels, Dimension d) {
  if (panels.size() != 9) throw std::invalid_argument("extract_grid expects nine panels");
  AttributeGrid g{};
  for (std::size_t i = 0; i < 9; ++i) g[i] = panel_value(panels[i], d);
  return g;
}

AttributeGrid extract_grid(std::span<const PanelSpec> context, const PanelSpec* last, Dimension d) {
  if (context.size() != 8) throw std::invalid_argument("context must hold eight panels");
  AttributeGrid g{};
  for (std::size_t i = 0; i < 8; ++i) g[i] = panel_value(context[i], d);
  if (last != nullptr) g[8] = panel_value(*last, d);
  return g;
}

void accumulate_usage(const PanelSpec& p, ValueUsage& u) {
  for (const auto& s : p.shapes) {
    u.colours.insert(s.colour);
    u.sizes.insert(s.size);
  }
  for (const auto& l : p.lines) u.colours.insert(l.colour);
}

}  // namespace pgm
