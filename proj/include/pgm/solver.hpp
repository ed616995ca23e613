#pragma once

// Symbolic oracle: induces the relations a context exhibits and scores
// candidate panels against them.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pgm/core.hpp"
#include "pgm/panel.hpp"
#include "pgm/relations.hpp"

namespace pgm {

struct InducedRelation {
  Triple triple;
  Orientation orientation;
  friend bool operator==(const InducedRelation&, const InducedRelation&) = default;
};

/// A dimension whose value is identical on all eight context panels. Such
/// dimensions trivially satisfy OR, AND and consistent union, so those
/// triples are not reported; the constant value is kept as a constraint.
struct ConstantDimension {
  Dimension dimension;
  ValueSet value;
  friend bool operator==(const ConstantDimension&, const ConstantDimension&) = default;
};

struct InducedStructure {
  std::vector<InducedRelation> satisfied;
  std::vector<ConstantDimension> constants;

  /// Number of constraints a consistent candidate must preserve.
  std::size_t size() const { return satisfied.size() + constants.size(); }
  bool contains(const Triple& t, Orientation o) const;
  bool contains(const Triple& t) const;
};

InducedStructure induce_structure(std::span<const PanelSpec> context);

struct CandidateScore {
  bool consistent = false;
  std::size_t satisfied_count = 0;
};

CandidateScore score_candidate(const InducedStructure& induced, std::span<const PanelSpec> context,
                               const PanelSpec& candidate);
CandidateScore score_candidate(std::span<const PanelSpec> context, const PanelSpec& candidate);

struct PuzzleView {
  std::span<const PanelSpec> context;     // 8 panels, row-major, bottom-right missing
  std::span<const PanelSpec> candidates;  // 8 panels
};

struct SolveResult {
  std::optional<std::size_t> answer;   // set iff exactly one candidate is consistent
  std::vector<std::size_t> consistent;

  bool ambiguous() const { return !answer.has_value(); }
};

SolveResult solve(const PuzzleView& puzzle);

}  // namespace pgm
