#include "pgm/solver.hpp"

#include <algorithm>
#include <stdexcept>

namespace pgm {

bool InducedStructure::contains(const Triple& t, Orientation o) const {
  return std::find(satisfied.begin(), satisfied.end(), InducedRelation{t, o}) != satisfied.end();
}

bool InducedStructure::contains(const Triple& t) const {
  return contains(t, Orientation::rows) || contains(t, Orientation::columns);
}

InducedStructure induce_structure(std::span<const PanelSpec> context) {
  if (context.size() != 8) throw std::invalid_argument("context must hold eight panels");
  InducedStructure out;
  std::array<AttributeGrid, kDimensionCount> grids;
  for (std::size_t i = 0; i < kDimensionCount; ++i) {
    grids[i] = extract_grid(context, nullptr, kDimensions[i]);
    if (is_constant_context(grids[i])) out.constants.push_back({kDimensions[i], grids[i][0]});
  }
  for (const auto& t : enumerate_viable_triples()) {
    const auto di = dimension_index(t.dimension());
    if (is_constant_context(grids[di])) continue;
    for (auto o : {Orientation::rows, Orientation::columns})
      if (holds_on_context(grids[di], t, o)) out.satisfied.push_back({t, o});
  }
  return out;
}

CandidateScore score_candidate(const InducedStructure& induced, std::span<const PanelSpec> context,
                               const PanelSpec& candidate) {
  CandidateScore score;
  std::array<std::optional<AttributeGrid>, kDimensionCount> grids;
  auto grid_for = [&](Dimension d) -> const AttributeGrid& {
    auto& slot = grids[dimension_index(d)];
    if (!slot) slot = extract_grid(context, &candidate, d);
    return *slot;
  };
  for (const auto& c : induced.constants)
    if (panel_value(candidate, c.dimension) == c.value) ++score.satisfied_count;
  for (const auto& r : induced.satisfied)
    if (check_relation(grid_for(r.triple.dimension()), r.triple, r.orientation)) ++score.satisfied_count;
  score.consistent = score.satisfied_count == induced.size();
  return score;
}

CandidateScore score_candidate(std::span<const PanelSpec> context, const PanelSpec& candidate) {
  return score_candidate(induce_structure(context), context, candidate);
}

SolveResult solve(const PuzzleView& puzzle) {
  if (puzzle.candidates.empty()) throw std::invalid_argument("puzzle has no candidates");
  const auto induced = induce_structure(puzzle.context);
  SolveResult result;
  for (std::size_t i = 0; i < puzzle.candidates.size(); ++i)
    if (score_candidate(induced, puzzle.context, puzzle.candidates[i]).consistent) result.consistent.push_back(i);
  if (result.consistent.size() == 1) result.answer = result.consistent.front();
  return result;
}

}  // namespace pgm
