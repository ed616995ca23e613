#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "pgm/core.hpp"
#include "pgm/meta_target.hpp"
#include "pgm/panel.hpp"
#include "pgm/regimes.hpp"
#include "pgm/relations.hpp"
#include "pgm/render.hpp"
#include "pgm/solver.hpp"

namespace pgm {

inline constexpr std::size_t kContextPanels = 8;
inline constexpr std::size_t kCandidatePanels = 8;
inline constexpr std::size_t kRecordPanels = kContextPanels + kCandidatePanels;

/// One generated puzzle. `orientations[i]` belongs to `structure.triples()[i]`.
/// `pixels` holds the 8 context panels (row-major) followed by the 8
/// candidates; it is empty until the record is rendered.
struct PuzzleRecord {
  std::uint64_t seed = 0;
  RegimeId regime = RegimeId::neutral;
  Split split = Split::train;
  bool distracting = true;
  Structure structure;
  std::vector<Orientation> orientations;
  std::array<PanelSpec, kContextPanels> context;
  std::array<PanelSpec, kCandidatePanels> candidates;
  std::uint8_t answer = 0;
  MetaTarget meta;
  std::vector<PanelImage> pixels;

  PuzzleView view() const { return {context, candidates}; }
  const PanelSpec& answer_panel() const { return candidates[answer]; }
  /// The nine panels of the completed matrix.
  std::array<PanelSpec, 9> matrix() const;

  friend bool operator==(const PuzzleRecord&, const PuzzleRecord&) = default;
};

/// Fills `pixels` from the symbolic panels.
void render_record(PuzzleRecord& record);

GrayImage render_puzzle_sheet(const PuzzleRecord& record);

}  // namespace pgm
