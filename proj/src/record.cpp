#include "pgm/record.hpp"

#include <algorithm>

namespace pgm {

std::array<PanelSpec, 9> PuzzleRecord::matrix() const {
  std::array<PanelSpec, 9> out;
  std::copy(context.begin(), context.end(), out.begin());
  out[8] = answer_panel();
  return out;
}

void render_record(PuzzleRecord& record) {
  record.pixels.clear();
  record.pixels.reserve(kRecordPanels);
  for (const auto& p : record.context) record.pixels.push_back(render_panel(p));
  for (const auto& p : record.candidates) record.pixels.push_back(render_panel(p));
}

GrayImage render_puzzle_sheet(const PuzzleRecord& record) {
  if (record.pixels.size() == kRecordPanels)
    return render_puzzle_sheet(std::span<const PanelImage>(record.pixels.data(), kContextPanels),
                               std::span<const PanelImage>(record.pixels.data() + kContextPanels, kCandidatePanels));
  auto copy = record;
  render_record(copy);
  return render_puzzle_sheet(copy);
}

}  // namespace pgm
