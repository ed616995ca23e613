#pragma once

// Integer-only rasteriser for panels and puzzle sheets.
//
// Geometry is computed in 1/16 pixel units; a pixel is covered when its
// centre is. Shapes are centred a quarter pixel below their slot coordinate.
// Shape circumradius is 4 + 0.625 * size_idx pixels, every shape
// carries a 1 pixel black outline, lines are 2 pixels wide. Intensity of
// colour index k is (224k + 4) / 9 (integer division) on a white
// background.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pgm/panel.hpp"
#include "pgm/raster_kernels.hpp"

namespace pgm {

inline constexpr int kPanelSize = 80;
inline constexpr std::size_t kPanelPixels = kPanelSize * kPanelSize;
inline constexpr std::uint8_t kBackground = 255;
inline constexpr std::uint8_t kOutline = 0;

struct PanelImage {
  std::array<std::uint8_t, kPanelPixels> pixels{};

  static PanelImage blank();
  std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y * kPanelSize + x)]; }
  friend bool operator==(const PanelImage&, const PanelImage&) = default;
};

std::uint8_t colour_level(std::size_t colour_idx);
/// Circumradius in 1/16 pixel units.
std::int32_t shape_radius(std::size_t size_idx);

/// Uses the active kernel table unless one is given.
PanelImage render_panel(const PanelSpec& panel);
PanelImage render_panel(const PanelSpec& panel, const raster::KernelTable& kernels);

struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  std::uint8_t at(int x, int y) const { return pixels[static_cast<std::size_t>(y * width + x)]; }
};

struct SheetLayout {
  static constexpr int kMargin = 8;
  static constexpr int kGap = 4;
  static constexpr int kLabelHeight = 12;
  static constexpr std::uint8_t kBlankCell = 192;
  static constexpr std::uint8_t kFrame = 128;

  int width() const;
  int height() const;
  /// Top-left corner of context cell 0..8 (8 is the blank cell).
  std::array<int, 2> context_origin(std::size_t cell) const;
  /// Top-left corner of candidate 0..7 (2 rows of 4, labelled 1..8).
  std::array<int, 2> candidate_origin(std::size_t index) const;
};

/// 3x3 context with a blank bottom-right cell above a 2x4 candidate strip.
GrayImage render_puzzle_sheet(std::span<const PanelImage> context, std::span<const PanelImage> candidates);

GrayImage to_gray(const PanelImage& panel);

std::string encode_pgm(const GrayImage& image);
std::string encode_png(const GrayImage& image);
/// Chooses PNG or PGM from the extension (.png / .pgm); throws pgm::Error.
void write_image(const GrayImage& image, const std::string& path);

/// FNV-1a 64 over the pixel bytes.
std::uint64_t pixel_hash(std::span<const std::uint8_t> bytes);
inline std::uint64_t pixel_hash(const PanelImage& p) { return pixel_hash(std::span<const std::uint8_t>(p.pixels)); }

}  // namespace pgm
