#pragma once

// Row kernels used by the renderer. Coordinates are integers in 1/16 pixel
// units; pixel (x, y) is sampled at its centre (16x + 8, 16y + 8). All
// variants are integer-only and produce bit-identical rows.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace pgm::raster {

inline constexpr std::int32_t kSubpixel = 16;

/// Half-plane a*x + b*y + c >= 0.
struct Edge {
  std::int32_t a;
  std::int32_t b;
  std::int32_t c;
};

enum class Isa : std::uint8_t { scalar, avx2, neon };
std::string_view to_string(Isa isa);

struct KernelTable {
  Isa isa;
  /// Sets row[x] = value for x in [x_begin, x_end) whose pixel centre on
  /// row y lies inside every edge.
  void (*fill_edges_row)(std::uint8_t* row, int x_begin, int x_end, int y, const Edge* edges, int edge_count,
                         std::uint8_t value);
  /// Sets row[x] = value where inner_sq < |centre - (cx, cy)|^2 <= outer_sq.
  /// inner_sq = -1 gives a disk.
  void (*fill_annulus_row)(std::uint8_t* row, int x_begin, int x_end, int y, std::int32_t cx, std::int32_t cy,
                           std::int32_t outer_sq, std::int32_t inner_sq, std::uint8_t value);
  std::uint64_t (*sum_bytes)(const std::uint8_t* data, std::size_t n);
  std::size_t (*count_diff)(const std::uint8_t* a, const std::uint8_t* b, std::size_t n);
};

const KernelTable& scalar_kernels();
/// nullptr when the variant is not compiled in or the CPU lacks it.
const KernelTable* kernels_for(Isa isa);
/// Best variant for this CPU. Setting PGM_FORCE_SCALAR=1 selects scalar.
const KernelTable& active_kernels();

}  // namespace pgm::raster
