#include "kernels_internal.hpp"

namespace pgm::raster::detail {

void fill_edges_row_scalar(std::uint8_t* row, int x_begin, int x_end, int y, const Edge* edges, int edge_count,
                           std::uint8_t value) {
  const std::int32_t py = centre(y);
  for (int x = x_begin; x < x_end; ++x) {
    const std::int32_t px = centre(x);
    bool inside = true;
    for (int k = 0; k < edge_count && inside; ++k) inside = edges[k].a * px + edges[k].b * py + edges[k].c >= 0;
    if (inside) row[x] = value;
  }
}

void fill_annulus_row_scalar(std::uint8_t* row, int x_begin, int x_end, int y, std::int32_t cx, std::int32_t cy,
                             std::int32_t outer_sq, std::int32_t inner_sq, std::uint8_t value) {
  const std::int32_t dy = centre(y) - cy;
  const std::int32_t dy2 = dy * dy;
  for (int x = x_begin; x < x_end; ++x) {
    const std::int32_t dx = centre(x) - cx;
    const std::int32_t d2 = dx * dx + dy2;
    if (d2 <= outer_sq && d2 > inner_sq) row[x] = value;
  }
}

std::uint64_t sum_bytes_scalar(const std::uint8_t* data, std::size_t n) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < n; ++i) total += data[i];
  return total;
}

std::size_t count_diff_scalar(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  std::size_t diff = 0;
  for (std::size_t i = 0; i < n; ++i) diff += a[i] != b[i] ? 1 : 0;
  return diff;
}

}  // namespace pgm::raster::detail
