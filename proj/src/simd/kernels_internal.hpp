#pragma once

#include "pgm/raster_kernels.hpp"

namespace pgm::raster::detail {

void fill_edges_row_scalar(std::uint8_t* row, int x_begin, int x_end, int y, const Edge* edges, int edge_count,
                           std::uint8_t value);
void fill_annulus_row_scalar(std::uint8_t* row, int x_begin, int x_end, int y, std::int32_t cx, std::int32_t cy,
                             std::int32_t outer_sq, std::int32_t inner_sq, std::uint8_t value);
std::uint64_t sum_bytes_scalar(const std::uint8_t* data, std::size_t n);
std::size_t count_diff_scalar(const std::uint8_t* a, const std::uint8_t* b, std::size_t n);

#if defined(PGM_HAVE_AVX2)
extern const KernelTable kAvx2Kernels;
#endif
#if defined(PGM_HAVE_NEON)
extern const KernelTable kNeonKernels;
#endif

inline std::int32_t centre(int pixel) { return pixel * kSubpixel + kSubpixel / 2; }

}  // namespace pgm::raster::detail
