// aarch64 only; NEON is part of the base ISA there.
#include <arm_neon.h>

#include "kernels_internal.hpp"

namespace pgm::raster::detail {

namespace {

void fill_edges_row_neon(std::uint8_t* row, int x_begin, int x_end, int y, const Edge* edges, int edge_count,
                         std::uint8_t value) {
  const std::int32_t py = centre(y);
  const std::int32_t offsets_lo[4] = {0, 16, 32, 48};
  const std::int32_t offsets_hi[4] = {64, 80, 96, 112};
  const int32x4_t lane_lo = vld1q_s32(offsets_lo);
  const int32x4_t lane_hi = vld1q_s32(offsets_hi);
  const int32x4_t zero = vdupq_n_s32(0);
  const uint8x8_t fill = vdup_n_u8(value);
  int x = x_begin;
  for (; x + 8 <= x_end; x += 8) {
    const int32x4_t base = vdupq_n_s32(centre(x));
    const int32x4_t px0 = vaddq_s32(base, lane_lo);
    const int32x4_t px1 = vaddq_s32(base, lane_hi);
    uint32x4_t m0 = vdupq_n_u32(0xFFFFFFFFu);
    uint32x4_t m1 = m0;
    for (int k = 0; k < edge_count; ++k) {
      const int32x4_t row_const = vdupq_n_s32(edges[k].b * py + edges[k].c);
      m0 = vandq_u32(m0, vcgeq_s32(vmlaq_n_s32(row_const, px0, edges[k].a), zero));
      m1 = vandq_u32(m1, vcgeq_s32(vmlaq_n_s32(row_const, px1, edges[k].a), zero));
    }
    const uint8x8_t mask = vmovn_u16(vcombine_u16(vmovn_u32(m0), vmovn_u32(m1)));
    vst1_u8(row + x, vbsl_u8(mask, fill, vld1_u8(row + x)));
  }
  fill_edges_row_scalar(row, x, x_end, y, edges, edge_count, value);
}

void fill_annulus_row_neon(std::uint8_t* row, int x_begin, int x_end, int y, std::int32_t cx, std::int32_t cy,
                           std::int32_t outer_sq, std::int32_t inner_sq, std::uint8_t value) {
  const std::int32_t dy = centre(y) - cy;
  const int32x4_t dy2 = vdupq_n_s32(dy * dy);
  const int32x4_t outer = vdupq_n_s32(outer_sq);
  const int32x4_t inner = vdupq_n_s32(inner_sq);
  const std::int32_t offsets_lo[4] = {0, 16, 32, 48};
  const std::int32_t offsets_hi[4] = {64, 80, 96, 112};
  const int32x4_t lane_lo = vld1q_s32(offsets_lo);
  const int32x4_t lane_hi = vld1q_s32(offsets_hi);
  const uint8x8_t fill = vdup_n_u8(value);
  int x = x_begin;
  for (; x + 8 <= x_end; x += 8) {
    const int32x4_t base = vdupq_n_s32(centre(x) - cx);
    const int32x4_t dx0 = vaddq_s32(base, lane_lo);
    const int32x4_t dx1 = vaddq_s32(base, lane_hi);
    const int32x4_t d0 = vmlaq_s32(dy2, dx0, dx0);
    const int32x4_t d1 = vmlaq_s32(dy2, dx1, dx1);
    const uint32x4_t m0 = vandq_u32(vcleq_s32(d0, outer), vcgtq_s32(d0, inner));
    const uint32x4_t m1 = vandq_u32(vcleq_s32(d1, outer), vcgtq_s32(d1, inner));
    const uint8x8_t mask = vmovn_u16(vcombine_u16(vmovn_u32(m0), vmovn_u32(m1)));
    vst1_u8(row + x, vbsl_u8(mask, fill, vld1_u8(row + x)));
  }
  fill_annulus_row_scalar(row, x, x_end, y, cx, cy, outer_sq, inner_sq, value);
}

std::uint64_t sum_bytes_neon(const std::uint8_t* data, std::size_t n) {
  uint64x2_t acc = vdupq_n_u64(0);
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) acc = vpadalq_u32(acc, vpaddlq_u16(vpaddlq_u8(vld1q_u8(data + i))));
  return vgetq_lane_u64(acc, 0) + vgetq_lane_u64(acc, 1) + sum_bytes_scalar(data + i, n - i);
}

std::size_t count_diff_neon(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  std::size_t diff = 0;
  std::size_t i = 0;
  for (; i + 16 <= n; i += 16) {
    // Lanes are 0xFF where bytes differ; shift to 0/1 and sum.
    const uint8x16_t ne = vmvnq_u8(vceqq_u8(vld1q_u8(a + i), vld1q_u8(b + i)));
    diff += vaddvq_u8(vshrq_n_u8(ne, 7));
  }
  return diff + count_diff_scalar(a + i, b + i, n - i);
}

}  // namespace

const KernelTable kNeonKernels = {Isa::neon, fill_edges_row_neon, fill_annulus_row_neon, sum_bytes_neon,
                                  count_diff_neon};

}  // namespace pgm::raster::detail
