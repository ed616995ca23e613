// Compiled with -mavx2; only reached after a runtime CPU check.
#include <immintrin.h>

#include <bit>

#include "kernels_internal.hpp"

namespace pgm::raster::detail {

namespace {

// Narrows two 8x32-bit lane masks (all-ones / zero) into 16 byte masks,
// preserving pixel order.
inline __m128i narrow_masks(__m256i m0, __m256i m1) {
  __m256i packed = _mm256_packs_epi32(m0, m1);
  packed = _mm256_permute4x64_epi64(packed, _MM_SHUFFLE(3, 1, 2, 0));
  return _mm_packs_epi16(_mm256_castsi256_si128(packed), _mm256_extracti128_si256(packed, 1));
}

inline void blend_store(std::uint8_t* dst, __m128i mask, __m128i value) {
  const __m128i cur = _mm_loadu_si128(reinterpret_cast<const __m128i*>(dst));
  _mm_storeu_si128(reinterpret_cast<__m128i*>(dst), _mm_blendv_epi8(cur, value, mask));
}

const __m256i kLaneOffsets = _mm256_setr_epi32(0, 16, 32, 48, 64, 80, 96, 112);

void fill_edges_row_avx2(std::uint8_t* row, int x_begin, int x_end, int y, const Edge* edges, int edge_count,
                         std::uint8_t value) {
  const std::int32_t py = centre(y);
  const __m128i fill = _mm_set1_epi8(static_cast<char>(value));
  const __m256i minus_one = _mm256_set1_epi32(-1);
  const __m256i half_block = _mm256_set1_epi32(8 * kSubpixel);
  int x = x_begin;
  for (; x + 16 <= x_end; x += 16) {
    const __m256i px0 = _mm256_add_epi32(_mm256_set1_epi32(centre(x)), kLaneOffsets);
    const __m256i px1 = _mm256_add_epi32(px0, half_block);
    __m256i m0 = minus_one;
    __m256i m1 = minus_one;
    for (int k = 0; k < edge_count; ++k) {
      const __m256i a = _mm256_set1_epi32(edges[k].a);
      const __m256i row_const = _mm256_set1_epi32(edges[k].b * py + edges[k].c);
      const __m256i v0 = _mm256_add_epi32(_mm256_mullo_epi32(a, px0), row_const);
      const __m256i v1 = _mm256_add_epi32(_mm256_mullo_epi32(a, px1), row_const);
      m0 = _mm256_and_si256(m0, _mm256_cmpgt_epi32(v0, minus_one));
      m1 = _mm256_and_si256(m1, _mm256_cmpgt_epi32(v1, minus_one));
    }
    blend_store(row + x, narrow_masks(m0, m1), fill);
  }
  fill_edges_row_scalar(row, x, x_end, y, edges, edge_count, value);
}

void fill_annulus_row_avx2(std::uint8_t* row, int x_begin, int x_end, int y, std::int32_t cx, std::int32_t cy,
                           std::int32_t outer_sq, std::int32_t inner_sq, std::uint8_t value) {
  const std::int32_t dy = centre(y) - cy;
  const __m256i dy2 = _mm256_set1_epi32(dy * dy);
  const __m256i outer_plus_one = _mm256_set1_epi32(outer_sq + 1);
  const __m256i inner = _mm256_set1_epi32(inner_sq);
  const __m256i half_block = _mm256_set1_epi32(8 * kSubpixel);
  const __m128i fill = _mm_set1_epi8(static_cast<char>(value));
  int x = x_begin;
  for (; x + 16 <= x_end; x += 16) {
    const __m256i dx0 = _mm256_add_epi32(_mm256_set1_epi32(centre(x) - cx), kLaneOffsets);
    const __m256i dx1 = _mm256_add_epi32(dx0, half_block);
    const __m256i d0 = _mm256_add_epi32(_mm256_mullo_epi32(dx0, dx0), dy2);
    const __m256i d1 = _mm256_add_epi32(_mm256_mullo_epi32(dx1, dx1), dy2);
    const __m256i m0 = _mm256_and_si256(_mm256_cmpgt_epi32(outer_plus_one, d0), _mm256_cmpgt_epi32(d0, inner));
    const __m256i m1 = _mm256_and_si256(_mm256_cmpgt_epi32(outer_plus_one, d1), _mm256_cmpgt_epi32(d1, inner));
    blend_store(row + x, narrow_masks(m0, m1), fill);
  }
  fill_annulus_row_scalar(row, x, x_end, y, cx, cy, outer_sq, inner_sq, value);
}

std::uint64_t sum_bytes_avx2(const std::uint8_t* data, std::size_t n) {
  __m256i acc = _mm256_setzero_si256();
  const __m256i zero = _mm256_setzero_si256();
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i v = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(data + i));
    acc = _mm256_add_epi64(acc, _mm256_sad_epu8(v, zero));
  }
  alignas(32) std::uint64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
  return lanes[0] + lanes[1] + lanes[2] + lanes[3] + sum_bytes_scalar(data + i, n - i);
}

std::size_t count_diff_avx2(const std::uint8_t* a, const std::uint8_t* b, std::size_t n) {
  std::size_t diff = 0;
  std::size_t i = 0;
  for (; i + 32 <= n; i += 32) {
    const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
    const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
    const auto equal = static_cast<std::uint32_t>(_mm256_movemask_epi8(_mm256_cmpeq_epi8(va, vb)));
    diff += static_cast<std::size_t>(std::popcount(~equal));
  }
  return diff + count_diff_scalar(a + i, b + i, n - i);
}

}  // namespace

const KernelTable kAvx2Kernels = {Isa::avx2, fill_edges_row_avx2, fill_annulus_row_avx2, sum_bytes_avx2,
                                  count_diff_avx2};

}  // namespace pgm::raster::detail
