#include <gtest/gtest.h>

#include <array>
#include <random>
#include <vector>

#include "pgm/raster_kernels.hpp"

using namespace pgm::raster;

namespace {

constexpr int kRow = 80;
constexpr int kGuard = 16;

std::int64_t centre(int i) { return 16 * static_cast<std::int64_t>(i) + 8; }

// Every variant compiled in and supported here, scalar included.
std::vector<const KernelTable*> variants() {
  std::vector<const KernelTable*> out;
  for (auto isa : {Isa::scalar, Isa::avx2, Isa::neon})
    if (auto k = kernels_for(isa)) out.push_back(k);
  return out;
}

struct Buffer {
  std::array<std::uint8_t, kRow + 2 * kGuard> bytes;
  explicit Buffer(std::uint8_t fill) { bytes.fill(fill); }
  std::uint8_t* row() { return bytes.data() + kGuard; }
};

}  // namespace

TEST(RasterKernels, ScalarIsAlwaysAvailable) {
  ASSERT_NE(kernels_for(Isa::scalar), nullptr);
  EXPECT_EQ(kernels_for(Isa::scalar), &scalar_kernels());
  EXPECT_EQ(to_string(scalar_kernels().isa), "scalar");
  const auto& active = active_kernels();
  EXPECT_EQ(kernels_for(active.isa), &active);
}

TEST(RasterKernels, EdgeRowsMatchReference) {
  std::mt19937 gen(12345);
  std::uniform_int_distribution<int> coef(-400, 400), offset(-600000, 600000), coord(0, kRow), ydist(0, 79),
      count(0, 5), val(0, 254);
  for (const auto* k : variants()) {
    for (int trial = 0; trial < 20000; ++trial) {
      Edge edges[5];
      const int n = count(gen);
      for (int i = 0; i < n; ++i) edges[i] = {coef(gen), coef(gen), offset(gen)};
      int x0 = coord(gen), x1 = coord(gen);
      if (x0 > x1) std::swap(x0, x1);
      const int y = ydist(gen);
      const auto v = static_cast<std::uint8_t>(val(gen));

      Buffer buf(255);
      k->fill_edges_row(buf.row(), x0, x1, y, edges, n, v);
      for (int x = -kGuard; x < kRow + kGuard; ++x) {
        bool inside = x >= x0 && x < x1;
        for (int i = 0; i < n && inside; ++i)
          inside = edges[i].a * centre(x) + edges[i].b * centre(y) + edges[i].c >= 0;
        ASSERT_EQ(buf.row()[x], inside ? v : 255) << to_string(k->isa) << " x=" << x << " trial=" << trial;
      }
    }
  }
}

TEST(RasterKernels, AnnulusRowsMatchReference) {
  std::mt19937 gen(777);
  std::uniform_int_distribution<int> c(0, 1280), rad(0, 700), coord(0, kRow), ydist(0, 79), val(0, 254);
  for (const auto* k : variants()) {
    for (int trial = 0; trial < 20000; ++trial) {
      const int cx = c(gen), cy = c(gen);
      const int outer = rad(gen);
      const int inner = trial % 3 == 0 ? -1 : rad(gen) % (outer + 1);
      const std::int32_t inner_sq = inner < 0 ? -1 : inner * inner;
      int x0 = coord(gen), x1 = coord(gen);
      if (x0 > x1) std::swap(x0, x1);
      const int y = ydist(gen);
      const auto v = static_cast<std::uint8_t>(val(gen));

      Buffer buf(255);
      k->fill_annulus_row(buf.row(), x0, x1, y, cx, cy, outer * outer, inner_sq, v);
      for (int x = -kGuard; x < kRow + kGuard; ++x) {
        const auto dx = centre(x) - cx, dy = centre(y) - cy;
        const auto d2 = dx * dx + dy * dy;
        const bool inside = x >= x0 && x < x1 && d2 <= static_cast<std::int64_t>(outer) * outer && d2 > inner_sq;
        ASSERT_EQ(buf.row()[x], inside ? v : 255) << to_string(k->isa) << " x=" << x << " trial=" << trial;
      }
    }
  }
}

TEST(RasterKernels, ReductionsMatchReference) {
  std::mt19937 gen(99);
  std::uniform_int_distribution<int> byte(0, 255), len(0, 7000);
  for (const auto* k : variants()) {
    for (int trial = 0; trial < 300; ++trial) {
      const auto n = static_cast<std::size_t>(len(gen));
      std::vector<std::uint8_t> a(n + 3), b(n + 3);
      for (auto& x : a) x = static_cast<std::uint8_t>(byte(gen));
      b = a;
      for (std::size_t i = 0; i < b.size(); ++i)
        if (byte(gen) < 40) b[i] = static_cast<std::uint8_t>(b[i] + 1);
      // Offset by one so the vector paths see unaligned data.
      std::uint64_t sum = 0;
      std::size_t diff = 0;
      for (std::size_t i = 1; i <= n; ++i) {
        sum += a[i];
        diff += a[i] != b[i];
      }
      EXPECT_EQ(k->sum_bytes(a.data() + 1, n), sum) << to_string(k->isa);
      EXPECT_EQ(k->count_diff(a.data() + 1, b.data() + 1, n), diff) << to_string(k->isa);
    }
  }
}

TEST(RasterKernels, VariantsAgreeOnFullRows) {
  auto all = variants();
  std::mt19937 gen(5);
  std::uniform_int_distribution<int> coef(-300, 300), offset(-400000, 400000);
  for (int trial = 0; trial < 2000; ++trial) {
    Edge e[3];
    for (auto& x : e) x = {coef(gen), coef(gen), offset(gen)};
    std::vector<Buffer> out(all.size(), Buffer(255));
    for (std::size_t i = 0; i < all.size(); ++i) all[i]->fill_edges_row(out[i].row(), 0, kRow, trial % 80, e, 3, 7);
    for (std::size_t i = 1; i < all.size(); ++i) ASSERT_EQ(out[i].bytes, out[0].bytes);
  }
}
