#include "pgm/render.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <vector>

#include "pgm/errors.hpp"

namespace pgm {

namespace {

using raster::Edge;
using raster::KernelTable;

constexpr std::int32_t kUnit = 16384;  // fixed-point scale of the unit vertex tables
constexpr std::int32_t kPanelSub = kPanelSize * raster::kSubpixel;
constexpr std::int32_t kOutlineWidth = raster::kSubpixel;
constexpr std::int32_t kLineHalfWidth = raster::kSubpixel;
constexpr std::int32_t kLineDiagonalHalf = 23;  // kLineHalfWidth * sqrt(2), rounded
// Slot centres fall on pixel corners; nudging shapes a quarter pixel down
// makes their edges cross pixel centres on alternating sides as they grow,
// so adjacent sizes of axis-aligned shapes do not alias.
constexpr std::int32_t kShapeNudgeY = raster::kSubpixel / 4;

struct UnitVertex {
  std::int32_t x;
  std::int32_t y;
};

// Unit polygons (circumradius kUnit), first vertex up, y pointing down.
const std::vector<UnitVertex> kTriangle = {{0, -16384}, {14189, 8192}, {-14189, 8192}};
const std::vector<UnitVertex> kSquare = {{11585, -11585}, {11585, 11585}, {-11585, 11585}, {-11585, -11585}};
const std::vector<UnitVertex> kPentagon = {
    {0, -16384}, {15582, -5063}, {9630, 13255}, {-9630, 13255}, {-15582, -5063}};
const std::vector<UnitVertex> kHexagon = {{0, -16384},   {14189, -8192}, {14189, 8192},
                                          {0, 16384},    {-14189, 8192}, {-14189, -8192}};
const std::vector<UnitVertex> kOctagon = {{6270, -15137}, {15137, -6270},  {15137, 6270},   {6270, 15137},
                                          {-6270, 15137}, {-15137, 6270}, {-15137, -6270}, {-6270, -15137}};
// Five points, inner radius 0.45.
const std::vector<UnitVertex> kStar = {{0, -16384},   {4334, -5965},  {15582, -5063}, {7012, 2278},
                                       {9630, 13255}, {0, 7373},      {-9630, 13255}, {-7012, 2278},
                                       {-15582, -5063}, {-4334, -5965}};

// Inset keeping the outline about one pixel wide: width / cos(pi / n).
std::int32_t outline_inset(std::size_t type) {
  switch (type) {
    case 0: return kOutlineWidth;  // circle
    case 1: return 32;
    case 2: return 23;
    case 3: return 20;
    case 4: return 19;
    case 5: return 18;
    default: return 42;  // star, measured at the inner vertices
  }
}

const std::vector<UnitVertex>& polygon(std::size_t type) {
  switch (type) {
    case 1: return kTriangle;
    case 2: return kSquare;
    case 3: return kPentagon;
    case 4: return kHexagon;
    case 5: return kOctagon;
    default: return kStar;
  }
}

std::int32_t floor_div(std::int32_t a, std::int32_t b) {
  std::int32_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

struct Point {
  std::int32_t x;
  std::int32_t y;
};

// Pixels whose centre lies in [lo, hi] along one axis.
std::array<int, 2> pixel_span(std::int32_t lo, std::int32_t hi) {
  const int first = std::max(0, floor_div(lo - raster::kSubpixel / 2 + raster::kSubpixel - 1, raster::kSubpixel));
  const int last = std::min(kPanelSize - 1, floor_div(hi - raster::kSubpixel / 2, raster::kSubpixel));
  return {first, last + 1};
}

class Canvas {
 public:
  explicit Canvas(const KernelTable& k) : k_(k), image_(PanelImage::blank()) {}

  void fill_edges(const Edge* edges, int n, Point lo, Point hi, std::uint8_t value) {
    const auto xs = pixel_span(lo.x, hi.x);
    const auto ys = pixel_span(lo.y, hi.y);
    for (int y = ys[0]; y < ys[1]; ++y) k_.fill_edges_row(row(y), xs[0], xs[1], y, edges, n, value);
  }

  void fill_annulus(Point c, std::int32_t outer, std::int32_t inner_sq, std::uint8_t value) {
    const auto xs = pixel_span(c.x - outer, c.x + outer);
    const auto ys = pixel_span(c.y - outer, c.y + outer);
    for (int y = ys[0]; y < ys[1]; ++y)
      k_.fill_annulus_row(row(y), xs[0], xs[1], y, c.x, c.y, outer * outer, inner_sq, value);
  }

  PanelImage take() { return image_; }

 private:
  std::uint8_t* row(int y) { return image_.pixels.data() + static_cast<std::size_t>(y) * kPanelSize; }

  const KernelTable& k_;
  PanelImage image_;
};

// Half-plane to the left of p -> q (inside for counter-clockwise-on-screen
// order is normalised by the caller).
Edge edge_through(Point p, Point q) {
  return {-(q.y - p.y), q.x - p.x, (q.y - p.y) * p.x - (q.x - p.x) * p.y};
}

void fill_convex(Canvas& canvas, const std::vector<Point>& pts, std::uint8_t value) {
  std::int64_t area2 = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& p = pts[i];
    const auto& q = pts[(i + 1) % pts.size()];
    area2 += static_cast<std::int64_t>(p.x) * q.y - static_cast<std::int64_t>(q.x) * p.y;
  }
  std::vector<Edge> edges;
  Point lo{pts[0].x, pts[0].y}, hi = lo;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto e = edge_through(pts[i], pts[(i + 1) % pts.size()]);
    if (area2 <= 0) e = {-e.a, -e.b, -e.c};
    edges.push_back(e);
    lo = {std::min(lo.x, pts[i].x), std::min(lo.y, pts[i].y)};
    hi = {std::max(hi.x, pts[i].x), std::max(hi.y, pts[i].y)};
  }
  canvas.fill_edges(edges.data(), static_cast<int>(edges.size()), lo, hi, value);
}

std::vector<Point> scaled(const std::vector<UnitVertex>& unit, Point c, std::int32_t r) {
  std::vector<Point> out;
  out.reserve(unit.size());
  for (const auto& u : unit) out.push_back({c.x + ((u.x * r + kUnit / 2) >> 14), c.y + ((u.y * r + kUnit / 2) >> 14)});
  return out;
}

void fill_shape_body(Canvas& canvas, std::size_t type, Point c, std::int32_t r, std::uint8_t value) {
  if (type == 0) {
    canvas.fill_annulus(c, r, -1, value);
    return;
  }
  const auto pts = scaled(polygon(type), c, r);
  if (type != 6) {
    fill_convex(canvas, pts, value);
    return;
  }
  for (std::size_t i = 0; i < pts.size(); ++i) fill_convex(canvas, {c, pts[i], pts[(i + 1) % pts.size()]}, value);
}

void draw_shape(Canvas& canvas, const ShapeSpec& s) {
  const auto coord = slot_coordinate(s.slot);
  const Point c{static_cast<std::int32_t>(std::lround(coord.x * kPanelSub)),
                static_cast<std::int32_t>(std::lround((1.0 - coord.y) * kPanelSub)) + kShapeNudgeY};
  const auto r = shape_radius(s.size);
  fill_shape_body(canvas, s.type, c, r, kOutline);
  fill_shape_body(canvas, s.type, c, r - outline_inset(s.type), colour_level(s.colour));
}

void draw_line(Canvas& canvas, const LineSpec& l) {
  const auto v = colour_level(l.colour);
  const Point lo{0, 0}, hi{kPanelSub, kPanelSub};
  const std::int32_t mid = kPanelSub / 2;
  const std::int32_t d = kLineDiagonalHalf;
  switch (l.type) {
    case 0: {  // top-left to bottom-right
      const Edge e[] = {{1, -1, d}, {-1, 1, d}};
      canvas.fill_edges(e, 2, lo, hi, v);
      break;
    }
    case 1: {  // bottom-left to top-right
      const Edge e[] = {{1, 1, -kPanelSub + d}, {-1, -1, kPanelSub + d}};
      canvas.fill_edges(e, 2, lo, hi, v);
      break;
    }
    case 2: {
      const Edge e[] = {{1, 0, -(mid - kLineHalfWidth)}, {-1, 0, mid + kLineHalfWidth}};
      canvas.fill_edges(e, 2, lo, hi, v);
      break;
    }
    case 3: {
      const Edge e[] = {{0, 1, -(mid - kLineHalfWidth)}, {0, -1, mid + kLineHalfWidth}};
      canvas.fill_edges(e, 2, lo, hi, v);
      break;
    }
    case 4: {  // diamond through the edge midpoints, inset by 10 pixels
      const std::int32_t m = 10 * raster::kSubpixel;
      const std::int32_t diff = mid - m;           // |x - y| on the slanted sides
      const std::int32_t sum_lo = mid + m, sum_hi = 3 * mid - m;
      // Sides with constant x - y, clipped on x + y; then constant x + y, clipped on x - y.
      for (std::int32_t k : {diff, -diff}) {
        const Edge e[] = {{1, -1, -k + d}, {-1, 1, k + d}, {1, 1, -(sum_lo - d)}, {-1, -1, sum_hi + d}};
        canvas.fill_edges(e, 4, lo, hi, v);
      }
      for (std::int32_t k : {sum_lo, sum_hi}) {
        const Edge e[] = {{1, 1, -k + d}, {-1, -1, k + d}, {1, -1, diff + d}, {-1, 1, diff + d}};
        canvas.fill_edges(e, 4, lo, hi, v);
      }
      break;
    }
    default: {  // circle of radius 28 pixels
      const std::int32_t r = 28 * raster::kSubpixel;
      const std::int32_t inner = r - kLineHalfWidth;
      canvas.fill_annulus({mid, mid}, r + kLineHalfWidth, inner * inner, v);
      break;
    }
  }
}

// 3x5 bitmap digits 1..8, one row per entry, bit 2 = leftmost column.
constexpr std::array<std::array<std::uint8_t, 5>, 8> kDigits = {{
    {2, 6, 2, 2, 7},  // 1
    {7, 1, 7, 4, 7},  // 2
    {7, 1, 7, 1, 7},  // 3
    {5, 5, 7, 1, 1},  // 4
    {7, 4, 7, 1, 7},  // 5
    {7, 4, 7, 5, 7},  // 6
    {7, 1, 1, 1, 1},  // 7
    {7, 5, 7, 5, 7},  // 8
}};

void put(GrayImage& img, int x, int y, std::uint8_t v) {
  if (x >= 0 && y >= 0 && x < img.width && y < img.height) img.pixels[static_cast<std::size_t>(y * img.width + x)] = v;
}

void draw_digit(GrayImage& img, int x0, int y0, std::size_t digit) {
  const auto& glyph = kDigits[digit - 1];
  for (int row = 0; row < 5; ++row)
    for (int col = 0; col < 3; ++col)
      if ((glyph[static_cast<std::size_t>(row)] >> (2 - col)) & 1)
        for (int dy = 0; dy < 2; ++dy)
          for (int dx = 0; dx < 2; ++dx) put(img, x0 + col * 2 + dx, y0 + row * 2 + dy, 0);
}

void blit(GrayImage& img, const PanelImage& panel, std::array<int, 2> at) {
  for (int y = 0; y < kPanelSize; ++y)
    std::copy_n(panel.pixels.begin() + y * kPanelSize, kPanelSize,
                img.pixels.begin() + (at[1] + y) * img.width + at[0]);
}

void frame(GrayImage& img, std::array<int, 2> at) {
  for (int i = -1; i <= kPanelSize; ++i) {
    put(img, at[0] + i, at[1] - 1, SheetLayout::kFrame);
    put(img, at[0] + i, at[1] + kPanelSize, SheetLayout::kFrame);
    put(img, at[0] - 1, at[1] + i, SheetLayout::kFrame);
    put(img, at[0] + kPanelSize, at[1] + i, SheetLayout::kFrame);
  }
}

void png_write_to_string(png_structp png, png_bytep data, png_size_t n) {
  static_cast<std::string*>(png_get_io_ptr(png))->append(reinterpret_cast<const char*>(data), n);
}

}  // namespace

PanelImage PanelImage::blank() {
  PanelImage p;
  p.pixels.fill(kBackground);
  return p;
}

std::uint8_t colour_level(std::size_t colour_idx) {
  if (colour_idx >= kColourLevels) throw std::out_of_range("colour index");
  return static_cast<std::uint8_t>((colour_idx * 224 + 4) / 9);
}

std::int32_t shape_radius(std::size_t size_idx) {
  if (size_idx >= kSizeLevels) throw std::out_of_range("size index");
  return 64 + 10 * static_cast<std::int32_t>(size_idx);
}

PanelImage render_panel(const PanelSpec& panel) { return render_panel(panel, raster::active_kernels()); }

PanelImage render_panel(const PanelSpec& panel, const raster::KernelTable& kernels) {
  if (auto why = panel.violation()) throw Error("cannot render panel: " + *why);
  Canvas canvas(kernels);
  auto lines = panel.lines;
  std::sort(lines.begin(), lines.end());
  for (const auto& l : lines) draw_line(canvas, l);
  auto shapes = panel.shapes;
  std::sort(shapes.begin(), shapes.end());
  for (const auto& s : shapes) draw_shape(canvas, s);
  return canvas.take();
}

int SheetLayout::width() const { return 2 * kMargin + 4 * kPanelSize + 3 * kGap; }

int SheetLayout::height() const {
  return 2 * kMargin + 3 * kPanelSize + 2 * kGap + 2 * kMargin + 2 * (kLabelHeight + kPanelSize) + kGap;
}

std::array<int, 2> SheetLayout::context_origin(std::size_t cell) const {
  const int grid = 3 * kPanelSize + 2 * kGap;
  const int x0 = (width() - grid) / 2;
  return {x0 + static_cast<int>(cell % 3) * (kPanelSize + kGap), kMargin + static_cast<int>(cell / 3) * (kPanelSize + kGap)};
}

std::array<int, 2> SheetLayout::candidate_origin(std::size_t index) const {
  const int top = kMargin + 3 * kPanelSize + 2 * kGap + 2 * kMargin;
  return {kMargin + static_cast<int>(index % 4) * (kPanelSize + kGap),
          top + static_cast<int>(index / 4) * (kLabelHeight + kPanelSize + kGap) + kLabelHeight};
}

GrayImage render_puzzle_sheet(std::span<const PanelImage> context, std::span<const PanelImage> candidates) {
  if (context.size() != 8 || candidates.size() != 8) throw Error("a sheet needs 8 context and 8 candidate panels");
  SheetLayout layout;
  GrayImage img{layout.width(), layout.height(), {}};
  img.pixels.assign(static_cast<std::size_t>(img.width * img.height), kBackground);
  for (std::size_t i = 0; i < 9; ++i) {
    const auto at = layout.context_origin(i);
    if (i < 8) {
      blit(img, context[i], at);
    } else {
      for (int y = 0; y < kPanelSize; ++y)
        for (int x = 0; x < kPanelSize; ++x) put(img, at[0] + x, at[1] + y, SheetLayout::kBlankCell);
    }
    frame(img, at);
  }
  for (std::size_t i = 0; i < 8; ++i) {
    const auto at = layout.candidate_origin(i);
    blit(img, candidates[i], at);
    frame(img, at);
    draw_digit(img, at[0] + kPanelSize / 2 - 3, at[1] - SheetLayout::kLabelHeight, i + 1);
  }
  return img;
}

GrayImage to_gray(const PanelImage& panel) {
  return {kPanelSize, kPanelSize, std::vector<std::uint8_t>(panel.pixels.begin(), panel.pixels.end())};
}

std::string encode_pgm(const GrayImage& image) {
  std::string out = "P5\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  out.append(reinterpret_cast<const char*>(image.pixels.data()), image.pixels.size());
  return out;
}

std::string encode_png(const GrayImage& image) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw Error("png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  std::string out;
  std::vector<png_bytep> rows(static_cast<std::size_t>(image.height));
  if (!info || setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error("PNG encoding failed");
  }
  png_set_write_fn(png, &out, png_write_to_string, nullptr);
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height), 8,
               PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  for (int y = 0; y < image.height; ++y)
    rows[static_cast<std::size_t>(y)] = const_cast<png_bytep>(image.pixels.data() + y * image.width);
  png_set_rows(png, info, rows.data());
  png_write_png(png, info, PNG_TRANSFORM_IDENTITY, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

void write_image(const GrayImage& image, const std::string& path) {
  auto ends_with = [&](std::string_view ext) {
    return path.size() >= ext.size() && path.compare(path.size() - ext.size(), ext.size(), ext) == 0;
  };
  std::string bytes;
  if (ends_with(".png"))
    bytes = encode_png(image);
  else if (ends_with(".pgm"))
    bytes = encode_pgm(image);
  else
    throw Error("unsupported image extension for " + path + " (use .png or .pgm)");
  std::ofstream f(path, std::ios::binary);
  if (!f || !f.write(bytes.data(), static_cast<std::streamsize>(bytes.size())))
    throw Error("cannot write " + path);
}

std::uint64_t pixel_hash(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (auto b : bytes) {
    h ^= b;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace pgm
