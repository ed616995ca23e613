#pragma once

// On-disk encoding of one PuzzleRecord: a fixed-size binary record holding
// the pixels, plus one JSON line in a sidecar stream holding the symbolic
// content.
//
// Binary record, version 1, little-endian, 102424 bytes:
//   offset  size  field
//        0     4  magic "PGM1" (0x314D4750)
//        4     2  format version (1)
//        6     1  answer index, 0..7
//        7     1  regime id, 0..7 (neutral, interpolation, extrapolation,
//                 holdout_shape_colour, holdout_line_type, holdout_triples,
//                 holdout_triple_pairs, holdout_attribute_pairs)
//        8     1  split (0 train, 1 validation, 2 test)
//        9     1  distracting flag (0 or 1)
//       10     2  meta-target bits, element i in bit i
//       12     8  generation seed
//       20     4  CRC-32 (zlib) of bytes 0..19 followed by the pixel payload
//       24 102400 16 panels of 80x80 bytes, row-major: 8 context panels
//                 (matrix order, bottom-right missing) then 8 candidates

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>

#include <json.hpp>

#include "pgm/record.hpp"

namespace pgm {

inline constexpr std::uint32_t kRecordMagic = 0x314D4750u;
inline constexpr std::uint16_t kFormatVersion = 1;
inline constexpr std::size_t kHeaderBytes = 24;
inline constexpr std::size_t kPayloadBytes = kRecordPanels * kPanelPixels;
inline constexpr std::size_t kRecordBytes = kHeaderBytes + kPayloadBytes;

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes, std::uint32_t crc = 0);

/// Binary image of a rendered record (throws pgm::Error if pixels are missing).
std::string encode_binary(const PuzzleRecord& record);

/// Header and pixels of a binary record; symbolic fields stay unset.
struct BinaryRecord {
  std::uint8_t answer = 0;
  RegimeId regime = RegimeId::neutral;
  Split split = Split::train;
  bool distracting = false;
  MetaTarget meta;
  std::uint64_t seed = 0;
  std::uint32_t crc = 0;
  std::vector<PanelImage> pixels;
};

/// Throws FormatError; offsets are relative to `base_offset`.
BinaryRecord decode_binary(std::span<const std::uint8_t> bytes, std::uint64_t base_offset = 0);

nlohmann::json panel_to_json(const PanelSpec& p);
PanelSpec panel_from_json(const nlohmann::json& j);
nlohmann::json structure_to_json(const Structure& s);
Structure structure_from_json(const nlohmann::json& j);

/// Sidecar line (no trailing newline).
std::string encode_sidecar(const PuzzleRecord& record);
/// Throws FormatError at `offset` when the line is malformed.
PuzzleRecord decode_sidecar(const std::string& line, std::uint64_t offset = 0);

/// Joins the two halves of a record, checking that the header fields agree.
/// Throws FormatError at `offset`.
PuzzleRecord combine_halves(BinaryRecord binary, PuzzleRecord symbolic, std::uint64_t offset);

struct RecordSink {
  std::ostream& binary;
  std::ostream& sidecar;
};

class RecordSource {
 public:
  RecordSource(std::istream& binary, std::istream& sidecar) : binary_(binary), sidecar_(sidecar) {}
  /// False at a clean end of both streams.
  bool at_end();
  std::uint64_t binary_offset() const { return binary_offset_; }

 private:
  friend PuzzleRecord read_record(RecordSource& source);
  std::istream& binary_;
  std::istream& sidecar_;
  std::uint64_t binary_offset_ = 0;
  std::uint64_t sidecar_offset_ = 0;
};

void write_record(const PuzzleRecord& record, RecordSink& sink);
/// Reads both halves and checks that they agree. Throws FormatError.
PuzzleRecord read_record(RecordSource& source);

}  // namespace pgm
