#include "pgm/record_format.hpp"

#include <zlib.h>

#include <istream>
#include <ostream>

namespace pgm {

namespace {

using nlohmann::json;

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>(v >> 8));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint64_t get_le(std::span<const std::uint8_t> b, std::size_t at, std::size_t n) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < n; ++i) v |= static_cast<std::uint64_t>(b[at + i]) << (8 * i);
  return v;
}

std::uint32_t record_crc(std::span<const std::uint8_t> bytes) {
  auto crc = crc32_of(bytes.subspan(0, 20));
  return crc32_of(bytes.subspan(kHeaderBytes, kPayloadBytes), crc);
}

json triple_to_json(const Triple& t) {
  return json::array({std::string(to_string(t.relation)), std::string(to_string(t.object)),
                      std::string(to_string(t.attribute))});
}

template <typename T>
T require(std::optional<T> v, const std::string& what, std::uint64_t offset) {
  if (!v) throw FormatError("sidecar: " + what, offset);
  return *v;
}

}  // namespace

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes, std::uint32_t crc) {
  return static_cast<std::uint32_t>(::crc32(crc, bytes.data(), static_cast<uInt>(bytes.size())));
}

std::string encode_binary(const PuzzleRecord& r) {
  if (r.pixels.size() != kRecordPanels) throw Error("record has no rendered pixels");
  std::string out;
  out.reserve(kRecordBytes);
  put_u32(out, kRecordMagic);
  put_u16(out, kFormatVersion);
  out.push_back(static_cast<char>(r.answer));
  out.push_back(static_cast<char>(r.regime));
  out.push_back(static_cast<char>(r.split));
  out.push_back(static_cast<char>(r.distracting ? 1 : 0));
  put_u16(out, r.meta.bits());
  put_u64(out, r.seed);
  put_u32(out, 0);
  for (const auto& p : r.pixels) out.append(reinterpret_cast<const char*>(p.pixels.data()), p.pixels.size());
  const auto crc = record_crc({reinterpret_cast<const std::uint8_t*>(out.data()), out.size()});
  for (int i = 0; i < 4; ++i) out[static_cast<std::size_t>(20 + i)] = static_cast<char>((crc >> (8 * i)) & 0xFF);
  return out;
}

BinaryRecord decode_binary(std::span<const std::uint8_t> b, std::uint64_t base) {
  if (b.size() < kHeaderBytes) throw FormatError("truncated record header", base + b.size());
  if (get_le(b, 0, 4) != kRecordMagic) throw FormatError("bad record magic", base);
  if (get_le(b, 4, 2) != kFormatVersion)
    throw FormatError("unsupported format version " + std::to_string(get_le(b, 4, 2)), base + 4);
  BinaryRecord r;
  r.answer = b[6];
  if (r.answer >= kCandidatePanels) throw FormatError("answer index out of range", base + 6);
  if (b[7] >= kRegimes.size()) throw FormatError("unknown regime id", base + 7);
  r.regime = static_cast<RegimeId>(b[7]);
  if (b[8] >= kSplits.size()) throw FormatError("unknown split id", base + 8);
  r.split = static_cast<Split>(b[8]);
  if (b[9] > 1) throw FormatError("distracting flag is not 0 or 1", base + 9);
  r.distracting = b[9] == 1;
  const auto bits = static_cast<std::uint16_t>(get_le(b, 10, 2));
  if (bits >> MetaTarget::kBits) throw FormatError("meta-target uses more than 12 bits", base + 10);
  r.meta = MetaTarget(bits);
  r.seed = get_le(b, 12, 8);
  r.crc = static_cast<std::uint32_t>(get_le(b, 20, 4));
  if (b.size() < kRecordBytes) throw FormatError("truncated pixel payload", base + b.size());
  if (record_crc(b) != r.crc) throw FormatError("record checksum mismatch", base + 20);
  r.pixels.resize(kRecordPanels);
  for (std::size_t i = 0; i < kRecordPanels; ++i)
    std::copy_n(b.begin() + static_cast<long>(kHeaderBytes + i * kPanelPixels), kPanelPixels, r.pixels[i].pixels.begin());
  return r;
}

json panel_to_json(const PanelSpec& p) {
  json shapes = json::array(), lines = json::array();
  for (const auto& s : p.shapes) shapes.push_back({s.slot, s.type, s.size, s.colour});
  for (const auto& l : p.lines) lines.push_back({l.type, l.colour});
  return {{"shapes", shapes}, {"lines", lines}};
}

PanelSpec panel_from_json(const json& j) {
  PanelSpec p;
  for (const auto& s : j.at("shapes")) {
    if (s.size() != 4) throw std::invalid_argument("shape entries have four fields");
    p.shapes.push_back({s[0].get<std::uint8_t>(), s[1].get<std::uint8_t>(), s[2].get<std::uint8_t>(),
                        s[3].get<std::uint8_t>()});
  }
  for (const auto& l : j.at("lines")) {
    if (l.size() != 2) throw std::invalid_argument("line entries have two fields");
    p.lines.push_back({l[0].get<std::uint8_t>(), l[1].get<std::uint8_t>()});
  }
  if (auto why = p.violation()) throw std::invalid_argument(*why);
  return p;
}

json structure_to_json(const Structure& s) {
  json out = json::array();
  for (const auto& t : s.triples()) out.push_back(triple_to_json(t));
  return out;
}

Structure structure_from_json(const json& j) {
  std::vector<Triple> triples;
  for (const auto& t : j) {
    auto r = parse_relation(t.at(0).get<std::string>());
    auto o = parse_object(t.at(1).get<std::string>());
    auto a = parse_attribute(t.at(2).get<std::string>());
    if (!r || !o || !a) throw std::invalid_argument("unknown triple component");
    triples.push_back({*r, *o, *a});
  }
  return Structure(std::move(triples));
}

std::string encode_sidecar(const PuzzleRecord& r) {
  json orient = json::array();
  for (auto o : r.orientations) orient.push_back(std::string(to_string(o)));
  json context = json::array(), candidates = json::array();
  for (const auto& p : r.context) context.push_back(panel_to_json(p));
  for (const auto& p : r.candidates) candidates.push_back(panel_to_json(p));
  json j = {{"seed", r.seed},
            {"regime", std::string(to_string(r.regime))},
            {"split", std::string(to_string(r.split))},
            {"distracting", r.distracting},
            {"answer", r.answer},
            {"meta", r.meta.to_string()},
            {"structure", structure_to_json(r.structure)},
            {"orientations", orient},
            {"context", context},
            {"candidates", candidates}};
  return j.dump();
}

PuzzleRecord decode_sidecar(const std::string& line, std::uint64_t offset) {
  try {
    const auto j = json::parse(line);
    PuzzleRecord r{.seed = j.at("seed").get<std::uint64_t>(),
                   .regime = require(parse_regime(j.at("regime").get<std::string>()), "unknown regime", offset),
                   .split = require(parse_split(j.at("split").get<std::string>()), "unknown split", offset),
                   .distracting = j.at("distracting").get<bool>(),
                   .structure = structure_from_json(j.at("structure"))};
    for (const auto& o : j.at("orientations"))
      r.orientations.push_back(require(parse_orientation(o.get<std::string>()), "unknown orientation", offset));
    if (r.orientations.size() != r.structure.size()) throw FormatError("sidecar: orientation count mismatch", offset);
    const auto& ctx = j.at("context");
    const auto& cand = j.at("candidates");
    if (ctx.size() != kContextPanels || cand.size() != kCandidatePanels)
      throw FormatError("sidecar: expected 8 context and 8 candidate panels", offset);
    for (std::size_t i = 0; i < kContextPanels; ++i) r.context[i] = panel_from_json(ctx[i]);
    for (std::size_t i = 0; i < kCandidatePanels; ++i) r.candidates[i] = panel_from_json(cand[i]);
    const auto answer = j.at("answer").get<unsigned>();
    if (answer >= kCandidatePanels) throw FormatError("sidecar: answer index out of range", offset);
    r.answer = static_cast<std::uint8_t>(answer);
    r.meta = require(MetaTarget::parse(j.at("meta").get<std::string>()), "bad meta-target string", offset);
    return r;
  } catch (const FormatError&) {
    throw;
  } catch (const std::exception& e) {
    throw FormatError(std::string("sidecar: ") + e.what(), offset);
  }
}

bool RecordSource::at_end() {
  return binary_.peek() == std::char_traits<char>::eof() && sidecar_.peek() == std::char_traits<char>::eof();
}

void write_record(const PuzzleRecord& record, RecordSink& sink) {
  const auto bytes = encode_binary(record);
  sink.binary.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  sink.sidecar << encode_sidecar(record) << '\n';
  if (!sink.binary || !sink.sidecar) throw Error("write failed");
}

PuzzleRecord read_record(RecordSource& src) {
  std::vector<std::uint8_t> buf(kRecordBytes);
  src.binary_.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  buf.resize(static_cast<std::size_t>(src.binary_.gcount()));
  const auto base = src.binary_offset_;
  auto bin = decode_binary(buf, base);
  src.binary_offset_ += kRecordBytes;

  std::string line;
  if (!std::getline(src.sidecar_, line)) throw FormatError("sidecar ended before the binary stream", src.sidecar_offset_);
  const auto line_offset = src.sidecar_offset_;
  src.sidecar_offset_ += line.size() + 1;
  return combine_halves(std::move(bin), decode_sidecar(line, line_offset), base);
}

PuzzleRecord combine_halves(BinaryRecord bin, PuzzleRecord rec, std::uint64_t offset) {
  if (rec.seed != bin.seed || rec.answer != bin.answer || rec.regime != bin.regime || rec.split != bin.split ||
      rec.distracting != bin.distracting || rec.meta != bin.meta)
    throw FormatError("sidecar disagrees with the binary header", offset);
  rec.pixels = std::move(bin.pixels);
  return rec;
}

}  // namespace pgm
