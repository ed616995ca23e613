#include "pgm/dataset.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

#include "pgm/record_format.hpp"

namespace pgm {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kSeedFallbacks = 8;

std::string shard_stem(Split s, std::size_t shard) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "-%05zu", shard);
  return std::string(to_string(s)) + buf;
}

json dimension_to_json(Dimension d) {
  return json::array({std::string(to_string(d.object)), std::string(to_string(d.attribute))});
}

Dimension dimension_from_json(const json& j) {
  auto o = parse_object(j.at(0).get<std::string>());
  auto a = parse_attribute(j.at(1).get<std::string>());
  if (!o || !a || !is_valid_dimension({*o, *a})) throw std::invalid_argument("unknown dimension");
  return {*o, *a};
}

json plan_to_json(const HoldoutPlan& p) {
  json triples = json::array(), pairs = json::array(), attrs = json::array();
  for (const auto& t : p.held_out_triples) triples.push_back(structure_to_json(Structure({t}))[0]);
  for (const auto& tp : p.held_out_triple_pairs)
    pairs.push_back(json::array({structure_to_json(Structure({tp.first}))[0], structure_to_json(Structure({tp.second}))[0]}));
  for (const auto& dp : p.held_out_attribute_pairs)
    attrs.push_back(json::array({dimension_to_json(dp.first), dimension_to_json(dp.second)}));
  return {{"selection_seed", p.selection_seed},
          {"held_out_triples", triples},
          {"held_out_triple_pairs", pairs},
          {"held_out_attribute_pairs", attrs}};
}

Triple triple_from_json(const json& j) { return structure_from_json(json::array({j})).triples()[0]; }

HoldoutPlan plan_from_json(const json& j) {
  HoldoutPlan p;
  p.selection_seed = j.at("selection_seed").get<std::uint64_t>();
  for (const auto& t : j.at("held_out_triples")) p.held_out_triples.push_back(triple_from_json(t));
  for (const auto& tp : j.at("held_out_triple_pairs"))
    p.held_out_triple_pairs.push_back({triple_from_json(tp.at(0)), triple_from_json(tp.at(1))});
  for (const auto& dp : j.at("held_out_attribute_pairs"))
    p.held_out_attribute_pairs.push_back({dimension_from_json(dp.at(0)), dimension_from_json(dp.at(1))});
  return p;
}

json config_to_json(const CorpusConfig& c) {
  json objects = c.options.only_object ? json(std::string(to_string(*c.options.only_object))) : json("both");
  return {{"regime", std::string(to_string(c.regime))},
          {"distracting", c.distracting},
          {"base_seed", c.base_seed},
          {"selection_seed", c.selection_seed},
          {"shard_size", c.shard_size},
          {"human_readable", c.options.human_readable},
          {"objects", objects},
          {"min_relations", c.options.min_relations},
          {"max_relations", c.options.max_relations}};
}

CorpusConfig config_from_json(const json& j) {
  CorpusConfig c;
  auto regime = parse_regime(j.at("regime").get<std::string>());
  if (!regime) throw std::invalid_argument("unknown regime");
  c.regime = *regime;
  c.distracting = j.at("distracting").get<bool>();
  c.base_seed = j.at("base_seed").get<std::uint64_t>();
  c.selection_seed = j.at("selection_seed").get<std::uint64_t>();
  c.shard_size = j.at("shard_size").get<std::size_t>();
  c.options.human_readable = j.at("human_readable").get<bool>();
  const auto objects = j.at("objects").get<std::string>();
  if (objects != "both") {
    auto o = parse_object(objects);
    if (!o) throw std::invalid_argument("unknown object restriction");
    c.options.only_object = *o;
  }
  c.options.min_relations = j.at("min_relations").get<std::size_t>();
  c.options.max_relations = j.at("max_relations").get<std::size_t>();
  return c;
}

json domains_to_json() {
  json out = json::object();
  for (auto d : kDimensions) out[to_string(d)] = value_domain(d).labels;
  return out;
}

std::vector<std::uint8_t> read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) throw Error("cannot open " + p.string());
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::span<const std::uint8_t> as_bytes(const std::string& s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

struct ShardTask {
  Split split;
  std::size_t shard;
  std::size_t first;
  std::size_t count;
};

ShardInfo write_shard(const ShardTask& task, const CorpusConfig& config, const HoldoutPlan& plan,
                      const fs::path& dir, SplitInfo& counters) {
  const RegimeFilter filter(config.regime, task.split, plan);
  ShardInfo info;
  const auto stem = shard_stem(task.split, task.shard);
  info.file = stem + ".bin";
  info.sidecar = stem + ".jsonl";
  info.first_index = task.first;
  info.records = task.count;
  std::ofstream bin(dir / info.file, std::ios::binary);
  std::ofstream side(dir / info.sidecar, std::ios::binary);
  if (!bin || !side) throw Error("cannot create shard files under " + dir.string());
  std::uint32_t crc = 0, side_crc = 0;
  for (std::size_t i = 0; i < task.count; ++i) {
    const auto seed = config.base_seed + split_seed_offset(task.split) + task.first + i;
    const auto rec = generate_corpus_record(seed, filter, config, &counters);
    const auto bytes = encode_binary(rec);
    const auto line = encode_sidecar(rec) + "\n";
    bin.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    side.write(line.data(), static_cast<std::streamsize>(line.size()));
    crc = crc32_of(as_bytes(bytes), crc);
    side_crc = crc32_of(as_bytes(line), side_crc);
    info.record_crc32.push_back(crc32_of(as_bytes(bytes)));
  }
  bin.close();
  side.close();
  if (!bin || !side) throw Error("failed writing shard " + stem);
  info.crc32 = crc;
  info.sidecar_crc32 = side_crc;
  return info;
}

}  // namespace

std::uint64_t split_seed_offset(Split s) {
  switch (s) {
    case Split::train: return 0;
    case Split::validation: return std::uint64_t{1} << 40;
    case Split::test: return std::uint64_t{1} << 41;
  }
  return 0;
}

json Manifest::to_json() const {
  json splits_json = json::object();
  for (const auto& [split, info] : splits) {
    json shards = json::array();
    for (const auto& s : info.shards)
      shards.push_back({{"file", s.file},
                        {"sidecar", s.sidecar},
                        {"first_index", s.first_index},
                        {"records", s.records},
                        {"crc32", s.crc32},
                        {"sidecar_crc32", s.sidecar_crc32},
                        {"record_crc32", s.record_crc32}});
    splits_json[to_string(split)] = {{"count", info.count},
                                     {"seed_offset", info.seed_offset},
                                     {"seed_retries", info.seed_retries},
                                     {"structure_retries", info.structure_retries},
                                     {"shards", shards}};
  }
  return {{"format", kCorpusFormat},
          {"format_version", kFormatVersion},
          {"generator_version", generator_version},
          {"record_bytes", kRecordBytes},
          {"header_bytes", kHeaderBytes},
          {"panel_size", kPanelSize},
          {"config", config_to_json(config)},
          {"holdout_plan", plan_to_json(plan)},
          {"value_domains", domains_to_json()},
          {"splits", splits_json}};
}

Manifest Manifest::from_json(const json& j) {
  if (j.at("format").get<std::string>() != kCorpusFormat) throw std::invalid_argument("not a pgm corpus manifest");
  if (j.at("format_version").get<int>() != kFormatVersion) throw std::invalid_argument("unsupported format version");
  if (j.at("record_bytes").get<std::size_t>() != kRecordBytes) throw std::invalid_argument("record size mismatch");
  Manifest m;
  m.config = config_from_json(j.at("config"));
  m.plan = plan_from_json(j.at("holdout_plan"));
  m.generator_version = j.at("generator_version").get<std::string>();
  for (const auto& [name, sj] : j.at("splits").items()) {
    auto split = parse_split(name);
    if (!split) throw std::invalid_argument("unknown split " + name);
    SplitInfo info;
    info.count = sj.at("count").get<std::size_t>();
    info.seed_offset = sj.at("seed_offset").get<std::uint64_t>();
    info.seed_retries = sj.value("seed_retries", std::size_t{0});
    info.structure_retries = sj.value("structure_retries", std::size_t{0});
    for (const auto& s : sj.at("shards")) {
      ShardInfo shard;
      shard.file = s.at("file").get<std::string>();
      shard.sidecar = s.at("sidecar").get<std::string>();
      shard.first_index = s.at("first_index").get<std::size_t>();
      shard.records = s.at("records").get<std::size_t>();
      shard.crc32 = s.at("crc32").get<std::uint32_t>();
      shard.sidecar_crc32 = s.at("sidecar_crc32").get<std::uint32_t>();
      shard.record_crc32 = s.at("record_crc32").get<std::vector<std::uint32_t>>();
      info.shards.push_back(std::move(shard));
    }
    m.config.sizes[static_cast<std::size_t>(*split)] = info.count;
    m.splits[*split] = std::move(info);
  }
  return m;
}

PuzzleRecord generate_corpus_record(std::uint64_t seed, const RegimeFilter& filter, const CorpusConfig& config,
                                    SplitInfo* counters) {
  for (int attempt = 0;; ++attempt) {
    const auto s = attempt == 0 ? seed : splitmix64(seed + static_cast<std::uint64_t>(attempt));
    GenerationStats stats;
    try {
      auto rec = generate_puzzle(s, filter, config.distracting, config.options, &stats);
      if (counters) counters->structure_retries += stats.structure_retries;
      render_record(rec);
      return rec;
    } catch (const FilterExhausted&) {
      throw;
    } catch (const Error&) {
      if (counters) counters->structure_retries += stats.structure_retries;
      if (attempt + 1 == kSeedFallbacks) throw;
      if (counters) ++counters->seed_retries;
    }
  }
}

Manifest write_corpus(const CorpusConfig& config, const fs::path& dir, std::ostream* log) {
  if (config.shard_size == 0) throw Error("shard size must be positive");
  fs::create_directories(dir);
  Manifest manifest;
  manifest.config = config;
  manifest.plan = build_holdout_plan(config.selection_seed);
  manifest.generator_version = kGeneratorVersion;

  // Fail fast on filters that admit nothing.
  for (auto split : kSplits) {
    if (config.sizes[static_cast<std::size_t>(split)] == 0) continue;
    const RegimeFilter filter(config.regime, split, manifest.plan);
    Rng probe(config.base_seed);
    (void)sample_structure(probe, filter, config.options);
  }

  std::vector<ShardTask> tasks;
  for (auto split : kSplits) {
    const auto n = config.sizes[static_cast<std::size_t>(split)];
    auto& info = manifest.splits[split];
    info.count = n;
    info.seed_offset = split_seed_offset(split);
    for (std::size_t first = 0, shard = 0; first < n; first += config.shard_size, ++shard)
      tasks.push_back({split, shard, first, std::min(config.shard_size, n - first)});
  }

  std::vector<ShardInfo> results(tasks.size());
  std::vector<SplitInfo> counters(tasks.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex mu;
  auto worker = [&] {
    for (;;) {
      const auto i = next.fetch_add(1);
      if (i >= tasks.size() || failed) return;
      try {
        results[i] = write_shard(tasks[i], config, manifest.plan, dir, counters[i]);
        if (log) {
          std::lock_guard lock(mu);
          *log << results[i].file << ": " << tasks[i].count << " records, " << counters[i].structure_retries
               << " structure retries, " << counters[i].seed_retries << " seed fallbacks\n";
        }
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
        failed = true;
        return;
      }
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(config.jobs, static_cast<unsigned>(tasks.size())));
  std::vector<std::thread> threads;
  for (unsigned t = 1; t < jobs; ++t) threads.emplace_back(worker);
  worker();
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);

  for (std::size_t i = 0; i < tasks.size(); ++i) {
    auto& info = manifest.splits[tasks[i].split];
    info.shards.push_back(std::move(results[i]));
    info.seed_retries += counters[i].seed_retries;
    info.structure_retries += counters[i].structure_retries;
  }
  std::ofstream f(dir / kManifestName);
  f << manifest.to_json().dump(2) << '\n';
  if (!f) throw Error("cannot write manifest under " + dir.string());
  return manifest;
}

Dataset::Dataset(fs::path dir) : dir_(std::move(dir)) {
  std::ifstream f(dir_ / kManifestName);
  if (!f) throw Error("no manifest.json in " + dir_.string());
  try {
    manifest_ = Manifest::from_json(json::parse(f));
  } catch (const json::exception& e) {
    throw Error("malformed manifest: " + std::string(e.what()));
  } catch (const std::invalid_argument& e) {
    throw Error("malformed manifest: " + std::string(e.what()));
  }
}

std::size_t Dataset::size(Split s) const {
  auto it = manifest_.splits.find(s);
  return it == manifest_.splits.end() ? 0 : it->second.count;
}

const ShardInfo& Dataset::shard_for(Split s, std::size_t index, std::size_t& local) const {
  if (index >= size(s))
    throw std::out_of_range("record " + std::to_string(index) + " outside " + std::string(to_string(s)) + " split");
  for (const auto& shard : manifest_.splits.at(s).shards) {
    if (index >= shard.first_index && index < shard.first_index + shard.records) {
      local = index - shard.first_index;
      return shard;
    }
  }
  throw std::out_of_range("no shard holds record " + std::to_string(index));
}

std::uint64_t Dataset::sidecar_offset(const ShardInfo& shard, std::size_t local) const {
  std::lock_guard lock(index_mutex_);
  auto& offsets = line_offsets_[shard.sidecar];
  if (offsets.empty()) {
    std::ifstream f(dir_ / shard.sidecar, std::ios::binary);
    if (!f) throw Error("cannot open " + shard.sidecar);
    std::uint64_t pos = 0;
    offsets.push_back(0);
    std::string line;
    while (std::getline(f, line)) {
      pos += line.size() + 1;
      offsets.push_back(pos);
    }
  }
  if (local + 1 >= offsets.size()) throw FormatError(shard.sidecar + " has too few lines", offsets.back());
  return offsets[local];
}

PuzzleRecord Dataset::read(Split s, std::size_t index) const {
  std::size_t local = 0;
  const auto& shard = shard_for(s, index, local);
  const std::uint64_t offset = static_cast<std::uint64_t>(local) * kRecordBytes;
  std::ifstream bin(dir_ / shard.file, std::ios::binary);
  if (!bin) throw Error("cannot open " + shard.file);
  bin.seekg(static_cast<std::streamoff>(offset));
  std::vector<std::uint8_t> buf(kRecordBytes);
  bin.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  buf.resize(static_cast<std::size_t>(std::max<std::streamsize>(0, bin.gcount())));
  auto binary = decode_binary(buf, offset);

  const auto line_offset = sidecar_offset(shard, local);
  std::ifstream side(dir_ / shard.sidecar, std::ios::binary);
  side.seekg(static_cast<std::streamoff>(line_offset));
  std::string line;
  std::getline(side, line);
  return combine_halves(std::move(binary), decode_sidecar(line, line_offset), offset);
}

void Dataset::for_each(Split s, const std::function<void(std::size_t, const PuzzleRecord&)>& fn) const {
  auto it = manifest_.splits.find(s);
  if (it == manifest_.splits.end()) return;
  for (const auto& shard : it->second.shards) {
    std::ifstream bin(dir_ / shard.file, std::ios::binary);
    std::ifstream side(dir_ / shard.sidecar, std::ios::binary);
    if (!bin || !side) throw Error("cannot open shard " + shard.file);
    RecordSource src(bin, side);
    for (std::size_t i = 0; i < shard.records; ++i) fn(shard.first_index + i, read_record(src));
  }
}

std::vector<IntegrityIssue> verify_checksums(const Dataset& ds) {
  std::vector<IntegrityIssue> issues;
  for (const auto& [split, info] : ds.manifest().splits) {
    std::size_t total = 0;
    for (const auto& shard : info.shards) {
      total += shard.records;
      std::vector<std::uint8_t> bytes;
      try {
        bytes = read_file(ds.dir() / shard.file);
      } catch (const Error& e) {
        issues.push_back({shard.file, 0, e.what()});
        continue;
      }
      if (bytes.size() != shard.records * kRecordBytes)
        issues.push_back({shard.file, 0, "size " + std::to_string(bytes.size()) + " bytes, expected " +
                                             std::to_string(shard.records * kRecordBytes)});
      if (crc32_of(bytes) != shard.crc32) issues.push_back({shard.file, 0, "shard checksum mismatch"});
      for (std::size_t i = 0; i < shard.records && (i + 1) * kRecordBytes <= bytes.size(); ++i) {
        const std::span<const std::uint8_t> rec(bytes.data() + i * kRecordBytes, kRecordBytes);
        if (i >= shard.record_crc32.size() || crc32_of(rec) != shard.record_crc32[i])
          issues.push_back({shard.file, i, "record checksum mismatch"});
      }
      try {
        if (crc32_of(read_file(ds.dir() / shard.sidecar)) != shard.sidecar_crc32)
          issues.push_back({shard.sidecar, 0, "sidecar checksum mismatch"});
      } catch (const Error& e) {
        issues.push_back({shard.sidecar, 0, e.what()});
      }
    }
    if (total != info.count)
      issues.push_back({std::string(to_string(split)), 0, "shards hold " + std::to_string(total) + " records, manifest says " +
                                                               std::to_string(info.count)});
  }
  return issues;
}

void CorpusStats::add(const PuzzleRecord& r) {
  ++records_;
  ++by_size_[r.structure.size()];
  for (const auto& t : r.structure.triples()) {
    ++triples_;
    ++relations_[static_cast<std::size_t>(t.relation)];
    ++attributes_[static_cast<std::size_t>(t.attribute)];
    ++objects_[static_cast<std::size_t>(t.object)];
  }
  ++answers_[r.answer];
  if (r.distracting) ++distracting_;
}

namespace {
double fraction(std::size_t n, std::size_t d) { return d == 0 ? 0.0 : static_cast<double>(n) / static_cast<double>(d); }
}  // namespace

double CorpusStats::relation_fraction(RelationType r) const { return fraction(relation_count(r), triples_); }
double CorpusStats::attribute_fraction(AttributeType a) const { return fraction(attribute_count(a), triples_); }
double CorpusStats::object_fraction(ObjectType o) const { return fraction(object_count(o), triples_); }

double CorpusStats::answer_chi_square() const {
  if (records_ == 0) return 0.0;
  const double expected = static_cast<double>(records_) / 8.0;
  double x2 = 0.0;
  for (auto n : answers_) x2 += (static_cast<double>(n) - expected) * (static_cast<double>(n) - expected) / expected;
  return x2;
}

double CorpusStats::answer_uniformity_p() const {
  if (records_ == 0) return 1.0;
  const boost::math::chi_squared dist(7.0);
  return boost::math::cdf(boost::math::complement(dist, answer_chi_square()));
}

json CorpusStats::to_json() const {
  json by_size = json::object(), rel = json::object(), attr = json::object(), obj = json::object();
  for (const auto& [k, v] : by_size_) by_size[std::to_string(k)] = v;
  for (auto r : kRelations) rel[std::string(to_string(r))] = {{"count", relation_count(r)}, {"fraction", relation_fraction(r)}};
  for (auto a : kAttributes)
    attr[std::string(to_string(a))] = {{"count", attribute_count(a)}, {"fraction", attribute_fraction(a)}};
  for (auto o : kObjects) obj[std::string(to_string(o))] = {{"count", object_count(o)}, {"fraction", object_fraction(o)}};
  return {{"records", records_},
          {"triples", triples_},
          {"structure_size", by_size},
          {"relations", rel},
          {"attributes", attr},
          {"objects", obj},
          {"answer_histogram", answers_},
          {"answer_chi_square", answer_chi_square()},
          {"answer_uniformity_p", answer_uniformity_p()},
          {"distracting", distracting_}};
}

std::string CorpusStats::to_text() const {
  std::ostringstream out;
  char buf[64];
  out << "records: " << records_ << " (" << distracting_ << " distracting)\n";
  out << "structure size:";
  for (const auto& [k, v] : by_size_) out << ' ' << k << ':' << v;
  out << "\nrelations:";
  for (auto r : kRelations) {
    std::snprintf(buf, sizeof buf, " %.3f", relation_fraction(r));
    out << ' ' << to_string(r) << buf;
  }
  out << "\nattributes:";
  for (auto a : kAttributes) {
    std::snprintf(buf, sizeof buf, " %.3f", attribute_fraction(a));
    out << ' ' << to_string(a) << buf;
  }
  out << "\nobjects:";
  for (auto o : kObjects) {
    std::snprintf(buf, sizeof buf, " %.3f", object_fraction(o));
    out << ' ' << to_string(o) << buf;
  }
  out << "\nanswers:";
  for (auto n : answers_) out << ' ' << n;
  std::snprintf(buf, sizeof buf, "chi2 %.3f, p %.4f", answer_chi_square(), answer_uniformity_p());
  out << "\nanswer uniformity: " << buf << '\n';
  return out.str();
}

CorpusStats corpus_stats(std::span<const PuzzleRecord> records) {
  CorpusStats s;
  for (const auto& r : records) s.add(r);
  return s;
}

}  // namespace pgm
