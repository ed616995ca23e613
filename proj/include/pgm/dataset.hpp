#pragma once

// Sharded corpora on disk: generation, manifest, reading, integrity
// checks and summary statistics.
//
// Layout of a corpus directory:
//   manifest.json               configuration, holdout plan, value domains,
//                               per-shard and per-record CRC-32s
//   {split}-{NNNNN}.bin         binary records (see record_format.hpp)
//   {split}-{NNNNN}.jsonl       symbolic sidecar, one line per record
//
// Record i of a split uses seed base_seed + split_offset + i, with split
// offsets 0 (train), 2^40 (validation) and 2^41 (test), so the splits draw
// from disjoint seed ranges.

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pgm/generator.hpp"
#include "pgm/record.hpp"
#include "pgm/regimes.hpp"

namespace pgm {

inline constexpr char kManifestName[] = "manifest.json";
inline constexpr char kCorpusFormat[] = "pgm-corpus";

std::uint64_t split_seed_offset(Split s);

struct CorpusConfig {
  RegimeId regime = RegimeId::neutral;
  bool distracting = true;
  std::uint64_t base_seed = 1;
  std::uint64_t selection_seed = 1;
  std::array<std::size_t, 3> sizes = {10000, 1000, 2000};  // train, validation, test
  std::size_t shard_size = 1000;
  unsigned jobs = 1;
  GeneratorOptions options;
};

struct ShardInfo {
  std::string file;
  std::string sidecar;
  std::size_t first_index = 0;
  std::size_t records = 0;
  std::uint32_t crc32 = 0;          // whole binary shard
  std::uint32_t sidecar_crc32 = 0;  // whole sidecar shard
  std::vector<std::uint32_t> record_crc32;
};

struct SplitInfo {
  std::size_t count = 0;
  std::uint64_t seed_offset = 0;
  std::size_t seed_retries = 0;       // records generated from a fallback seed
  std::size_t structure_retries = 0;  // structures replaced inside generate_puzzle
  std::vector<ShardInfo> shards;
};

struct Manifest {
  CorpusConfig config;
  HoldoutPlan plan;
  std::string generator_version;
  std::map<Split, SplitInfo> splits;

  nlohmann::json to_json() const;
  static Manifest from_json(const nlohmann::json& j);
};

/// Generates, renders and writes a corpus. Shards are generated in
/// parallel (config.jobs threads); output does not depend on the thread
/// count. Progress and retry counts go to `log` when given.
Manifest write_corpus(const CorpusConfig& config, const std::filesystem::path& dir, std::ostream* log = nullptr);

/// The record for one seed of a corpus, with fallback seeds when the
/// primary one cannot be realised. Pixels rendered.
PuzzleRecord generate_corpus_record(std::uint64_t seed, const RegimeFilter& filter, const CorpusConfig& config,
                                    SplitInfo* counters = nullptr);

class Dataset {
 public:
  /// Reads the manifest; throws pgm::Error / FormatError.
  explicit Dataset(std::filesystem::path dir);

  const Manifest& manifest() const { return manifest_; }
  const std::filesystem::path& dir() const { return dir_; }
  std::size_t size(Split s) const;
  /// Random access; throws std::out_of_range or FormatError.
  PuzzleRecord read(Split s, std::size_t index) const;
  /// Streams every record of a split in order.
  void for_each(Split s, const std::function<void(std::size_t, const PuzzleRecord&)>& fn) const;

 private:
  const ShardInfo& shard_for(Split s, std::size_t index, std::size_t& local) const;
  std::uint64_t sidecar_offset(const ShardInfo& shard, std::size_t local) const;

  std::filesystem::path dir_;
  Manifest manifest_;
  mutable std::mutex index_mutex_;
  mutable std::map<std::string, std::vector<std::uint64_t>> line_offsets_;
};

struct IntegrityIssue {
  std::string file;
  std::size_t record = 0;  // index within the shard
  std::string message;
};

/// Recomputes shard and record checksums against the manifest.
std::vector<IntegrityIssue> verify_checksums(const Dataset& ds);

class CorpusStats {
 public:
  void add(const PuzzleRecord& r);

  std::size_t records() const { return records_; }
  std::size_t triples() const { return triples_; }
  const std::map<std::size_t, std::size_t>& by_structure_size() const { return by_size_; }
  std::size_t relation_count(RelationType r) const { return relations_[static_cast<std::size_t>(r)]; }
  std::size_t attribute_count(AttributeType a) const { return attributes_[static_cast<std::size_t>(a)]; }
  std::size_t object_count(ObjectType o) const { return objects_[static_cast<std::size_t>(o)]; }
  /// Fractions over all triples in the corpus.
  double relation_fraction(RelationType r) const;
  double attribute_fraction(AttributeType a) const;
  double object_fraction(ObjectType o) const;
  const std::array<std::size_t, 8>& answer_histogram() const { return answers_; }
  std::size_t distracting_records() const { return distracting_; }
  /// Pearson statistic of the answer histogram against uniform, and its
  /// upper-tail p-value with 7 degrees of freedom.
  double answer_chi_square() const;
  double answer_uniformity_p() const;

  nlohmann::json to_json() const;
  std::string to_text() const;

 private:
  std::size_t records_ = 0;
  std::size_t triples_ = 0;
  std::size_t distracting_ = 0;
  std::map<std::size_t, std::size_t> by_size_;
  std::array<std::size_t, 5> relations_{};
  std::array<std::size_t, 5> attributes_{};
  std::array<std::size_t, 2> objects_{};
  std::array<std::size_t, 8> answers_{};
};

CorpusStats corpus_stats(std::span<const PuzzleRecord> records);

}  // namespace pgm
