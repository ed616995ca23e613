// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Expected values come from the brute-force oracles in tests/oracles.

#include <unistd.h>

#include <boost/math/distributions/chi_squared.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "oracles/oracles.hpp"
#include "pgm/dataset.hpp"
#include "pgm/generator.hpp"
#include "pgm/meta_target.hpp"
#include "pgm/record.hpp"
#include "pgm/rng.hpp"
#include "pgm/solver.hpp"

using namespace pgm;
namespace fs = std::filesystem;

namespace {

// Pinned sizes and tolerances.
constexpr std::size_t kRoundTripPuzzles = 10000;
constexpr std::size_t kRegimeRecords = 1000;  // per regime per split
constexpr std::size_t kDeterminismRecords = 1000;
constexpr std::size_t kAuditMatrices = 1000;
constexpr double kChance = 0.125;
constexpr double kChanceTolerance = 0.010;
constexpr double kUniformityAlpha = 0.01;

int failures = 0;

void report(const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s %s: %s\n", ok ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

const HoldoutPlan& plan() {
  static const HoldoutPlan p = build_holdout_plan(1);
  return p;
}

std::string dim_name(const oracle::TripleName& t) { return t.object + "/" + t.attribute; }
std::string dim_name(Dimension d) {
  return std::string(to_string(d.object)) + "/" + std::string(to_string(d.attribute));
}

std::vector<oracle::TripleName> names(const Structure& s) {
  std::vector<oracle::TripleName> out;
  for (const auto& t : s.triples()) out.push_back(oracle::name_of(t));
  return out;
}

// Colour (shape and line) and size indices used anywhere in a record.
std::pair<std::set<int>, std::set<int>> used_values(const PuzzleRecord& r) {
  std::set<int> colours, sizes;
  auto add = [&](const PanelSpec& p) {
    for (const auto& s : p.shapes) {
      colours.insert(s.colour);
      sizes.insert(s.size);
    }
    for (const auto& l : p.lines) colours.insert(l.colour);
  };
  for (const auto& p : r.context) add(p);
  for (const auto& p : r.candidates) add(p);
  return {colours, sizes};
}

void triple_census() {
  std::set<oracle::TripleName> lib;
  for (const auto& t : enumerate_viable_triples()) lib.insert(oracle::name_of(t));
  const auto ref = oracle::all_triples();
  const std::set<oracle::TripleName> want(ref.begin(), ref.end());
  const bool ok = enumerate_viable_triples().size() == 29 && want.size() == 29 && lib == want;
  report("triple_census", ok,
         "library " + std::to_string(enumerate_viable_triples().size()) + ", oracle " + std::to_string(want.size()));
}

void pair_census() {
  std::set<std::pair<oracle::TripleName, oracle::TripleName>> lib;
  for (const auto& p : enumerate_viable_triple_pairs()) {
    auto a = oracle::name_of(p.first), b = oracle::name_of(p.second);
    lib.insert(a < b ? std::make_pair(a, b) : std::make_pair(b, a));
  }
  std::set<std::pair<std::string, std::string>> attr;
  for (const auto& p : enumerate_viable_attribute_pairs()) {
    auto a = dim_name(p.first), b = dim_name(p.second);
    attr.insert(a < b ? std::make_pair(a, b) : std::make_pair(b, a));
  }
  const auto want_pairs = oracle::all_triple_pairs();
  const auto want_attr = oracle::all_attribute_pairs();
  const bool ok = enumerate_viable_triple_pairs().size() == 400 && want_pairs.size() == 400 && lib == want_pairs &&
                  enumerate_viable_attribute_pairs().size() == 20 && want_attr.size() == 20 && attr == want_attr;
  report("pair_census", ok,
         "triple pairs " + std::to_string(enumerate_viable_triple_pairs().size()) + "/" +
             std::to_string(want_pairs.size()) + ", attribute pairs " +
             std::to_string(enumerate_viable_attribute_pairs().size()) + "/" + std::to_string(want_attr.size()));
}

void meta_target_example() {
  const auto a = MetaTarget::parse("101000010000");
  const auto b = MetaTarget::parse("100100010000");
  const bool parsed = a && b;
  const auto got = parsed ? (*a | *b).to_string() : std::string("unparsed");
  report("meta_target_example", got == "101100010000", "OR gives " + got);
}

struct Corpus {
  std::vector<PuzzleRecord> records;
};

// 10^4 puzzles cycling through every regime, split and distractor mode.
Corpus round_trip_corpus() {
  Corpus c;
  c.records.reserve(kRoundTripPuzzles);
  for (std::size_t i = 0; i < kRoundTripPuzzles; ++i) {
    const auto regime = kRegimes[i % kRegimes.size()];
    const bool distracting = (i / kRegimes.size()) % 2 == 0;
    const auto split = kSplits[(i / (2 * kRegimes.size())) % kSplits.size()];
    c.records.push_back(generate_puzzle(1000000 + i, RegimeFilter(regime, split, plan()), distracting));
  }
  return c;
}

void oracle_round_trip(const Corpus& c) {
  std::size_t solver_ok = 0, unique_ok = 0, oracle_ok = 0;
  std::set<std::pair<RegimeId, bool>> covered;
  for (const auto& r : c.records) {
    covered.insert({r.regime, r.distracting});
    const auto res = solve(r.view());
    if (res.answer && *res.answer == r.answer) ++solver_ok;
    if (res.consistent.size() == 1) ++unique_ok;
    const auto ref = oracle::consistent_candidates(r.context, r.candidates);
    if (ref.size() == 1 && ref[0] == r.answer) ++oracle_ok;
  }
  const auto n = c.records.size();
  const bool ok = n >= 10000 && covered.size() == 16 && solver_ok == n && unique_ok == n && oracle_ok == n;
  report("oracle_round_trip", ok,
         std::to_string(n) + " puzzles, " + std::to_string(covered.size()) + " regime/mode cells; solver answer " +
             std::to_string(solver_ok) + ", one consistent " + std::to_string(unique_ok) + ", brute-force oracle " +
             std::to_string(oracle_ok));
}

void chance_level(const Corpus& c) {
  Rng rng(20240601);
  std::size_t correct = 0;
  std::array<double, 8> counts{};
  for (const auto& r : c.records) {
    correct += rng.below(8) == r.answer ? 1 : 0;
    counts[r.answer] += 1;
  }
  const double n = static_cast<double>(c.records.size());
  const double acc = static_cast<double>(correct) / n;
  double chi2 = 0;
  for (double k : counts) chi2 += (k - n / 8) * (k - n / 8) / (n / 8);
  const double p = boost::math::cdf(boost::math::complement(boost::math::chi_squared(7), chi2));
  const bool ok = std::abs(acc - kChance) <= kChanceTolerance && p > kUniformityAlpha;
  char buf[160];
  std::snprintf(buf, sizeof buf, "random accuracy %.4f (target 0.125 +- 0.010), answer chi2 %.2f, p %.4f", acc, chi2,
                p);
  report("chance_level", ok, buf);
}

// Independent statement of each regime's membership predicate.
std::optional<std::string> regime_breach(const PuzzleRecord& r) {
  const bool test = r.split == Split::test;
  const auto [colours, sizes] = used_values(r);
  const auto ts = names(r.structure);
  auto has_dim = [&](const std::string& d) {
    return std::any_of(ts.begin(), ts.end(), [&](const auto& t) { return dim_name(t) == d; });
  };
  auto has = [&](const Triple& t) {
    const auto n = oracle::name_of(t);
    return std::find(ts.begin(), ts.end(), n) != ts.end();
  };
  switch (r.regime) {
    case RegimeId::neutral: return std::nullopt;
    case RegimeId::interpolation:
      for (const auto* vs : {&colours, &sizes})
        for (int v : *vs)
          if ((v % 2 == 1) != test) return "index " + std::to_string(v) + " has the wrong parity";
      return std::nullopt;
    case RegimeId::extrapolation:
      for (const auto* vs : {&colours, &sizes})
        for (int v : *vs)
          if ((v >= 5) != test) return "index " + std::to_string(v) + " in the wrong half";
      if (test && !std::any_of(ts.begin(), ts.end(), [](const auto& t) {
            return t.attribute == "colour" || t.attribute == "size";
          }))
        return "test structure without colour or size";
      return std::nullopt;
    case RegimeId::holdout_shape_colour:
      if (has_dim("shape/colour") != test) return "shape/colour presence wrong";
      return std::nullopt;
    case RegimeId::holdout_line_type:
      if (has_dim("line/type") != test) return "line/type presence wrong";
      return std::nullopt;
    case RegimeId::holdout_triples: {
      std::size_t n = 0;
      for (const auto& t : plan().held_out_triples) n += has(t) ? 1 : 0;
      if (test ? n == 0 : n > 0) return std::to_string(n) + " held-out triples";
      return std::nullopt;
    }
    case RegimeId::holdout_triple_pairs: {
      std::size_t n = 0;
      for (const auto& p : plan().held_out_triple_pairs) n += has(p.first) && has(p.second) ? 1 : 0;
      if (test ? n == 0 : n > 0) return std::to_string(n) + " held-out triple pairs";
      return std::nullopt;
    }
    case RegimeId::holdout_attribute_pairs: {
      std::size_t n = 0;
      for (const auto& p : plan().held_out_attribute_pairs)
        n += has_dim(dim_name(p.first)) && has_dim(dim_name(p.second)) ? 1 : 0;
      if (test ? n == 0 : n > 0) return std::to_string(n) + " held-out attribute pairs";
      return std::nullopt;
    }
  }
  return "unknown regime";
}

void regime_predicates() {
  std::size_t checked = 0, breaches = 0;
  std::string first;
  for (auto regime : kRegimes)
    for (auto split : kSplits) {
      const RegimeFilter f(regime, split, plan());
      for (std::size_t i = 0; i < kRegimeRecords; ++i) {
        const auto r = generate_puzzle(2000000 + i, f, i % 2 == 0);
        ++checked;
        auto why = regime_breach(r);
        ValueUsage u;
        for (const auto& p : r.context) accumulate_usage(p, u);
        for (const auto& p : r.candidates) accumulate_usage(p, u);
        if (!why && !f.admits(r.structure, u)) why = "filter rejects its own record";
        if (why) {
          ++breaches;
          if (first.empty())
            first = std::string(to_string(regime)) + "/" + std::string(to_string(split)) + ": " + *why;
        }
      }
    }
  report("regime_predicates", breaches == 0 && checked == kRegimes.size() * kSplits.size() * kRegimeRecords,
         std::to_string(checked) + " records, " + std::to_string(breaches) + " breaches" +
             (first.empty() ? "" : " (first: " + first + ")"));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void determinism() {
  const auto root = fs::temp_directory_path() / ("pgm_acceptance_" + std::to_string(::getpid()));
  fs::remove_all(root);
  CorpusConfig cfg;
  cfg.sizes = {kDeterminismRecords * 8 / 10, kDeterminismRecords / 10, kDeterminismRecords / 10};
  cfg.shard_size = 250;
  cfg.base_seed = 4242;
  const auto a = write_corpus(cfg, root / "a");
  const auto b = write_corpus(cfg, root / "b");

  // Shard checksums from both manifests, then the files byte for byte.
  std::size_t shards = 0, shard_mismatch = 0;
  for (auto split : kSplits) {
    const auto& sa = a.splits.at(split).shards;
    const auto& sb = b.splits.at(split).shards;
    if (sa.size() != sb.size()) ++shard_mismatch;
    for (std::size_t i = 0; i < std::min(sa.size(), sb.size()); ++i) {
      ++shards;
      if (sa[i].crc32 != sb[i].crc32 || sa[i].sidecar_crc32 != sb[i].sidecar_crc32 ||
          sa[i].record_crc32 != sb[i].record_crc32)
        ++shard_mismatch;
    }
  }
  std::size_t files = 0, file_mismatch = 0;
  for (const auto& entry : fs::directory_iterator(root / "a")) {
    ++files;
    if (slurp(entry.path()) != slurp(root / "b" / entry.path().filename())) ++file_mismatch;
  }

  const Dataset ds(root / "a");
  std::size_t records = 0, pixel_mismatch = 0;
  for (auto split : kSplits)
    ds.for_each(split, [&](std::size_t, const PuzzleRecord& r) {
      ++records;
      auto fresh = r;
      fresh.pixels.clear();
      render_record(fresh);
      if (fresh.pixels != r.pixels) ++pixel_mismatch;
    });
  fs::remove_all(root);
  report("determinism",
         shard_mismatch == 0 && file_mismatch == 0 && pixel_mismatch == 0 && records == kDeterminismRecords,
         std::to_string(records) + " records, " + std::to_string(shards) + " shards with " +
             std::to_string(shard_mismatch) + " checksum differences, " + std::to_string(file_mismatch) + " of " +
             std::to_string(files) + " files differ, " + std::to_string(pixel_mismatch) + " re-render mismatches");
}

void spurious_audit(const Corpus& c) {
  std::size_t matrices = 0, spurious = 0, exempt = 0;
  std::string first;
  for (const auto& r : c.records) {
    if (!r.distracting) continue;
    ++matrices;
    const auto m = r.matrix();
    const auto in_s = names(r.structure);
    for (const auto& t : oracle::all_triples()) {
      if (std::find(in_s.begin(), in_s.end(), t) != in_s.end()) continue;
      const auto g = oracle::matrix_grid(m, t.object, t.attribute);
      if (oracle::constant(g)) {
        ++exempt;
        continue;
      }
      if (oracle::holds(g, t.relation, true) || oracle::holds(g, t.relation, false)) {
        ++spurious;
        if (first.empty()) first = t.relation + " " + dim_name(t) + " in " + to_string(r.structure);
      }
    }
  }
  report("spurious_audit", spurious == 0 && matrices >= kAuditMatrices,
         std::to_string(matrices) + " distracting matrices, " + std::to_string(spurious) +
             " spurious triples, " + std::to_string(exempt) + " constant-grid exemptions" +
             (first.empty() ? "" : " (first: " + first + ")"));
}

void non_distracting_constancy(const Corpus& c) {
  std::size_t matrices = 0, varying = 0;
  std::string first;
  for (const auto& r : c.records) {
    if (r.distracting) continue;
    ++matrices;
    const auto m = r.matrix();
    std::set<std::string> active, exempt;
    for (const auto& t : names(r.structure)) active.insert(dim_name(t));
    // Number and position of shapes move together.
    if (active.count("shape/number")) exempt.insert("shape/position");
    if (active.count("shape/position")) exempt.insert("shape/number");
    for (const auto& [key, relations] : oracle::catalog_table()) {
      if (active.count(key) || exempt.count(key)) continue;
      const auto slash = key.find('/');
      if (!oracle::constant(oracle::matrix_grid(m, key.substr(0, slash), key.substr(slash + 1)))) {
        ++varying;
        if (first.empty()) first = key + " in " + to_string(r.structure);
      }
    }
  }
  report("non_distracting_constancy", varying == 0 && matrices >= kAuditMatrices,
         std::to_string(matrices) + " matrices, " + std::to_string(varying) + " varying non-active attributes" +
             (first.empty() ? "" : " (first: " + first + ")"));
}

}  // namespace

int main() {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  triple_census();
  pair_census();
  meta_target_example();
  const auto corpus = round_trip_corpus();
  oracle_round_trip(corpus);
  chance_level(corpus);
  regime_predicates();
  determinism();
  spurious_audit(corpus);
  non_distracting_constancy(corpus);
  const auto secs = std::chrono::duration<double>(clock::now() - start).count();
  std::printf("%s: %d failing criteria, %.1f s\n", failures == 0 ? "ALL PASS" : "FAILURES", failures, secs);
  return failures == 0 ? 0 : 1;
}
