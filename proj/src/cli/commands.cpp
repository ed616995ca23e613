#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <fstream>
#include <iostream>
#include <map>

#include "pgm/cli.hpp"
#include "pgm/record_format.hpp"
#include "pgm/trials.hpp"
#include "pgm/validation.hpp"

namespace pgm::cli {

namespace {

using nlohmann::json;

std::optional<Split> split_arg(const std::string& s, std::ostream& err) {
  auto split = parse_split(s);
  if (!split) err << "unknown split '" << s << "' (train, validation, test)\n";
  return split;
}

std::vector<Split> splits_to_visit(const Dataset& ds, const std::string& which) {
  if (which == "all") return {kSplits.begin(), kSplits.end()};
  auto s = parse_split(which);
  if (!s || ds.size(*s) == 0) return {};
  return {*s};
}

int cmd_generate(const RunConfig& cfg, bool as_json, std::ostream& out, std::ostream& err) {
  if (auto why = cfg.violation()) {
    err << "error: " << *why << '\n';
    return 2;
  }
  try {
    auto manifest = write_corpus(cfg.corpus, cfg.out, &err);
    if (as_json) {
      json summary = json::object();
      for (const auto& [split, info] : manifest.splits)
        summary[to_string(split)] = {{"records", info.count},
                                     {"shards", info.shards.size()},
                                     {"structure_retries", info.structure_retries},
                                     {"seed_retries", info.seed_retries}};
      out << json{{"out", cfg.out.string()}, {"splits", summary}}.dump(2) << '\n';
    } else {
      for (const auto& [split, info] : manifest.splits)
        out << to_string(split) << ": " << info.count << " records in " << info.shards.size() << " shards ("
            << info.structure_retries << " structure retries, " << info.seed_retries << " seed fallbacks)\n";
      out << "manifest: " << (cfg.out / kManifestName).string() << '\n';
    }
    return 0;
  } catch (const FilterExhausted& e) {
    err << "error: FilterExhausted: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return 1;
}

int cmd_validate(const std::string& path, const std::string& which, bool as_json, std::ostream& out,
                 std::ostream& err) {
  try {
    Dataset ds(path);
    const auto issues = verify_checksums(ds);
    std::map<std::string, std::size_t> failures;
    std::size_t checked = 0, failed = 0;
    json failed_records = json::array();
    std::vector<std::string> read_errors;
    for (auto split : splits_to_visit(ds, which)) {
      // An unreadable record ends the walk of its split; it is reported
      // alongside the checksum issues.
      try {
        ds.for_each(split, [&](std::size_t i, const PuzzleRecord& r) {
          ++checked;
          const auto report = validate_record(r, ds.manifest().plan);
          if (report.passed()) return;
          ++failed;
          for (const auto& c : report.checks) {
            if (c.passed) continue;
            ++failures[c.name];
            if (failed_records.size() < 50)
              failed_records.push_back({{"split", std::string(to_string(split))}, {"index", i}, {"check", c.name}, {"detail", c.detail}});
          }
        });
      } catch (const FormatError& e) {
        read_errors.push_back(std::string(to_string(split)) + ": " + e.what());
      }
    }
    const bool ok = issues.empty() && read_errors.empty() && failed == 0 && checked > 0;
    if (as_json) {
      json iss = json::array();
      for (const auto& i : issues) iss.push_back({{"file", i.file}, {"record", i.record}, {"message", i.message}});
      out << json{{"passed", ok}, {"records", checked}, {"failed", failed}, {"failures_by_check", failures},
                  {"integrity_issues", iss}, {"read_errors", read_errors}, {"failed_records", failed_records}}
                 .dump(2)
          << '\n';
    } else {
      for (const auto& i : issues) out << "integrity: " << i.file << " record " << i.record << ": " << i.message << '\n';
      for (const auto& e : read_errors) out << "unreadable: " << e << '\n';
      for (const auto& f : failed_records)
        out << "record " << f["split"].get<std::string>() << "/" << f["index"] << ": " << f["check"].get<std::string>()
            << ": " << f["detail"].get<std::string>() << '\n';
      out << checked << " records checked, " << failed << " failed, " << issues.size() << " integrity issues: "
          << (ok ? "PASS" : "FAIL") << '\n';
    }
    return ok ? 0 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int cmd_stats(const std::string& path, const std::string& which, bool as_json, std::ostream& out, std::ostream& err) {
  try {
    Dataset ds(path);
    CorpusStats stats;
    for (auto split : splits_to_visit(ds, which)) ds.for_each(split, [&](std::size_t, const PuzzleRecord& r) { stats.add(r); });
    if (as_json)
      out << stats.to_json().dump(2) << '\n';
    else
      out << stats.to_text();
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int cmd_render(const std::string& path, const std::string& split_name, std::size_t index, const std::string& file,
               std::optional<std::size_t> panel, std::ostream& out, std::ostream& err) {
  auto split = split_arg(split_name, err);
  if (!split) return 2;
  try {
    Dataset ds(path);
    const auto rec = ds.read(*split, index);
    if (panel) {
      if (*panel >= kRecordPanels) {
        err << "error: panel must be 0..15\n";
        return 2;
      }
      write_image(to_gray(rec.pixels[*panel]), file);
    } else {
      write_image(render_puzzle_sheet(rec), file);
    }
    out << file << '\n';
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int cmd_solve(const std::string& path, const std::string& split_name, std::size_t index, bool as_json,
              std::ostream& out, std::ostream& err) {
  auto split = split_arg(split_name, err);
  if (!split) return 2;
  try {
    Dataset ds(path);
    const auto rec = ds.read(*split, index);
    const auto result = solve(rec.view());
    const auto induced = induce_structure(rec.context);
    if (as_json) {
      json relations = json::array();
      for (const auto& r : induced.satisfied)
        relations.push_back({{"triple", structure_to_json(Structure({r.triple}))[0]},
                             {"orientation", std::string(to_string(r.orientation))}});
      out << json{{"answer", result.answer ? json(*result.answer) : json(nullptr)},
                  {"consistent", result.consistent},
                  {"stored_answer", rec.answer},
                  {"induced", relations}}
                 .dump(2)
          << '\n';
    } else {
      for (const auto& r : induced.satisfied) out << "induced " << to_string(r.triple) << " along " << to_string(r.orientation) << '\n';
      if (result.answer)
        out << "answer: " << *result.answer << " (stored " << int(rec.answer) << ")\n";
      else
        out << "ambiguous: " << result.consistent.size() << " consistent candidates\n";
    }
    return result.answer ? 0 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

std::atomic<trials::HttpServer*> g_server{nullptr};

extern "C" void on_signal(int) {
  if (auto* s = g_server.load()) s->stop();
}

int cmd_serve(const RunConfig& cfg, const trials::TrialsConfig& tcfg, const std::string& static_dir,
              std::ostream& out, std::ostream& err) {
  if (cfg.port < 0 || cfg.port > 65535) {
    err << "error: port must be 0..65535\n";
    return 2;
  }
  try {
    auto ds = std::make_shared<Dataset>(cfg.out);
    trials::TrialsService service(ds, tcfg);
    std::optional<std::filesystem::path> dir;
    if (!static_dir.empty()) dir = static_dir;
    trials::HttpServer server(service, dir);
    const int port = server.bind(cfg.host, cfg.port);
    if (port < 0) {
      err << "error: cannot bind " << cfg.host << ":" << cfg.port << '\n';
      return 1;
    }
    out << "serving " << cfg.out.string() << " (" << to_string(tcfg.split) << ") on http://" << cfg.host << ":"
        << port << std::endl;
    g_server = &server;
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    server.run();
    g_server = nullptr;
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace

std::optional<std::string> RunConfig::violation() const {
  for (auto n : corpus.sizes)
    if (n < 1) return "split sizes must be at least 1";
  if (corpus.shard_size < 1) return "shard size must be at least 1";
  if (corpus.jobs < 1) return "jobs must be at least 1";
  if (port < 0 || port > 65535) return "port must be 0..65535";
  const auto& o = corpus.options;
  if (o.min_relations < 1 || o.max_relations > Structure::kMaxTriples || o.min_relations > o.max_relations)
    return "relation counts must satisfy 1 <= min <= max <= 4";
  if (out.empty()) return "output directory required";
  std::error_code ec;
  std::filesystem::create_directories(out, ec);
  if (ec) return "cannot create " + out.string() + ": " + ec.message();
  const auto probe = out / ".write-test";
  {
    std::ofstream f(probe);
    if (!f) return out.string() + " is not writable";
  }
  std::filesystem::remove(probe, ec);
  return std::nullopt;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Procedurally generated matrix puzzles: generate, validate, inspect and serve corpora", "pgm"};
  app.require_subcommand(1);

  RunConfig cfg;
  bool as_json = false;
  std::string regime = "neutral", objects = "both";
  bool no_distracting = false;

  auto* gen = app.add_subcommand("generate", "Generate a corpus");
  gen->add_option("--regime", regime, "Generalisation regime")
      ->check(CLI::IsMember({"neutral", "interpolation", "extrapolation", "holdout_shape_colour", "holdout_line_type",
                             "holdout_triples", "holdout_triple_pairs", "holdout_attribute_pairs"}));
  gen->add_option("--out", cfg.out, "Output directory")->required();
  gen->add_option("--train", cfg.corpus.sizes[0], "Training records")->capture_default_str();
  gen->add_option("--val", cfg.corpus.sizes[1], "Validation records")->capture_default_str();
  gen->add_option("--test", cfg.corpus.sizes[2], "Test records")->capture_default_str();
  gen->add_flag("--no-distracting", no_distracting, "Hold non-active attributes constant");
  gen->add_option("--seed", cfg.corpus.base_seed, "Base seed")->capture_default_str();
  gen->add_option("--selection-seed", cfg.corpus.selection_seed, "Seed of the holdout selection")->capture_default_str();
  gen->add_option("--jobs", cfg.corpus.jobs, "Generator threads")->capture_default_str();
  gen->add_option("--shard-size", cfg.corpus.shard_size, "Records per shard")->capture_default_str();
  gen->add_flag("--human-readable", cfg.corpus.options.human_readable, "Restrict colour and size to 4 values");
  gen->add_option("--objects", objects, "Objects carrying relations")->check(CLI::IsMember({"both", "shape", "line"}));
  gen->add_option("--min-relations", cfg.corpus.options.min_relations, "Minimum triples per structure");
  gen->add_option("--max-relations", cfg.corpus.options.max_relations, "Maximum triples per structure");
  gen->add_flag("--json", as_json, "Machine-readable summary");

  std::string path, split_name = "test", which = "all", image;
  std::size_t index = 0;
  std::optional<std::size_t> panel;

  auto* val = app.add_subcommand("validate", "Check checksums and re-validate every record");
  val->add_option("path", path, "Corpus directory")->required();
  val->add_option("--split", which, "Split or 'all'");
  val->add_flag("--json", as_json, "Machine-readable report");

  auto* st = app.add_subcommand("stats", "Corpus statistics");
  st->add_option("path", path, "Corpus directory")->required();
  st->add_option("--split", which, "Split or 'all'");
  st->add_flag("--json", as_json, "Machine-readable report");

  auto* ren = app.add_subcommand("render", "Render a record as a puzzle sheet (or one panel)");
  ren->add_option("path", path, "Corpus directory")->required();
  ren->add_option("--split", split_name, "Split")->capture_default_str();
  ren->add_option("--index", index, "Record index")->capture_default_str();
  ren->add_option("--panel", panel, "Only this panel (0-7 context, 8-15 candidates)");
  ren->add_option("--out", image, "Output .png or .pgm")->required();

  auto* sol = app.add_subcommand("solve", "Solve a record symbolically");
  sol->add_option("path", path, "Corpus directory")->required();
  sol->add_option("--split", split_name, "Split")->capture_default_str();
  sol->add_option("--index", index, "Record index")->capture_default_str();
  sol->add_flag("--json", as_json, "Machine-readable output");

  trials::TrialsConfig tcfg;
  std::string static_dir, serve_split = "test", log_path;
  auto* srv = app.add_subcommand("serve", "Serve a corpus split for human trials");
  srv->add_option("path", cfg.out, "Corpus directory")->required();
  srv->add_option("--host", cfg.host, "Bind address")->capture_default_str();
  srv->add_option("--port", cfg.port, "Port (0 picks a free one)")->capture_default_str();
  srv->add_option("--split", serve_split, "Split to draw puzzles from")->capture_default_str();
  srv->add_option("--puzzles", tcfg.puzzles_per_session, "Puzzles per session")->capture_default_str();
  srv->add_option("--order-seed", tcfg.order_seed, "Seed of per-session puzzle order")->capture_default_str();
  srv->add_option("--log", log_path, "Append-only response log (JSONL)");
  srv->add_option("--static-dir", static_dir, "Directory of trials UI assets");
  srv->add_flag("--reveal-answer", tcfg.reveal_answer, "Include the correct index in feedback");

  std::vector<std::string> rest(args.rbegin(), args.rend());
  if (!rest.empty()) rest.pop_back();  // program name
  try {
    app.parse(rest);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  if (*gen) {
    cfg.corpus.regime = *parse_regime(regime);
    cfg.corpus.distracting = !no_distracting;
    if (objects != "both") cfg.corpus.options.only_object = parse_object(objects);
    return cmd_generate(cfg, as_json, out, err);
  }
  if (*val) return cmd_validate(path, which, as_json, out, err);
  if (*st) return cmd_stats(path, which, as_json, out, err);
  if (*ren) return cmd_render(path, split_name, index, image, panel, out, err);
  if (*sol) return cmd_solve(path, split_name, index, as_json, out, err);
  if (*srv) {
    auto split = split_arg(serve_split, err);
    if (!split) return 2;
    tcfg.split = *split;
    tcfg.log_path = log_path;
    return cmd_serve(cfg, tcfg, static_dir, out, err);
  }
  return 2;
}

}  // namespace pgm::cli
