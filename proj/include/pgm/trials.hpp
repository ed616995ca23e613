#pragma once

// Human-trials service: hands out puzzles from a corpus split as rendered
// images, records answers and keeps an append-only JSONL response log.
//
// Log lines:
//   {"event":"session","session":ID,"order_seed":S,"records":[i0,i1,...]}
//   {"event":"answer","session":ID,"puzzle_id":K,"record":I,"choice":C,
//    "correct":B,"latency_ms":L}

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pgm/dataset.hpp"

namespace pgm::trials {

struct TrialsConfig {
  Split split = Split::test;
  std::size_t puzzles_per_session = 20;
  std::uint64_t order_seed = 1;
  /// Include the correct index in answer feedback.
  bool reveal_answer = false;
  /// Append-only response log; no log when empty.
  std::filesystem::path log_path;
};

struct Reply {
  int status = 200;
  nlohmann::json body;
};

class TrialsService {
 public:
  TrialsService(std::shared_ptr<const Dataset> dataset, TrialsConfig config);

  Reply create_session();
  Reply next_puzzle(const std::string& session);
  Reply answer(const std::string& request_body);
  Reply results(const std::string& session);

  const TrialsConfig& config() const { return config_; }

 private:
  struct Response {
    std::size_t puzzle_id;
    std::size_t record;
    int choice;
    bool correct;
    double latency_ms;
  };
  struct Session {
    std::uint64_t order_seed;
    std::vector<std::size_t> records;
    std::vector<Response> responses;
  };

  void append_log(const nlohmann::json& line);
  nlohmann::json summary(const std::string& id, const Session& s) const;

  std::shared_ptr<const Dataset> dataset_;
  TrialsConfig config_;
  std::mutex mutex_;
  std::uint64_t sessions_created_ = 0;
  std::map<std::string, Session> sessions_;
  std::unique_ptr<std::ofstream> log_;
};

struct ReplayedSession {
  std::size_t answered = 0;
  std::size_t correct = 0;
  double accuracy() const { return answered == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(answered); }
};

/// Recomputes per-session accuracy from a response log. When a dataset is
/// given, correctness is re-derived from the stored answers instead of the
/// logged flag.
std::map<std::string, ReplayedSession> replay_log(std::istream& log, const Dataset* dataset = nullptr,
                                                   Split split = Split::test);

std::string base64_encode(std::string_view bytes);

/// HTTP front end over TrialsService. Serves static files from
/// `static_dir` when given.
class HttpServer {
 public:
  HttpServer(TrialsService& service, std::optional<std::filesystem::path> static_dir = std::nullopt);
  ~HttpServer();

  /// Binds to host:port (port 0 picks a free one); returns the bound port.
  int bind(const std::string& host, int port);
  /// Blocks until stop().
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace pgm::trials
