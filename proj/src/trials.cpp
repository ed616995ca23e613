#include "pgm/trials.hpp"

#include <httplib.h>

#include <cstdio>
#include <numeric>

#include "pgm/rng.hpp"

namespace pgm::trials {

namespace {

using nlohmann::json;

Reply error(int status, const std::string& message) { return {status, {{"error", message}}}; }

std::string session_id(std::uint64_t order_seed, std::uint64_t n) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(splitmix64(order_seed ^ (n + 1))));
  return buf;
}

std::string png_base64(const PanelImage& p) { return base64_encode(encode_png(to_gray(p))); }

}  // namespace

std::string base64_encode(std::string_view in) {
  static constexpr char kAlphabet[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
  std::string out;
  out.reserve((in.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 3 <= in.size(); i += 3) {
    const auto v = (static_cast<std::uint32_t>(static_cast<std::uint8_t>(in[i])) << 16) |
                   (static_cast<std::uint32_t>(static_cast<std::uint8_t>(in[i + 1])) << 8) |
                   static_cast<std::uint8_t>(in[i + 2]);
    for (int k = 3; k >= 0; --k) out.push_back(kAlphabet[(v >> (6 * k)) & 63]);
  }
  if (const auto rest = in.size() - i; rest > 0) {
    std::uint32_t v = static_cast<std::uint32_t>(static_cast<std::uint8_t>(in[i])) << 16;
    if (rest == 2) v |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(in[i + 1])) << 8;
    out.push_back(kAlphabet[(v >> 18) & 63]);
    out.push_back(kAlphabet[(v >> 12) & 63]);
    out.push_back(rest == 2 ? kAlphabet[(v >> 6) & 63] : '=');
    out.push_back('=');
  }
  return out;
}

TrialsService::TrialsService(std::shared_ptr<const Dataset> dataset, TrialsConfig config)
    : dataset_(std::move(dataset)), config_(std::move(config)) {
  if (dataset_->size(config_.split) == 0)
    throw Error("dataset has no " + std::string(to_string(config_.split)) + " records to serve");
  if (config_.puzzles_per_session == 0) throw Error("sessions need at least one puzzle");
  if (!config_.log_path.empty()) {
    log_ = std::make_unique<std::ofstream>(config_.log_path, std::ios::app);
    if (!*log_) throw Error("cannot open response log " + config_.log_path.string());
  }
}

void TrialsService::append_log(const json& line) {
  if (!log_) return;
  *log_ << line.dump() << '\n';
  log_->flush();
}

Reply TrialsService::create_session() {
  std::lock_guard lock(mutex_);
  const auto n = sessions_created_++;
  const auto id = session_id(config_.order_seed, n);
  Session s;
  s.order_seed = splitmix64(config_.order_seed + n);
  const auto total = dataset_->size(config_.split);
  std::vector<std::size_t> order(total);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(s.order_seed);
  rng.shuffle(order);
  order.resize(std::min(total, config_.puzzles_per_session));
  s.records = order;
  append_log({{"event", "session"}, {"session", id}, {"order_seed", s.order_seed}, {"records", s.records}});
  sessions_.emplace(id, std::move(s));
  return {200,
          {{"session", id},
           {"puzzles", order.size()},
           {"candidate_count", kCandidatePanels},
           {"split", std::string(to_string(config_.split))},
           {"regime", std::string(to_string(dataset_->manifest().config.regime))},
           {"feedback", config_.reveal_answer ? "answer" : "correctness"}}};
}

Reply TrialsService::next_puzzle(const std::string& id) {
  std::size_t record = 0, puzzle_id = 0, total = 0;
  {
    std::lock_guard lock(mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) return error(404, "unknown session");
    const auto& s = it->second;
    total = s.records.size();
    puzzle_id = s.responses.size();
    if (puzzle_id >= total) return {200, {{"session", id}, {"done", true}, {"answered", total}}};
    record = s.records[puzzle_id];
  }
  const auto rec = dataset_->read(config_.split, record);
  json context = json::array(), candidates = json::array();
  for (std::size_t i = 0; i < kContextPanels; ++i) context.push_back(png_base64(rec.pixels[i]));
  for (std::size_t i = 0; i < kCandidatePanels; ++i) candidates.push_back(png_base64(rec.pixels[kContextPanels + i]));
  return {200,
          {{"session", id},
           {"done", false},
           {"puzzle_id", puzzle_id},
           {"position", puzzle_id + 1},
           {"total", total},
           {"image_format", "png"},
           {"context", context},
           {"candidates", candidates},
           {"candidate_count", kCandidatePanels}}};
}

Reply TrialsService::answer(const std::string& body) {
  json req;
  try {
    req = json::parse(body);
  } catch (const json::exception&) {
    return error(400, "body is not JSON");
  }
  if (!req.is_object() || !req.contains("session") || !req["session"].is_string() || !req.contains("puzzle_id") ||
      !req["puzzle_id"].is_number_integer() || !req.contains("choice") || !req["choice"].is_number_integer())
    return error(400, "expected {session, puzzle_id, choice, latency_ms}");
  double latency = 0.0;
  if (req.contains("latency_ms")) {
    if (!req["latency_ms"].is_number() || req["latency_ms"].get<double>() < 0) return error(400, "bad latency_ms");
    latency = req["latency_ms"].get<double>();
  }
  const auto id = req["session"].get<std::string>();
  const auto puzzle_id = req["puzzle_id"].get<long long>();
  const auto choice = req["choice"].get<long long>();
  if (choice < 0 || choice >= static_cast<long long>(kCandidatePanels)) return error(400, "choice must be 0..7");

  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) return error(404, "unknown session");
  auto& s = it->second;
  const auto next = static_cast<long long>(s.responses.size());
  if (puzzle_id < 0 || puzzle_id >= static_cast<long long>(s.records.size())) return error(400, "no such puzzle");
  if (puzzle_id < next) return error(409, "puzzle already answered");
  if (puzzle_id > next) return error(400, "puzzle not served yet");

  const auto record = s.records[static_cast<std::size_t>(puzzle_id)];
  const auto rec = dataset_->read(config_.split, record);
  const bool correct = choice == rec.answer;
  s.responses.push_back({static_cast<std::size_t>(puzzle_id), record, static_cast<int>(choice), correct, latency});
  append_log({{"event", "answer"},
              {"session", id},
              {"puzzle_id", puzzle_id},
              {"record", record},
              {"choice", choice},
              {"correct", correct},
              {"latency_ms", latency}});
  auto out = summary(id, s);
  out["correct"] = correct;
  out["puzzle_id"] = puzzle_id;
  if (config_.reveal_answer) out["answer"] = rec.answer;
  return {200, out};
}

json TrialsService::summary(const std::string& id, const Session& s) const {
  std::size_t correct = 0;
  for (const auto& r : s.responses) correct += r.correct ? 1 : 0;
  const auto answered = s.responses.size();
  return {{"session", id},
          {"answered", answered},
          {"correct_count", correct},
          {"accuracy", answered == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(answered)},
          {"total", s.records.size()},
          {"done", answered == s.records.size()}};
}

Reply TrialsService::results(const std::string& id) {
  std::lock_guard lock(mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) return error(404, "unknown session");
  auto out = summary(id, it->second);
  json responses = json::array();
  for (const auto& r : it->second.responses)
    responses.push_back(
        {{"puzzle_id", r.puzzle_id}, {"choice", r.choice}, {"correct", r.correct}, {"latency_ms", r.latency_ms}});
  out["responses"] = responses;
  return {200, out};
}

std::map<std::string, ReplayedSession> replay_log(std::istream& log, const Dataset* dataset, Split split) {
  std::map<std::string, ReplayedSession> out;
  std::string line;
  std::uint64_t offset = 0;
  while (std::getline(log, line)) {
    const auto at = offset;
    offset += line.size() + 1;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw FormatError(std::string("response log: ") + e.what(), at);
    }
    const auto event = j.value("event", "");
    if (event == "session") {
      out[j.at("session").get<std::string>()];
    } else if (event == "answer") {
      auto& s = out[j.at("session").get<std::string>()];
      bool correct = j.at("correct").get<bool>();
      if (dataset) correct = dataset->read(split, j.at("record").get<std::size_t>()).answer == j.at("choice").get<int>();
      ++s.answered;
      s.correct += correct ? 1 : 0;
    }
  }
  return out;
}

struct HttpServer::Impl {
  explicit Impl(TrialsService& s) : service(s) {}
  TrialsService& service;
  httplib::Server server;
};

namespace {

void send(httplib::Response& res, const Reply& r) {
  res.status = r.status;
  res.set_content(r.body.dump(), "application/json");
}

}  // namespace

HttpServer::HttpServer(TrialsService& service, std::optional<std::filesystem::path> static_dir)
    : impl_(std::make_unique<Impl>(service)) {
  auto& srv = impl_->server;
  auto& svc = impl_->service;
  srv.Get("/api/session", [&svc](const httplib::Request&, httplib::Response& res) { send(res, svc.create_session()); });
  srv.Get("/api/puzzle", [&svc](const httplib::Request& req, httplib::Response& res) {
    if (!req.has_param("session")) return send(res, error(400, "missing session parameter"));
    send(res, svc.next_puzzle(req.get_param_value("session")));
  });
  srv.Post("/api/answer",
           [&svc](const httplib::Request& req, httplib::Response& res) { send(res, svc.answer(req.body)); });
  srv.Get("/api/results", [&svc](const httplib::Request& req, httplib::Response& res) {
    if (!req.has_param("session")) return send(res, error(400, "missing session parameter"));
    send(res, svc.results(req.get_param_value("session")));
  });
  srv.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
    std::string what = "internal error";
    try {
      std::rethrow_exception(ep);
    } catch (const std::exception& e) {
      what = e.what();
    } catch (...) {
    }
    send(res, error(500, what));
  });
  if (static_dir && !srv.set_mount_point("/", static_dir->string()))
    throw Error("static directory " + static_dir->string() + " does not exist");
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  if (!impl_->server.bind_to_port(host, port)) return -1;
  return port;
}

void HttpServer::run() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace pgm::trials
