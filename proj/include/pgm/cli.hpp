#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pgm/dataset.hpp"

namespace pgm::cli {

/// Settings shared by `generate` and `serve`.
struct RunConfig {
  CorpusConfig corpus;
  std::filesystem::path out;
  std::string host = "127.0.0.1";
  int port = 8080;

  /// Empty when usable, otherwise the first problem. Creates `out` to
  /// check that it is writable.
  std::optional<std::string> violation() const;
};

/// Entry point of the `pgm` tool. Argument 0 is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace pgm::cli
