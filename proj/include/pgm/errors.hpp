#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pgm {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidStructure : public Error {
 public:
  using Error::Error;
};

/// The allowed value indices cannot instantiate a relation.
class InfeasibleRealization : public Error {
 public:
  using Error::Error;
};

/// Structure sampling found nothing the regime filter admits.
class FilterExhausted : public Error {
 public:
  using Error::Error;
};

/// Non-active values kept inducing an extra relation.
class SpuriousUnavoidable : public Error {
 public:
  using Error::Error;
};

/// Could not find seven distinct, solver-rejected foils.
class FoilExhausted : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::uint64_t offset)
      : Error(what + " (at byte offset " + std::to_string(offset) + ")"), offset_(offset) {}

  std::uint64_t offset() const { return offset_; }

 private:
  std::uint64_t offset_;
};

}  // namespace pgm
