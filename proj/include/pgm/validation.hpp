#pragma once

#include <string>
#include <vector>

#include "pgm/record.hpp"
#include "pgm/regimes.hpp"

namespace pgm {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;

  bool passed() const;
  const CheckResult* find(const std::string& name) const;
};

/// Checks, in order: panels (well-formed, distinct candidates), solve,
/// meta_target, regime, structure and, when pixels are present, pixels.
ValidationReport validate_record(const PuzzleRecord& record, const HoldoutPlan& plan);

}  // namespace pgm
