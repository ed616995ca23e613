#include "pgm/validation.hpp"

#include <algorithm>

#include "pgm/generator.hpp"

namespace pgm {

namespace {

CheckResult check_panels(const PuzzleRecord& r) {
  for (std::size_t i = 0; i < kContextPanels; ++i)
    if (auto why = r.context[i].violation()) return {"panels", false, "context " + std::to_string(i) + ": " + *why};
  for (std::size_t i = 0; i < kCandidatePanels; ++i) {
    if (auto why = r.candidates[i].violation())
      return {"panels", false, "candidate " + std::to_string(i) + ": " + *why};
    for (std::size_t j = 0; j < i; ++j)
      if (r.candidates[i] == r.candidates[j])
        return {"panels", false, "candidates " + std::to_string(j) + " and " + std::to_string(i) + " are equal"};
  }
  if (r.answer >= kCandidatePanels) return {"panels", false, "answer index out of range"};
  if (r.orientations.size() != r.structure.size()) return {"panels", false, "one orientation per triple expected"};
  return {"panels", true, ""};
}

CheckResult check_solve(const PuzzleRecord& r) {
  const auto result = solve(r.view());
  if (result.ambiguous()) {
    std::string which;
    for (auto i : result.consistent) which += (which.empty() ? "" : ",") + std::to_string(i);
    return {"solve", false, "consistent candidates {" + which + "}"};
  }
  if (*result.answer != r.answer)
    return {"solve", false, "solver picked " + std::to_string(*result.answer) + ", record says " +
                                std::to_string(r.answer)};
  return {"solve", true, ""};
}

CheckResult check_meta(const PuzzleRecord& r) {
  const auto expected = encode_meta(r.structure);
  if (expected != r.meta) return {"meta_target", false, "stored " + r.meta.to_string() + ", expected " + expected.to_string()};
  return {"meta_target", true, ""};
}

CheckResult check_regime(const PuzzleRecord& r, const HoldoutPlan& plan) {
  const RegimeFilter filter(r.regime, r.split, plan);
  if (auto why = filter.structure_violation(r.structure)) return {"regime", false, *why};
  ValueUsage usage;
  for (const auto& p : r.context) accumulate_usage(p, usage);
  for (const auto& p : r.candidates) accumulate_usage(p, usage);
  if (auto why = filter.usage_violation(usage)) return {"regime", false, *why};
  return {"regime", true, ""};
}

CheckResult check_structure(const PuzzleRecord& r) {
  const MatrixSpec m{r.structure, r.orientations, r.matrix()};
  if (auto why = matrix_violation(m, r.distracting)) return {"structure", false, *why};
  return {"structure", true, ""};
}

CheckResult check_pixels(const PuzzleRecord& r) {
  if (r.pixels.size() != kRecordPanels) return {"pixels", false, "expected 16 rendered panels"};
  for (std::size_t i = 0; i < kRecordPanels; ++i) {
    const auto& spec = i < kContextPanels ? r.context[i] : r.candidates[i - kContextPanels];
    if (!(render_panel(spec) == r.pixels[i])) return {"pixels", false, "panel " + std::to_string(i) + " differs from its re-rendering"};
  }
  return {"pixels", true, ""};
}

}  // namespace

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

const CheckResult* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

ValidationReport validate_record(const PuzzleRecord& record, const HoldoutPlan& plan) {
  ValidationReport report;
  report.checks.push_back(check_panels(record));
  if (!report.checks.back().passed) return report;
  report.checks.push_back(check_solve(record));
  report.checks.push_back(check_meta(record));
  report.checks.push_back(check_regime(record, plan));
  report.checks.push_back(check_structure(record));
  if (!record.pixels.empty()) report.checks.push_back(check_pixels(record));
  return report;
}

}  // namespace pgm
