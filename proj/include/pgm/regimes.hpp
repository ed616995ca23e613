#pragma once

// The eight generalisation regimes: structure- and value-level predicates
// separating training content from test content, plus the deterministic
// selection of held-out triples, triple pairs and attribute pairs.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pgm/core.hpp"
#include "pgm/value_set.hpp"

namespace pgm {

enum class RegimeId : std::uint8_t {
  neutral,
  interpolation,
  extrapolation,
  holdout_shape_colour,
  holdout_line_type,
  holdout_triples,
  holdout_triple_pairs,
  holdout_attribute_pairs,
};

inline constexpr std::array<RegimeId, 8> kRegimes = {
    RegimeId::neutral,         RegimeId::interpolation,        RegimeId::extrapolation,
    RegimeId::holdout_shape_colour, RegimeId::holdout_line_type, RegimeId::holdout_triples,
    RegimeId::holdout_triple_pairs, RegimeId::holdout_attribute_pairs};

enum class Split : std::uint8_t { train, validation, test };
inline constexpr std::array<Split, 3> kSplits = {Split::train, Split::validation, Split::test};

std::string_view to_string(RegimeId r);
std::string_view to_string(Split s);
std::optional<RegimeId> parse_regime(std::string_view s);
std::optional<Split> parse_split(std::string_view s);

struct HoldoutPlan {
  std::vector<Triple> held_out_triples;             // 7, one per dimension
  std::vector<TriplePair> held_out_triple_pairs;    // 40 of the 400
  std::vector<DimensionPair> held_out_attribute_pairs;  // 4 of the 20
  std::uint64_t selection_seed = 0;

  friend bool operator==(const HoldoutPlan&, const HoldoutPlan&) = default;
};

HoldoutPlan build_holdout_plan(std::uint64_t selection_seed);

/// Colour and size indices appearing anywhere in a record.
struct ValueUsage {
  ValueSet colours;
  ValueSet sizes;
};

/// Membership predicate of one (regime, split). Validation follows train.
class RegimeFilter {
 public:
  RegimeFilter(RegimeId regime, Split split, HoldoutPlan plan);

  RegimeId regime() const { return regime_; }
  Split split() const { return split_; }
  const HoldoutPlan& plan() const { return plan_; }
  bool is_test() const { return split_ == Split::test; }

  /// Empty when the structure is admitted, otherwise the reason.
  std::optional<std::string> structure_violation(const Structure& s) const;
  std::optional<std::string> usage_violation(const ValueUsage& u) const;
  bool admits(const Structure& s) const { return !structure_violation(s); }
  bool admits(const Structure& s, const ValueUsage& u) const {
    return !structure_violation(s) && !usage_violation(u);
  }

  /// Triples that may appear at all in admitted structures.
  bool triple_allowed(const Triple& t) const;
  std::size_t min_triples() const;
  /// Seeds for constructive structure sampling: each admitted structure of
  /// a test split contains one of these. Empty when no requirement exists.
  const std::vector<std::vector<Triple>>& cores() const { return cores_; }
  /// Value indices permitted for a dimension.
  ValueSet allowed(Dimension d) const;

 private:
  RegimeId regime_;
  Split split_;
  HoldoutPlan plan_;
  std::vector<std::vector<Triple>> cores_;
};

RegimeFilter regime_predicate(RegimeId regime, Split split, const HoldoutPlan& plan);

/// Interpolation/extrapolation restriction of an ordered attribute; every
/// other case yields the full domain.
ValueSet allowed_value_indices(RegimeId regime, Split split, const ValueDomain& domain);

}  // namespace pgm
