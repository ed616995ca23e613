#include "pgm/regimes.hpp"

#include <algorithm>

#include "pgm/rng.hpp"

namespace pgm {

namespace {

constexpr std::size_t kHeldOutTriplePairs = 40;
constexpr std::size_t kHeldOutAttributePairs = 4;

bool is_ordered(AttributeType a) { return a == AttributeType::colour || a == AttributeType::size; }

const Dimension kShapeColour{ObjectType::shape, AttributeType::colour};
const Dimension kLineType{ObjectType::line, AttributeType::type};

bool contains_pair(const Structure& s, const TriplePair& p) { return s.contains(p.first) && s.contains(p.second); }

bool covers_pair(const Structure& s, const DimensionPair& p) {
  return s.has_dimension(p.first) && s.has_dimension(p.second);
}

std::size_t pair_index(const std::vector<TriplePair>& all, const TriplePair& p) {
  return static_cast<std::size_t>(std::find(all.begin(), all.end(), p) - all.begin());
}

}  // namespace

std::string_view to_string(RegimeId r) {
  switch (r) {
    case RegimeId::neutral: return "neutral";
    case RegimeId::interpolation: return "interpolation";
    case RegimeId::extrapolation: return "extrapolation";
    case RegimeId::holdout_shape_colour: return "holdout_shape_colour";
    case RegimeId::holdout_line_type: return "holdout_line_type";
    case RegimeId::holdout_triples: return "holdout_triples";
    case RegimeId::holdout_triple_pairs: return "holdout_triple_pairs";
    case RegimeId::holdout_attribute_pairs: return "holdout_attribute_pairs";
  }
  return "?";
}

std::string_view to_string(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::validation: return "validation";
    case Split::test: return "test";
  }
  return "?";
}

std::optional<RegimeId> parse_regime(std::string_view s) {
  for (auto r : kRegimes)
    if (to_string(r) == s) return r;
  return std::nullopt;
}

std::optional<Split> parse_split(std::string_view s) {
  for (auto x : kSplits)
    if (to_string(x) == s) return x;
  if (s == "val") return Split::validation;
  return std::nullopt;
}

HoldoutPlan build_holdout_plan(std::uint64_t selection_seed) {
  Rng rng(splitmix64(selection_seed));
  HoldoutPlan plan;
  plan.selection_seed = selection_seed;

  for (auto d : kDimensions) {
    std::vector<Triple> options;
    for (const auto& t : enumerate_viable_triples())
      if (t.dimension() == d) options.push_back(t);
    plan.held_out_triples.push_back(rng.pick(options));
  }

  const auto& all_pairs = enumerate_viable_triple_pairs();
  auto pairs = all_pairs;
  rng.shuffle(pairs);
  pairs.resize(kHeldOutTriplePairs);
  std::sort(pairs.begin(), pairs.end(), [&](const TriplePair& a, const TriplePair& b) {
    return pair_index(all_pairs, a) < pair_index(all_pairs, b);
  });
  plan.held_out_triple_pairs = std::move(pairs);

  const auto& all_attr = enumerate_viable_attribute_pairs();
  std::vector<std::size_t> order(all_attr.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  rng.shuffle(order);
  order.resize(kHeldOutAttributePairs);
  std::sort(order.begin(), order.end());
  for (auto i : order) plan.held_out_attribute_pairs.push_back(all_attr[i]);
  return plan;
}

RegimeFilter::RegimeFilter(RegimeId regime, Split split, HoldoutPlan plan)
    : regime_(regime), split_(split), plan_(std::move(plan)) {
  if (split_ != Split::test) return;
  const auto& triples = enumerate_viable_triples();
  switch (regime_) {
    case RegimeId::extrapolation:
      for (const auto& t : triples)
        if (is_ordered(t.attribute)) cores_.push_back({t});
      break;
    case RegimeId::holdout_shape_colour:
      for (const auto& t : triples)
        if (t.dimension() == kShapeColour) cores_.push_back({t});
      break;
    case RegimeId::holdout_line_type:
      for (const auto& t : triples)
        if (t.dimension() == kLineType) cores_.push_back({t});
      break;
    case RegimeId::holdout_triples:
      for (const auto& t : plan_.held_out_triples) cores_.push_back({t});
      break;
    case RegimeId::holdout_triple_pairs:
      // Same-dimension pairs are viable but never generated (one triple per
      // dimension), so they cannot seed a structure.
      for (const auto& p : plan_.held_out_triple_pairs)
        if (!(p.first.dimension() == p.second.dimension())) cores_.push_back({p.first, p.second});
      break;
    case RegimeId::holdout_attribute_pairs:
      for (const auto& dp : plan_.held_out_attribute_pairs)
        for (const auto& a : triples)
          for (const auto& b : triples)
            if (a.dimension() == dp.first && b.dimension() == dp.second) cores_.push_back({a, b});
      break;
    default: break;
  }
}

std::size_t RegimeFilter::min_triples() const {
  return (regime_ == RegimeId::holdout_triple_pairs || regime_ == RegimeId::holdout_attribute_pairs) ? 2 : 1;
}

bool RegimeFilter::triple_allowed(const Triple& t) const {
  if (is_test()) return true;
  switch (regime_) {
    case RegimeId::holdout_shape_colour: return !(t.dimension() == kShapeColour);
    case RegimeId::holdout_line_type: return !(t.dimension() == kLineType);
    case RegimeId::holdout_triples:
      return std::find(plan_.held_out_triples.begin(), plan_.held_out_triples.end(), t) ==
             plan_.held_out_triples.end();
    default: return true;
  }
}

std::optional<std::string> RegimeFilter::structure_violation(const Structure& s) const {
  if (s.size() < min_triples()) return "regime requires at least two triples";
  for (const auto& t : s.triples())
    if (!triple_allowed(t)) return "training structure contains held-out triple " + to_string(t);

  const bool test = is_test();
  switch (regime_) {
    case RegimeId::neutral:
    case RegimeId::interpolation: return std::nullopt;
    case RegimeId::extrapolation: {
      if (!test) return std::nullopt;
      bool ordered = std::any_of(s.triples().begin(), s.triples().end(),
                                 [](const Triple& t) { return is_ordered(t.attribute); });
      if (!ordered) return "extrapolation test structure lacks a colour or size triple";
      return std::nullopt;
    }
    case RegimeId::holdout_shape_colour:
      if (test && !s.has_dimension(kShapeColour)) return "test structure lacks a shape-colour triple";
      return std::nullopt;
    case RegimeId::holdout_line_type:
      if (test && !s.has_dimension(kLineType)) return "test structure lacks a line-type triple";
      return std::nullopt;
    case RegimeId::holdout_triples: {
      if (!test) return std::nullopt;
      bool any = std::any_of(plan_.held_out_triples.begin(), plan_.held_out_triples.end(),
                             [&](const Triple& t) { return s.contains(t); });
      if (!any) return "test structure contains no held-out triple";
      return std::nullopt;
    }
    case RegimeId::holdout_triple_pairs: {
      bool any = std::any_of(plan_.held_out_triple_pairs.begin(), plan_.held_out_triple_pairs.end(),
                             [&](const TriplePair& p) { return contains_pair(s, p); });
      if (test && !any) return "test structure contains no held-out triple pair";
      if (!test && any) return "training structure contains a held-out triple pair";
      return std::nullopt;
    }
    case RegimeId::holdout_attribute_pairs: {
      bool any = std::any_of(plan_.held_out_attribute_pairs.begin(), plan_.held_out_attribute_pairs.end(),
                             [&](const DimensionPair& p) { return covers_pair(s, p); });
      if (test && !any) return "test structure covers no held-out attribute pair";
      if (!test && any) return "training structure covers a held-out attribute pair";
      return std::nullopt;
    }
  }
  return std::nullopt;
}

std::optional<std::string> RegimeFilter::usage_violation(const ValueUsage& u) const {
  const auto colours = allowed(kShapeColour);
  const auto sizes = allowed({ObjectType::shape, AttributeType::size});
  if (!u.colours.subset_of(colours))
    return "colour indices " + u.colours.to_string() + " outside " + colours.to_string();
  if (!u.sizes.subset_of(sizes)) return "size indices " + u.sizes.to_string() + " outside " + sizes.to_string();
  return std::nullopt;
}

ValueSet RegimeFilter::allowed(Dimension d) const {
  return allowed_value_indices(regime_, split_, value_domain(d));
}

RegimeFilter regime_predicate(RegimeId regime, Split split, const HoldoutPlan& plan) {
  return RegimeFilter(regime, split, plan);
}

ValueSet allowed_value_indices(RegimeId regime, Split split, const ValueDomain& domain) {
  const auto n = domain.cardinality();
  const auto full = ValueSet::range(n);
  if (!is_ordered(domain.dimension.attribute)) return full;
  const bool test = split == Split::test;
  ValueSet out;
  switch (regime) {
    case RegimeId::interpolation:
      for (std::size_t i = test ? 1 : 0; i < n; i += 2) out.insert(i);
      return out;
    case RegimeId::extrapolation:
      for (std::size_t i = test ? n / 2 : 0; i < (test ? n : n / 2); ++i) out.insert(i);
      return out;
    default: return full;
  }
}

}  // namespace pgm
