#include "pgm/generator.hpp"

#include <algorithm>
#include <string>

#include "pgm/meta_target.hpp"

namespace pgm {

namespace {

constexpr int kStructureAttempts = 100;
constexpr int kMatrixAttempts = 200;
constexpr int kFoilAttempts = 100;
constexpr std::size_t kFoils = 7;
constexpr int kPuzzleAttempts = 16;

constexpr Dimension kShapeSize{ObjectType::shape, AttributeType::size};
constexpr Dimension kShapeColour{ObjectType::shape, AttributeType::colour};
constexpr Dimension kShapeNumber{ObjectType::shape, AttributeType::number};
constexpr Dimension kShapePosition{ObjectType::shape, AttributeType::position};
constexpr Dimension kShapeType{ObjectType::shape, AttributeType::type};
constexpr Dimension kLineColour{ObjectType::line, AttributeType::colour};
constexpr Dimension kLineType{ObjectType::line, AttributeType::type};

constexpr std::array<Dimension, 3> kShapeAttributes = {kShapeSize, kShapeColour, kShapeType};

const ValueSet kAllSlots = ValueSet::range(kMaxShapes);
const ValueSet kAllLineTypes = ValueSet::range(kLineTypes);

bool object_ok(const Triple& t, const GeneratorOptions& o) { return !o.only_object || t.object == *o.only_object; }

std::size_t between(Rng& rng, std::size_t lo, std::size_t hi) {
  return static_cast<std::size_t>(rng.between(static_cast<std::int64_t>(lo), static_cast<std::int64_t>(hi)));
}

// `n` values covering every member of `set` at least once, in random order.
std::vector<std::uint8_t> spread(Rng& rng, ValueSet set, std::size_t n) {
  const auto vals = set.values();
  std::vector<std::uint8_t> out;
  for (auto v : vals) out.push_back(static_cast<std::uint8_t>(v));
  while (out.size() < n) out.push_back(static_cast<std::uint8_t>(vals[rng.below(vals.size())]));
  rng.shuffle(out);
  return out;
}

std::size_t min_values(RelationType r) {
  return (r == RelationType::progression || r == RelationType::consistent_union) ? 3 : 2;
}

class MatrixBuilder {
 public:
  MatrixBuilder(Rng& rng, const Structure& s, const AllowedValues& allowed, bool distracting)
      : rng_(rng), s_(s), allowed_(allowed), distracting_(distracting), orientations_(s.size()) {}

  MatrixSpec build() {
    realize_active();
    MatrixSpec m{s_, orientations_, {}};
    if (s_.has_object(ObjectType::shape)) fill_shapes(m.panels);
    if (s_.has_object(ObjectType::line)) fill_lines(m.panels);
    for (auto& p : m.panels) p.canonicalize();
    return m;
  }

 private:
  bool active(Dimension d) const { return s_.has_dimension(d); }
  const AttributeGrid& grid(Dimension d) const { return grids_[dimension_index(d)]; }

  void realize(Dimension d, const CellCapacity& cap) {
    const Triple* t = s_.find(d);
    auto r = realize_relation(*t, value_domain(d), allowed_(d), rng_, cap);
    grids_[dimension_index(d)] = r.grid;
    const auto idx = static_cast<std::size_t>(t - s_.triples().data());
    orientations_[idx] = r.orientation;
  }

  // Count-bearing dimensions first, so the others can respect the number of
  // objects available per panel.
  void realize_active() {
    if (active(kShapeNumber)) {
      realize(kShapeNumber, kUnboundedCapacity);
      for (std::size_t i = 0; i < 9; ++i) shape_cap_[i] = grid(kShapeNumber)[i].min();
    } else if (active(kShapePosition)) {
      realize(kShapePosition, kUnboundedCapacity);
      for (std::size_t i = 0; i < 9; ++i) shape_cap_[i] = grid(kShapePosition)[i].size();
    }
    if (active(kLineType)) {
      realize(kLineType, kUnboundedCapacity);
      for (std::size_t i = 0; i < 9; ++i) line_cap_[i] = grid(kLineType)[i].size();
    }
    for (auto d : kShapeAttributes)
      if (active(d)) realize(d, shape_cap_);
    if (active(kLineColour)) realize(kLineColour, line_cap_);
  }

  // Values of a non-active shape or line attribute on each panel.
  std::array<ValueSet, 9> filler(Dimension d, const std::array<std::size_t, 9>& counts) {
    std::array<ValueSet, 9> out{};
    const auto pool = allowed_(d);
    if (!distracting_) {
      out.fill(ValueSet::singleton(rng_.pick(pool)));
      return out;
    }
    for (std::size_t i = 0; i < 9; ++i) {
      const auto k = between(rng_, 1, std::min<std::size_t>({counts[i], 2, pool.size()}));
      out[i] = rng_.subset(pool, k);
    }
    return out;
  }

  void fill_shapes(std::array<PanelSpec, 9>& panels) {
    std::array<std::size_t, 9> req{};
    for (std::size_t i = 0; i < 9; ++i) {
      req[i] = 1;
      for (auto d : kShapeAttributes)
        if (active(d)) req[i] = std::max(req[i], grid(d)[i].size());
    }

    std::array<ValueSet, 9> slots{};
    if (active(kShapePosition)) {
      slots = grid(kShapePosition);
    } else if (active(kShapeNumber)) {
      for (std::size_t i = 0; i < 9; ++i) slots[i] = rng_.subset(kAllSlots, shape_cap_[i]);
    } else if (distracting_) {
      for (std::size_t i = 0; i < 9; ++i)
        slots[i] = rng_.subset(kAllSlots, between(rng_, req[i], std::min(kMaxShapes, req[i] + 3)));
    } else {
      const auto lo = *std::max_element(req.begin(), req.end());
      slots.fill(rng_.subset(kAllSlots, between(rng_, lo, std::min(kMaxShapes, lo + 2))));
    }
    std::array<std::size_t, 9> counts{};
    for (std::size_t i = 0; i < 9; ++i) counts[i] = slots[i].size();

    std::array<std::array<ValueSet, 9>, 3> sets{};
    for (std::size_t a = 0; a < kShapeAttributes.size(); ++a) {
      const auto d = kShapeAttributes[a];
      sets[a] = active(d) ? grid(d) : filler(d, counts);
    }
    for (std::size_t i = 0; i < 9; ++i) {
      const auto size = spread(rng_, sets[0][i], counts[i]);
      const auto colour = spread(rng_, sets[1][i], counts[i]);
      const auto type = spread(rng_, sets[2][i], counts[i]);
      const auto where = slots[i].values();
      for (std::size_t k = 0; k < counts[i]; ++k)
        panels[i].shapes.push_back({static_cast<std::uint8_t>(where[k]), type[k], size[k], colour[k]});
    }
  }

  void fill_lines(std::array<PanelSpec, 9>& panels) {
    std::array<std::size_t, 9> req{};
    for (std::size_t i = 0; i < 9; ++i) req[i] = active(kLineColour) ? grid(kLineColour)[i].size() : 1;

    std::array<ValueSet, 9> types{};
    if (active(kLineType)) {
      types = grid(kLineType);
    } else if (distracting_) {
      for (std::size_t i = 0; i < 9; ++i) {
        const auto hi = std::min(kLineTypes, std::max<std::size_t>(req[i], 3));
        types[i] = rng_.subset(kAllLineTypes, between(rng_, req[i], hi));
      }
    } else {
      const auto lo = *std::max_element(req.begin(), req.end());
      types.fill(rng_.subset(kAllLineTypes, between(rng_, lo, std::min(kLineTypes, std::max<std::size_t>(lo, 2)))));
    }
    std::array<std::size_t, 9> counts{};
    for (std::size_t i = 0; i < 9; ++i) counts[i] = types[i].size();

    const auto colours = active(kLineColour) ? grid(kLineColour) : filler(kLineColour, counts);
    for (std::size_t i = 0; i < 9; ++i) {
      const auto colour = spread(rng_, colours[i], counts[i]);
      const auto kinds = types[i].values();
      for (std::size_t k = 0; k < counts[i]; ++k)
        panels[i].lines.push_back({static_cast<std::uint8_t>(kinds[k]), colour[k]});
    }
  }

  Rng& rng_;
  const Structure& s_;
  const AllowedValues& allowed_;
  bool distracting_;
  std::vector<Orientation> orientations_;
  std::array<AttributeGrid, kDimensionCount> grids_{};
  CellCapacity shape_cap_ = kUnboundedCapacity;
  CellCapacity line_cap_ = kUnboundedCapacity;
};

std::uint8_t other_value(Rng& rng, ValueSet pool, std::uint8_t current) {
  pool.erase(current);
  if (pool.empty()) return current;
  return static_cast<std::uint8_t>(rng.pick(pool));
}

ValueSet occupied(const PanelSpec& p) { return panel_value(p, kShapePosition); }

void perturb(Rng& rng, PanelSpec& p, Dimension d, const AllowedValues& allowed) {
  if (d.object == ObjectType::shape) {
    if (p.shapes.empty()) return;
    auto& s = p.shapes[rng.below(p.shapes.size())];
    const auto free = kAllSlots - occupied(p);
    switch (d.attribute) {
      case AttributeType::size: s.size = other_value(rng, allowed(d), s.size); break;
      case AttributeType::colour: s.colour = other_value(rng, allowed(d), s.colour); break;
      case AttributeType::type: s.type = other_value(rng, allowed(d), s.type); break;
      case AttributeType::position:
        if (!free.empty()) s.slot = static_cast<std::uint8_t>(rng.pick(free));
        break;
      case AttributeType::number: {
        // Jump to another count; progressions tolerate small steps at the end.
        const auto target = rng.pick(allowed(d) - ValueSet::singleton(p.shapes.size()));
        const ShapeSpec model = s;
        while (p.shapes.size() > target) p.shapes.erase(p.shapes.begin() + static_cast<long>(rng.below(p.shapes.size())));
        while (p.shapes.size() < target) {
          ShapeSpec copy = model;
          copy.slot = static_cast<std::uint8_t>(rng.pick(kAllSlots - occupied(p)));
          p.shapes.push_back(copy);
        }
        break;
      }
    }
    return;
  }
  if (p.lines.empty()) return;
  const auto j = rng.below(p.lines.size());
  if (d.attribute == AttributeType::colour) {
    p.lines[j].colour = other_value(rng, allowed(d), p.lines[j].colour);
    return;
  }
  const auto unused = kAllLineTypes - panel_value(p, kLineType);
  switch (rng.below(3)) {
    case 0:
      if (!unused.empty()) p.lines[j].type = static_cast<std::uint8_t>(rng.pick(unused));
      break;
    case 1:
      if (!unused.empty()) p.lines.push_back({static_cast<std::uint8_t>(rng.pick(unused)), p.lines[j].colour});
      break;
    default:
      if (p.lines.size() > 1) p.lines.erase(p.lines.begin() + static_cast<long>(j));
      break;
  }
}

}  // namespace

AllowedValues::AllowedValues(const RegimeFilter& filter, const GeneratorOptions& options) {
  for (std::size_t i = 0; i < kDimensionCount; ++i) {
    const auto d = kDimensions[i];
    auto v = filter.allowed(d);
    if (d == kShapeNumber) v.erase(0);  // a panel always shows at least one shape
    const bool ordered = d.attribute == AttributeType::colour || d.attribute == AttributeType::size;
    if (options.human_readable && ordered) v = v & ValueSet{0, 3, 6, 9};
    sets_[i] = v;
  }
}

bool is_tied_partner(const Structure& s, Dimension d) {
  return (d == kShapePosition && s.has_dimension(kShapeNumber)) ||
         (d == kShapeNumber && s.has_dimension(kShapePosition));
}

Structure sample_structure(Rng& rng, const RegimeFilter& filter, const GeneratorOptions& options) {
  std::vector<Triple> pool;
  for (const auto& t : enumerate_viable_triples())
    if (filter.triple_allowed(t) && object_ok(t, options)) pool.push_back(t);

  // Number and position share a matrix only one at a time.
  ValueSet dims;
  for (const auto& t : pool) dims.insert(dimension_index(t.dimension()));
  std::size_t usable = dims.size();
  if (dims.contains(dimension_index(kShapeNumber)) && dims.contains(dimension_index(kShapePosition))) --usable;

  const auto lo = std::max(filter.min_triples(), options.min_relations);
  const auto hi = std::min({options.max_relations, Structure::kMaxTriples, usable});
  const std::string where = std::string(to_string(filter.regime())) + "/" + std::string(to_string(filter.split()));
  if (lo > hi)
    throw FilterExhausted(where + ": no structure size in [" + std::to_string(lo) + ", " + std::to_string(hi) +
                          "] is reachable");

  std::vector<std::vector<Triple>> cores;
  for (const auto& c : filter.cores())
    if (std::all_of(c.begin(), c.end(), [&](const Triple& t) { return object_ok(t, options); })) cores.push_back(c);
  if (!filter.cores().empty() && cores.empty())
    throw FilterExhausted(where + ": every required triple lies outside the permitted objects");

  for (int attempt = 0; attempt < kStructureAttempts; ++attempt) {
    const auto k = between(rng, lo, hi);
    std::vector<Triple> chosen = cores.empty() ? std::vector<Triple>{} : rng.pick(cores);
    if (chosen.size() > k) continue;
    while (chosen.size() < k) {
      std::vector<Triple> options_left;
      for (const auto& t : pool) {
        bool ok = std::none_of(chosen.begin(), chosen.end(), [&](const Triple& c) {
          return c.dimension() == t.dimension() || is_number_position_cross(c, t);
        });
        if (ok) options_left.push_back(t);
      }
      if (options_left.empty()) break;
      chosen.push_back(rng.pick(options_left));
    }
    if (chosen.size() != k || Structure::violation(chosen)) continue;
    Structure s(std::move(chosen));
    if (filter.structure_violation(s)) continue;
    return s;
  }
  throw FilterExhausted(where + ": no admitted structure after " + std::to_string(kStructureAttempts) +
                        " attempts");
}

std::optional<std::string> matrix_violation(const MatrixSpec& m, bool distracting) {
  const auto& s = m.structure;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& t = s.triples()[i];
    if (!check_relation(extract_grid(m.panels, t.dimension()), t, m.orientations[i]))
      return to_string(t) + " does not hold along " + std::string(to_string(m.orientations[i]));
  }
  for (auto d : kDimensions) {
    const auto g = extract_grid(m.panels, d);
    if (is_constant_context(g)) {
      if (!is_constant(g)) return to_string(d) + " is constant on the context but not on the answer";
      continue;
    }
    for (const auto& t : enumerate_viable_triples()) {
      if (!(t.dimension() == d)) continue;
      for (auto o : {Orientation::rows, Orientation::columns})
        if (holds_on_context(g, t, o) && !(s.contains(t) && check_relation(g, t, o)))
          return "spurious " + to_string(t) + " along " + std::string(to_string(o));
    }
    if (!distracting && !s.has_dimension(d) && !is_tied_partner(s, d) && !is_constant(g))
      return "non-active " + to_string(d) + " varies";
  }
  return std::nullopt;
}

MatrixSpec sample_matrix(Rng& rng, const Structure& s, const AllowedValues& allowed, bool distracting) {
  for (const auto& t : s.triples())
    if (allowed(t.dimension()).size() < min_values(t.relation))
      throw InfeasibleRealization("cannot realise " + to_string(t) + ": only " +
                                  std::to_string(allowed(t.dimension()).size()) + " values allowed");
  std::string last;
  int infeasible = 0;
  for (int attempt = 0; attempt < kMatrixAttempts; ++attempt) {
    try {
      auto m = MatrixBuilder(rng, s, allowed, distracting).build();
      auto why = matrix_violation(m, distracting);
      if (!why) return m;
      last = *why;
    } catch (const InfeasibleRealization& e) {
      last = e.what();
      ++infeasible;
    }
  }
  if (infeasible == kMatrixAttempts) throw InfeasibleRealization(last);
  throw SpuriousUnavoidable("no acceptable matrix for " + to_string(s) + " after " +
                            std::to_string(kMatrixAttempts) + " attempts; last rejection: " + last);
}

std::array<PanelSpec, 7> generate_foils(Rng& rng, const MatrixSpec& m, const AllowedValues& allowed) {
  const std::span<const PanelSpec> context(m.panels.data(), 8);
  const auto& answer = m.panels[8];
  const auto induced = induce_structure(context);

  std::vector<Dimension> present;
  for (auto d : kDimensions) {
    const bool has = d.object == ObjectType::shape ? !answer.shapes.empty() : !answer.lines.empty();
    if (has) present.push_back(d);
  }
  std::vector<Dimension> active;
  for (const auto& t : m.structure.triples()) active.push_back(t.dimension());

  std::array<PanelSpec, 7> foils;
  for (std::size_t f = 0; f < kFoils; ++f) {
    bool found = false;
    for (int attempt = 0; attempt < kFoilAttempts && !found; ++attempt) {
      PanelSpec p = answer;
      const auto edits = 1 + rng.below(2);
      for (std::size_t e = 0; e < edits; ++e) {
        const auto& from = rng.coin() ? active : present;
        perturb(rng, p, rng.pick(from), allowed);
      }
      p.canonicalize();
      if (p == answer || p.violation()) continue;
      if (std::find(foils.begin(), foils.begin() + static_cast<long>(f), p) != foils.begin() + static_cast<long>(f))
        continue;
      if (score_candidate(induced, context, p).consistent) continue;
      foils[f] = std::move(p);
      found = true;
    }
    if (!found)
      throw FoilExhausted("could not build foil " + std::to_string(f + 1) + " for " + to_string(m.structure));
  }
  return foils;
}

PuzzleRecord generate_puzzle(std::uint64_t seed, const RegimeFilter& filter, bool distracting,
                             const GeneratorOptions& options, GenerationStats* stats) {
  const std::uint64_t tag = (static_cast<std::uint64_t>(filter.regime()) << 16) |
                            (static_cast<std::uint64_t>(filter.split()) << 8) | (distracting ? 1u : 0u);
  Rng rng(splitmix64(seed ^ splitmix64(tag)));
  const AllowedValues allowed(filter, options);
  GenerationStats local;
  auto& st = stats ? *stats : local;
  std::optional<MatrixSpec> m;
  std::array<PanelSpec, 7> foils;
  for (int attempt = 0;; ++attempt) {
    auto structure = sample_structure(rng, filter, options);
    try {
      m = sample_matrix(rng, structure, allowed, distracting);
      foils = generate_foils(rng, *m, allowed);
      break;
    } catch (const Error& e) {
      if (attempt + 1 == kPuzzleAttempts) throw;
      ++st.structure_retries;
      st.last_rejection = e.what();
    }
  }
  const auto answer = static_cast<std::uint8_t>(rng.below(kCandidatePanels));

  PuzzleRecord rec{.seed = seed,
                   .regime = filter.regime(),
                   .split = filter.split(),
                   .distracting = distracting,
                   .structure = m->structure,
                   .orientations = m->orientations};
  std::copy_n(m->panels.begin(), kContextPanels, rec.context.begin());
  for (std::size_t i = 0, f = 0; i < kCandidatePanels; ++i)
    rec.candidates[i] = i == answer ? m->panels[8] : foils[f++];
  rec.answer = answer;
  rec.meta = encode_meta(rec.structure);
  return rec;
}

}  // namespace pgm
