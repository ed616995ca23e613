#include "pgm/relations.hpp"

#include <algorithm>
#include <string>

namespace pgm {

namespace {

constexpr int kRowAttempts = 200;
constexpr int kGridAttempts = 100;

using LineCells = std::array<std::size_t, 3>;

// Distinct cell values of a line, sorted. Used by consistent union.
std::array<ValueSet, 3> collapse(ValueSet a, ValueSet b, ValueSet c, std::size_t& n) {
  std::array<ValueSet, 3> v = {a, b, c};
  std::sort(v.begin(), v.end());
  n = static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin());
  return v;
}

bool same_collapsed(std::array<ValueSet, 3> x, std::size_t nx, std::array<ValueSet, 3> y, std::size_t ny) {
  return nx == ny && std::equal(x.begin(), x.begin() + static_cast<long>(nx), y.begin());
}

std::size_t operand_limit(const Triple& t) {
  if (t.attribute == AttributeType::position) return 4;
  return 2;
}

[[noreturn]] void infeasible(const Triple& t, const std::string& why) {
  throw InfeasibleRealization("cannot realise " + to_string(t) + ": " + why);
}

bool all_lines_identical(const AttributeGrid& g, Orientation o) {
  const auto& ls = grid_lines(o);
  for (std::size_t k = 0; k < 3; ++k)
    if (g[ls[0][k]] != g[ls[1][k]] || g[ls[0][k]] != g[ls[2][k]]) return false;
  return true;
}

Realization realize_progression(const Triple& t, ValueSet allowed, Rng& rng) {
  if (allowed.size() < 3) infeasible(t, "progression needs three ordered values");
  const auto orient = rng.coin() ? Orientation::rows : Orientation::columns;
  for (int attempt = 0; attempt < kGridAttempts; ++attempt) {
    AttributeGrid g{};
    for (const auto& line : grid_lines(orient)) {
      auto values = rng.subset(allowed, 3).values();  // ascending
      for (std::size_t k = 0; k < 3; ++k) g[line[k]] = ValueSet::singleton(values[k]);
    }
    if (!all_lines_identical(g, orient)) return {g, orient};
  }
  infeasible(t, "every sampled progression repeated a single line");
}

Realization realize_union(const Triple& t, ValueSet allowed, Rng& rng) {
  if (allowed.size() < 3) infeasible(t, "consistent union needs three distinct values");
  const auto orient = Orientation::rows;
  for (int attempt = 0; attempt < kGridAttempts; ++attempt) {
    auto values = rng.subset(allowed, 3).values();
    AttributeGrid g{};
    for (const auto& line : grid_lines(orient)) {
      auto perm = values;
      rng.shuffle(perm);
      for (std::size_t k = 0; k < 3; ++k) g[line[k]] = ValueSet::singleton(perm[k]);
    }
    if (!all_lines_identical(g, orient)) return {g, orient};
  }
  infeasible(t, "every sampled union repeated a single permutation");
}

ValueSet apply(RelationType r, ValueSet a, ValueSet b) {
  switch (r) {
    case RelationType::XOR: return a ^ b;
    case RelationType::OR: return a | b;
    case RelationType::AND: return a & b;
    default: return {};
  }
}

Realization realize_set_operation(const Triple& t, ValueSet allowed, Rng& rng, const CellCapacity& cap) {
  if (allowed.size() < 2) infeasible(t, "set relations need two distinct values");
  const auto orient = Orientation::rows;
  const auto limit = operand_limit(t);

  for (int attempt = 0; attempt < kGridAttempts; ++attempt) {
    AttributeGrid g{};
    bool overlap_seen = false;
    for (const auto& line : grid_lines(orient)) {
      bool found = false;
      for (int tries = 0; tries < kRowAttempts && !found; ++tries) {
        auto cap_a = std::min({cap[line[0]], limit, allowed.size()});
        auto cap_b = std::min({cap[line[1]], limit, allowed.size()});
        if (cap_a == 0 || cap_b == 0) break;
        auto a = rng.subset(allowed, static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(cap_a))));
        auto b = rng.subset(allowed, static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(cap_b))));
        auto c = apply(t.relation, a, b);
        if (a == b || c.empty() || c.size() > cap[line[2]]) continue;
        g[line[0]] = a;
        g[line[1]] = b;
        g[line[2]] = c;
        overlap_seen = overlap_seen || !(a & b).empty();
        found = true;
      }
      // Row capacities do not change between grid attempts.
      if (!found) infeasible(t, "no operand sets fit the allowed values and cell capacities");
    }
    // Disjoint operands make XOR and OR coincide; keep one overlapping row.
    if (t.relation != RelationType::AND && !overlap_seen) continue;
    if (all_lines_identical(g, orient)) continue;
    return {g, orient};
  }
  infeasible(t, "no operand sets fit the allowed values and cell capacities");
}

}  // namespace

std::string_view to_string(Orientation o) { return o == Orientation::rows ? "rows" : "columns"; }

std::optional<Orientation> parse_orientation(std::string_view s) {
  if (s == "rows") return Orientation::rows;
  if (s == "columns") return Orientation::columns;
  return std::nullopt;
}

const std::array<std::array<std::size_t, 3>, 3>& grid_lines(Orientation o) {
  static constexpr std::array<std::array<std::size_t, 3>, 3> rows = {{{0, 1, 2}, {3, 4, 5}, {6, 7, 8}}};
  static constexpr std::array<std::array<std::size_t, 3>, 3> cols = {{{0, 3, 6}, {1, 4, 7}, {2, 5, 8}}};
  return o == Orientation::rows ? rows : cols;
}

Realization realize_relation(const Triple& t, const ValueDomain& domain, ValueSet allowed, Rng& rng,
                             const CellCapacity& capacity) {
  if (!is_compatible(t)) infeasible(t, "triple is not viable");
  allowed = allowed & ValueSet::range(domain.cardinality());
  if (std::any_of(capacity.begin(), capacity.end(), [](std::size_t c) { return c == 0; }))
    infeasible(t, "a cell has zero capacity");
  switch (t.relation) {
    case RelationType::progression: return realize_progression(t, allowed, rng);
    case RelationType::consistent_union: return realize_union(t, allowed, rng);
    default: return realize_set_operation(t, allowed, rng, capacity);
  }
}

bool line_holds(RelationType r, ValueSet a, ValueSet b, ValueSet c) {
  switch (r) {
    case RelationType::progression:
      return a.is_singleton() && b.is_singleton() && c.is_singleton() && a.min() < b.min() &&
             b.min() < c.min();
    case RelationType::XOR:
    case RelationType::OR:
    case RelationType::AND: return c == apply(r, a, b);
    case RelationType::consistent_union: return true;  // judged across lines
  }
  return false;
}

bool check_relation(const AttributeGrid& g, const Triple& t, Orientation orient) {
  const auto& ls = grid_lines(orient);
  if (t.relation == RelationType::consistent_union) {
    std::size_t n0 = 0;
    auto ref = collapse(g[ls[0][0]], g[ls[0][1]], g[ls[0][2]], n0);
    for (std::size_t i = 1; i < 3; ++i) {
      std::size_t n = 0;
      auto other = collapse(g[ls[i][0]], g[ls[i][1]], g[ls[i][2]], n);
      if (!same_collapsed(ref, n0, other, n)) return false;
    }
    return true;
  }
  for (const auto& line : ls)
    if (!line_holds(t.relation, g[line[0]], g[line[1]], g[line[2]])) return false;
  return true;
}

bool holds_any_orientation(const AttributeGrid& grid, const Triple& t) {
  return check_relation(grid, t, Orientation::rows) || check_relation(grid, t, Orientation::columns);
}

bool holds_on_context(const AttributeGrid& g, const Triple& t, Orientation orient) {
  const auto& ls = grid_lines(orient);
  const ValueSet x = g[ls[2][0]];
  const ValueSet y = g[ls[2][1]];
  switch (t.relation) {
    case RelationType::progression: {
      for (std::size_t i = 0; i < 2; ++i)
        if (!line_holds(t.relation, g[ls[i][0]], g[ls[i][1]], g[ls[i][2]])) return false;
      const auto top = value_domain(t.dimension()).cardinality() - 1;
      return x.is_singleton() && y.is_singleton() && x.min() < y.min() && y.min() < top;
    }
    case RelationType::XOR:
    case RelationType::OR:
    case RelationType::AND:
      // The missing cell is always completable by the operation itself.
      for (std::size_t i = 0; i < 2; ++i)
        if (!line_holds(t.relation, g[ls[i][0]], g[ls[i][1]], g[ls[i][2]])) return false;
      return true;
    case RelationType::consistent_union: {
      std::size_t n0 = 0, n1 = 0;
      auto ref = collapse(g[ls[0][0]], g[ls[0][1]], g[ls[0][2]], n0);
      auto second = collapse(g[ls[1][0]], g[ls[1][1]], g[ls[1][2]], n1);
      if (!same_collapsed(ref, n0, second, n1)) return false;
      auto in_ref = [&](ValueSet v) {
        return std::find(ref.begin(), ref.begin() + static_cast<long>(n0), v) != ref.begin() + static_cast<long>(n0);
      };
      if (!in_ref(x) || !in_ref(y)) return false;
      const std::size_t covered = (x == y) ? 1 : 2;
      return n0 - covered <= 1;
    }
  }
  return false;
}

bool is_constant(const AttributeGrid& g) {
  return std::all_of(g.begin(), g.end(), [&](ValueSet v) { return v == g[0]; });
}

bool is_constant_context(const AttributeGrid& g) {
  return std::all_of(g.begin(), g.begin() + 8, [&](ValueSet v) { return v == g[0]; });
}

}  // namespace pgm
