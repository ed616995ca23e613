#pragma once

// Reference implementations written directly from the catalog and relation
// definitions, deliberately naive (strings, std::set) and sharing no code
// with the library beyond the plain data types.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "pgm/core.hpp"
#include "pgm/panel.hpp"
#include "pgm/relations.hpp"

namespace oracle {

// Relations allowed per object-attribute combination, as listed in the
// dataset description.
inline const std::map<std::string, std::vector<std::string>>& catalog_table() {
  static const std::map<std::string, std::vector<std::string>> table = {
      {"shape/size", {"progression", "XOR", "OR", "AND", "consistent_union"}},
      {"shape/colour", {"progression", "XOR", "OR", "AND", "consistent_union"}},
      {"shape/number", {"progression", "consistent_union"}},
      {"shape/position", {"XOR", "OR", "AND"}},
      {"shape/type", {"progression", "XOR", "OR", "AND", "consistent_union"}},
      {"line/colour", {"progression", "XOR", "OR", "AND", "consistent_union"}},
      {"line/type", {"XOR", "OR", "AND", "consistent_union"}},
  };
  return table;
}

struct TripleName {
  std::string relation, object, attribute;
  bool operator<(const TripleName& o) const {
    return std::tie(relation, object, attribute) < std::tie(o.relation, o.object, o.attribute);
  }
  bool operator==(const TripleName& o) const = default;
};

inline std::vector<TripleName> all_triples() {
  std::vector<TripleName> out;
  for (const auto& [key, relations] : catalog_table()) {
    const auto slash = key.find('/');
    for (const auto& r : relations) out.push_back({r, key.substr(0, slash), key.substr(slash + 1)});
  }
  return out;
}

inline bool tied(const TripleName& a, const TripleName& b) {
  auto np = [](const std::string& x, const std::string& y) { return x == "number" && y == "position"; };
  return a.object == "shape" && b.object == "shape" &&
         (np(a.attribute, b.attribute) || np(b.attribute, a.attribute));
}

// Every unordered pair of distinct triples that may share a matrix.
inline std::set<std::pair<TripleName, TripleName>> all_triple_pairs() {
  const auto ts = all_triples();
  std::set<std::pair<TripleName, TripleName>> out;
  for (const auto& a : ts)
    for (const auto& b : ts) {
      if (a == b || tied(a, b)) continue;
      out.insert(a < b ? std::make_pair(a, b) : std::make_pair(b, a));
    }
  return out;
}

inline std::set<std::pair<std::string, std::string>> all_attribute_pairs() {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& [a, b] : all_triple_pairs()) {
    const auto x = a.object + "/" + a.attribute;
    const auto y = b.object + "/" + b.attribute;
    if (x == y) continue;
    out.insert(x < y ? std::make_pair(x, y) : std::make_pair(y, x));
  }
  return out;
}

inline TripleName name_of(const pgm::Triple& t) {
  return {std::string(pgm::to_string(t.relation)), std::string(pgm::to_string(t.object)),
          std::string(pgm::to_string(t.attribute))};
}

// --- relation semantics over std::set cells ---

using Cell = std::set<int>;
using Grid = std::vector<Cell>;  // 9 cells, row-major

inline Grid to_grid(const pgm::AttributeGrid& g) {
  Grid out(9);
  for (int i = 0; i < 9; ++i)
    for (int v = 0; v < 16; ++v)
      if (g[static_cast<std::size_t>(i)].contains(static_cast<std::size_t>(v))) out[static_cast<std::size_t>(i)].insert(v);
  return out;
}

inline std::vector<std::vector<int>> lines(bool rows) {
  if (rows) return {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}};
  return {{0, 3, 6}, {1, 4, 7}, {2, 5, 8}};
}

inline Cell set_op(const std::string& r, const Cell& a, const Cell& b) {
  Cell out;
  if (r == "OR") std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  if (r == "AND") std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  if (r == "XOR")
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
  return out;
}

inline bool holds(const Grid& g, const std::string& r, bool rows) {
  const auto ls = lines(rows);
  if (r == "consistent_union") {
    std::vector<std::set<Cell>> per_line;
    for (const auto& l : ls) {
      std::set<Cell> distinct;
      for (int c : l) distinct.insert(g[static_cast<std::size_t>(c)]);
      per_line.push_back(distinct);
    }
    return per_line[0] == per_line[1] && per_line[1] == per_line[2];
  }
  for (const auto& l : ls) {
    const auto& a = g[static_cast<std::size_t>(l[0])];
    const auto& b = g[static_cast<std::size_t>(l[1])];
    const auto& c = g[static_cast<std::size_t>(l[2])];
    if (r == "progression") {
      if (a.size() != 1 || b.size() != 1 || c.size() != 1) return false;
      if (!(*a.begin() < *b.begin() && *b.begin() < *c.begin())) return false;
    } else if (c != set_op(r, a, b)) {
      return false;
    }
  }
  return true;
}

inline bool holds(const pgm::AttributeGrid& g, const pgm::Triple& t, pgm::Orientation o) {
  return holds(to_grid(g), std::string(pgm::to_string(t.relation)), o == pgm::Orientation::rows);
}

inline bool constant(const Grid& g) {
  return std::all_of(g.begin(), g.end(), [&](const Cell& c) { return c == g[0]; });
}

// --- attribute extraction ---

inline Cell attribute_values(const pgm::PanelSpec& p, const std::string& object, const std::string& attribute) {
  Cell out;
  if (object == "shape") {
    if (attribute == "number") return {static_cast<int>(p.shapes.size())};
    for (const auto& s : p.shapes) {
      if (attribute == "size") out.insert(s.size);
      if (attribute == "colour") out.insert(s.colour);
      if (attribute == "position") out.insert(s.slot);
      if (attribute == "type") out.insert(s.type);
    }
    return out;
  }
  for (const auto& l : p.lines) {
    if (attribute == "colour") out.insert(l.colour);
    if (attribute == "type") out.insert(l.type);
  }
  return out;
}

template <typename Panels>
Grid matrix_grid(const Panels& nine, const std::string& object, const std::string& attribute) {
  Grid g;
  for (const auto& p : nine) g.push_back(attribute_values(p, object, attribute));
  return g;
}

// --- meta-target ---

// Element order of the 12-bit label.
inline const std::vector<std::string>& meta_elements() {
  static const std::vector<std::string> e = {"shape", "line",    "colour", "number", "position", "size",
                                             "type",  "progression", "XOR", "OR",     "AND",      "consistent_union"};
  return e;
}

inline std::string meta_string(const std::vector<TripleName>& triples) {
  std::string bits(12, '0');
  const auto& e = meta_elements();
  for (const auto& t : triples)
    for (std::size_t i = 0; i < e.size(); ++i)
      if (e[i] == t.relation || e[i] == t.object || e[i] == t.attribute) bits[i] = '1';
  return bits;
}

// --- solver ---

// Domain size of an object/attribute combination.
inline int domain_size(const std::string& object, const std::string& attribute) {
  if (attribute == "position") return 9;
  if (attribute == "type") return object == "shape" ? 7 : 6;
  return 10;
}

// Whether some value of the missing cell completes the relation.
inline bool completable(Grid g, const std::string& relation, bool rows, int n) {
  for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
    Cell c;
    for (int v = 0; v < n; ++v)
      if (bits & (1u << v)) c.insert(v);
    g[8] = c;
    if (holds(g, relation, rows)) return true;
  }
  return false;
}

// Indices of candidates consistent with everything the context exhibits:
// context-constant attributes keep their value, and every relation the
// context can be completed to must hold with the candidate in place.
template <typename Panels>
std::vector<std::size_t> consistent_candidates(const Panels& context, const Panels& candidates) {
  struct Requirement {
    std::string object, attribute, relation;
    bool rows;
  };
  std::vector<Requirement> required;
  std::vector<std::pair<std::string, std::string>> constants;
  for (const auto& [key, relations] : catalog_table()) {
    const auto slash = key.find('/');
    const auto object = key.substr(0, slash), attribute = key.substr(slash + 1);
    Grid g;
    for (const auto& p : context) g.push_back(attribute_values(p, object, attribute));
    if (std::all_of(g.begin(), g.end(), [&](const Cell& c) { return c == g[0]; })) {
      constants.push_back({object, attribute});
      continue;
    }
    g.emplace_back();
    for (const auto& r : relations)
      for (bool rows : {true, false})
        if (completable(g, r, rows, domain_size(object, attribute))) required.push_back({object, attribute, r, rows});
  }
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    bool ok = true;
    for (const auto& [object, attribute] : constants)
      ok = ok && attribute_values(candidates[k], object, attribute) == attribute_values(context[0], object, attribute);
    for (const auto& q : required) {
      Grid g;
      for (const auto& p : context) g.push_back(attribute_values(p, q.object, q.attribute));
      g.push_back(attribute_values(candidates[k], q.object, q.attribute));
      ok = ok && holds(g, q.relation, q.rows);
    }
    if (ok) out.push_back(k);
  }
  return out;
}

}  // namespace oracle
