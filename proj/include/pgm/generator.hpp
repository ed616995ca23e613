#pragma once

// Puzzle generation: structure sampling, value realisation, non-active
// attribute filling with spurious-relation rejection, and foil
// construction.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "pgm/core.hpp"
#include "pgm/panel.hpp"
#include "pgm/record.hpp"
#include "pgm/regimes.hpp"
#include "pgm/relations.hpp"
#include "pgm/rng.hpp"
#include "pgm/solver.hpp"

namespace pgm {

inline constexpr char kGeneratorVersion[] = "pgm-generator/1";

struct GeneratorOptions {
  /// Restrict colour and size to indices {0, 3, 6, 9}.
  bool human_readable = false;
  /// Only sample triples on this object.
  std::optional<ObjectType> only_object;
  std::size_t min_relations = 1;
  std::size_t max_relations = Structure::kMaxTriples;
};

/// Value indices usable for each dimension under a filter and options.
class AllowedValues {
 public:
  AllowedValues(const RegimeFilter& filter, const GeneratorOptions& options);
  ValueSet operator()(Dimension d) const { return sets_[dimension_index(d)]; }

 private:
  std::array<ValueSet, kDimensionCount> sets_;
};

/// A completed 3x3 matrix together with its generating structure.
struct MatrixSpec {
  Structure structure;
  std::vector<Orientation> orientations;  // parallel to structure.triples()
  std::array<PanelSpec, 9> panels;
};

/// Throws FilterExhausted when no admitted structure is found.
Structure sample_structure(Rng& rng, const RegimeFilter& filter, const GeneratorOptions& options = {});

/// Realises `s` and fills the non-active attributes. Throws
/// InfeasibleRealization or SpuriousUnavoidable.
MatrixSpec sample_matrix(Rng& rng, const Structure& s, const AllowedValues& allowed, bool distracting);

/// Empty when the matrix is acceptable: every triple of its structure holds
/// with its orientation, no other viable triple holds on the context unless
/// it belongs to the structure and holds on the full matrix, context-constant
/// dimensions stay constant, and in non-distracting mode every non-active
/// attribute (apart from the partner of an active number or position) is
/// constant.
std::optional<std::string> matrix_violation(const MatrixSpec& m, bool distracting);

/// Seven foils: perturbations of the answer that the solver rejects.
/// Throws FoilExhausted.
std::array<PanelSpec, 7> generate_foils(Rng& rng, const MatrixSpec& m, const AllowedValues& allowed);

/// Rejections seen while generating one puzzle.
struct GenerationStats {
  std::size_t structure_retries = 0;  // structures abandoned after a realisation, matrix or foil failure
  std::string last_rejection;
};

/// Deterministic in (seed, filter, distracting, options). Pixels are not
/// rendered. A structure that cannot be realised is replaced by a fresh
/// sample, up to a fixed budget; FilterExhausted and the last realisation
/// error propagate.
PuzzleRecord generate_puzzle(std::uint64_t seed, const RegimeFilter& filter, bool distracting,
                             const GeneratorOptions& options = {}, GenerationStats* stats = nullptr);

/// Dimensions whose values are tied to an active number or position triple.
bool is_tied_partner(const Structure& s, Dimension d);

}  // namespace pgm
