#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "glpwb/kripke.hpp"
#include "glpwb/ordinal.hpp"

namespace glpwb {

struct ModelRecipe;
using RecipeRef = std::shared_ptr<const ModelRecipe>;

/// Construction tree for an ordinal model over [1, lambda]:
///   Single: one node, lambda = 1
///   Sum: concatenated blocks, lambda = sum of the parts
///   GLIter: lambda = kappa * w, with kappa the total length of the root's
///           subtree blocks; the map repeats the blocks with period kappa and
///           sends lambda to the root
///   Lift: lambda = w^exponent; the map evaluates the inner recipe at the
///         interval rank of the argument (re-indexed to [1, inner lambda])
///   DProd: lambda = kappa * w^(lambda of the 1-sheet recipe); copies of the
///          subtree blocks sit at successor multiples of kappa, limit
///          multiples of kappa carry the lifted 1-sheet
struct ModelRecipe {
  enum class Kind { Single, Sum, GLIter, Lift, DProd };
  Kind kind;
  int root = -1;                   // original tree node (Sum has none)
  std::vector<RecipeRef> parts;    // Sum, GLIter
  RecipeRef inner;                 // Lift
  RecipeRef xpart, ypart;          // DProd
  Ordinal exponent;                // Lift
  Ordinal kappa;                   // GLIter, DProd
  Ordinal lambda;
};

struct OrdinalModel {
  JTree tree;
  RecipeRef recipe;
  Ordinal lambda;
};

/// Compiles a rooted tree-like J_n-frame into its ordinal model skeleton:
/// lambda below epsilon_0 and the evaluable onto map [1, lambda] -> T.
/// Throws std::invalid_argument when the frame is invalid or not rooted.
OrdinalModel buildOrdinalModel(const JTree& t);

/// f(alpha) for 1 <= alpha <= lambda; returns the tree node index.
int evalMap(const OrdinalModel& m, const Ordinal& alpha);

const Ordinal& lambdaOf(const OrdinalModel& m);

/// One witness ordinal per tree node, derived from the recipe structure;
/// evalMap maps each witness to its node. The root's witness is lambda.
std::vector<std::pair<int, Ordinal>> witnessOrdinals(const OrdinalModel& m);

struct CheckReport {
  std::string name;
  bool pass = true;
  int checked = 0;
  int vacuous = 0;
  std::vector<std::string> failures;  // capped
};

/// At each sample a: the (n+1)-fold interval rank of a equals the R_n-height
/// of f(a).
CheckReport checkRankHeight(const OrdinalModel& m, const std::vector<Ordinal>& samples);

/// f(lambda) is the root, no sampled alpha < lambda maps to the root, and the
/// structural witnesses cover every node.
CheckReport checkSuitability(const OrdinalModel& m, const std::vector<Ordinal>& samples);

/// Necessary condition of (j3)/(j4) at modality 0: at sampled points of
/// successor interval rank, a tail interval below the sample maps into the
/// preimage of R*_0 of the hereditary 1-root above the sample's image.
CheckReport checkLocalStructure(const OrdinalModel& m, const std::vector<Ordinal>& samples);

/// Seeded samples in [1, lambda); lambda itself is appended when includeTop.
std::vector<Ordinal> sampleOrdinals(const Ordinal& lambda, int count, uint64_t seed,
                                    bool includeTop = false);

struct RefutationResult {
  DecisionResult decision;
  std::optional<Countermodel> countermodel;
  std::optional<OrdinalModel> ordinalModel;

  bool refuted() const { return countermodel.has_value(); }
};

/// End-to-end pipeline: GLP decision, and on refutation the countermodel
/// tree is compiled into its ordinal model.
RefutationResult refuteOnOrdinalSpace(const Formula& f, const DecideOptions& opts = {});

/// Concatenation of finitely many ordinal models over lambda = sum of the
/// parts, with block-local evaluation. eval returns (part index, node).
struct BlockSumModel {
  std::vector<OrdinalModel> parts;
  Ordinal lambda;

  std::pair<int, int> eval(const Ordinal& alpha) const;
};

BlockSumModel recipeSum(std::vector<OrdinalModel> models);

}  // namespace glpwb
