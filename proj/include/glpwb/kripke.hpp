#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "glpwb/formula.hpp"

namespace glpwb {

/// Finite frame for the logic J with modalities 0..n. rel[k][x] is the
/// bitmask of R_k-successors of world x. Worlds carry names for I/O;
/// all internal work uses indices.
struct JTree {
  int n = 0;
  std::vector<std::string> names;
  std::vector<std::vector<uint64_t>> rel;  // rel[k][x], k <= n

  int size() const { return static_cast<int>(names.size()); }
  bool related(int k, int x, int y) const { return (rel[k][x] >> y) & 1; }
};

JTree makeJTree(int n, int size);  // empty relations, names w0..w{size-1}

struct FrameViolation {
  std::string condition;  // "transitivity", "well-foundedness", "condition2", "condition3", "tree-likeness"
  std::string detail;
};

/// Checks the J-frame conditions and tree-likeness; returns all violations
/// found (empty means the frame is a valid tree-like J-frame).
std::vector<FrameViolation> validateJTree(const JTree& t);
bool isValidJTree(const JTree& t);

/// Equivalence classes of the reflexive-symmetric-transitive closure of
/// R_k u R_{k+1} u ...; classes ordered by least world. Requires k <= n.
std::vector<std::vector<int>> sheets(const JTree& t, int k);

/// Worlds with no incoming R_j edge for any j >= k. Requires k <= n.
std::vector<int> hereditaryRoots(const JTree& t, int k);

/// R*_k(w) as the transitive closure of R_k u ... u R_n applied to w.
uint64_t reachStar(const JTree& t, int k, int w);
/// R*_k(w) read as the plain union R_k(w) u ... u R_n(w).
uint64_t unionStar(const JTree& t, int k, int w);

/// Height of w in (T, R_k): 0 at R_k-leaves.
int rnHeight(const JTree& t, int k, int w);

struct KripkeModel {
  JTree frame;
  std::map<std::string, uint64_t> valuation;  // variable -> world mask
};

/// Truth set of f, bottom-up. Throws std::invalid_argument when f uses a
/// modality above the frame's n.
uint64_t evalModel(const KripkeModel& m, const Formula& f);

/// All tree-like J_n-frames on `size` worlds up to isomorphism
/// (lexicographically minimal adjacency encoding), including forests.
std::vector<JTree> enumerateJTrees(int n, int size);
/// The connected (single hereditary 0-root) ones only.
std::vector<JTree> enumerateRootedJTrees(int n, int size);

/// Restriction of the frame to the generated subframe of `world`
/// (the world together with everything reachable from it); the world
/// becomes the hereditary 0-root of the result.
std::pair<JTree, int> generatedSubframe(const JTree& t, int world);
KripkeModel restrictModel(const KripkeModel& m, uint64_t keep);

/// 2^(|subformulas| * (n+1)), saturating at UINT64_MAX.
uint64_t filtrationEstimate(const Formula& f);

struct DecideOptions {
  int bound = 0;         // max frame size searched; 0 = default policy
  bool exhaustive = false;
  int maxSize = 6;       // hard cap applied to the exhaustive estimate
};

struct Countermodel {
  KripkeModel model;
  int world;
};

struct DecisionResult {
  enum class Verdict { Valid, ValidBounded, Refuted };
  Verdict verdict;
  std::optional<Countermodel> countermodel;
  int searchedBound = 0;
  uint64_t estimate = 0;

  bool refuted() const { return verdict == Verdict::Refuted; }
};

/// Validity in J over tree-like frames, by exhaustive search of rooted
/// frames up to the bound with full valuation sweeps over the variables
/// occurring in f. A found countermodel is re-verified with evalModel and
/// restricted so the refuting world is the hereditary 0-root.
DecisionResult decideJ(const Formula& f, const DecideOptions& opts = {});

/// GLP validity via the reduction: decideJ(M+(f) -> f). The countermodel,
/// when present, satisfies M+(f) at the refuting hereditary 0-root.
DecisionResult decideGLP(const Formula& f, const DecideOptions& opts = {});


}  // namespace glpwb
