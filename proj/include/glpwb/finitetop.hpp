#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "glpwb/formula.hpp"
#include "glpwb/kripke.hpp"

namespace glpwb {

/// Finite topological space on points 0..size-1 with an explicit open-set
/// family stored as bitmasks. Construction verifies that the family is a
/// topology (contains empty and full sets, closed under union and
/// intersection). Carrier sizes are capped at 16 so that subset sweeps
/// stay exact and cheap.
class FiniteSpace {
 public:
  FiniteSpace() = default;  // empty space
  FiniteSpace(int size, std::vector<uint64_t> opens);

  static FiniteSpace discrete(int size);
  static FiniteSpace indiscrete(int size);
  static FiniteSpace leftTopology(int size);  // opens are the downsets [0,k)
  static FiniteSpace sierpinski();            // {{}, {0}, {0,1}}
  /// Coarsest topology containing every set in `family`.
  static FiniteSpace generated(int size, const std::vector<uint64_t>& family);

  int size() const { return size_; }
  const std::vector<uint64_t>& opens() const { return opens_; }
  bool isOpen(uint64_t u) const;
  uint64_t minNbhd(int x) const { return minNbhd_[x]; }
  uint64_t full() const { return size_ == 0 ? 0 : ((uint64_t{1} << size_) - 1); }

  /// Subspace on the points of `mask`, re-indexed in increasing order.
  FiniteSpace subspace(uint64_t mask) const;

  bool operator==(const FiniteSpace& o) const { return size_ == o.size_ && opens_ == o.opens_; }
  bool operator!=(const FiniteSpace& o) const { return !(*this == o); }

 private:
  int size_ = 0;
  std::vector<uint64_t> opens_{0};    // sorted
  std::vector<uint64_t> minNbhd_;
};

/// Derived set: limit points of A.
uint64_t dOp(const FiniteSpace& s, uint64_t a);
/// Co-derived set: complement of d applied to the complement.
uint64_t dTildeOp(const FiniteSpace& s, uint64_t a);

bool isScattered(const FiniteSpace& s);
/// [d^0 X, d^1 X, ...] down to and including the first empty set.
/// Throws DomainError if the sequence stalls before reaching empty.
std::vector<uint64_t> cbSequence(const FiniteSpace& s);
int rankOfPoint(const FiniteSpace& s, int x);
int rankOfSpace(const FiniteSpace& s);
/// Least ordinal above the rank of every point of A (0 for empty A).
int rankOfSubset(const FiniteSpace& s, uint64_t a);

/// Continuous, open and pointwise discrete.
bool isDMap(const FiniteSpace& x, const FiniteSpace& y, const std::vector<int>& f);

bool isRankPreservingExtension(const FiniteSpace& s, const FiniteSpace& finer);
bool isLExtension(const FiniteSpace& s, const FiniteSpace& finer);
bool isMaximal(const FiniteSpace& s);
bool isLMaximalByDef(const FiniteSpace& s);
/// Criterion (lm), checked at every point whose rank the hook classifies as
/// a limit. The default hook is genuine limit-ness, which never holds for
/// the finite ranks of finite spaces; tests can pass a pretend-limit hook to
/// exercise the branch.
bool isLMaximalByCriterion(const FiniteSpace& s,
                           const std::function<bool(int)>& limitHook = nullptr);

std::vector<FiniteSpace> rankPreservingExtensions(const FiniteSpace& s);
std::vector<FiniteSpace> lExtensions(const FiniteSpace& s);
std::vector<FiniteSpace> maximalExtensions(const FiniteSpace& s);

/// Next topology: generated by the opens together with every derived set d(A).
FiniteSpace plusTopology(const FiniteSpace& s);

/// All topologies on `size` labeled points (355 of them for size 4).
std::vector<FiniteSpace> enumerateTopologies(int size);
std::vector<FiniteSpace> enumerateScatteredTopologies(int size);

struct PolySpace {
  int size = 0;
  std::vector<FiniteSpace> topologies;
};

bool isGLPSpace(const PolySpace& p);
uint64_t evalPolySpace(const PolySpace& p, const std::map<std::string, uint64_t>& valuation,
                       const Formula& f);

/// All GLP polyspaces with `arity` topologies on `size` points.
std::vector<PolySpace> enumerateGLPSpaces(int size, int arity);

/// Explicitly tabulated operator on subsets of 0..size-1.
class DeltaOperator {
 public:
  DeltaOperator() = default;
  DeltaOperator(int size, std::vector<uint64_t> table);  // table indexed by subset mask
  int size() const { return size_; }
  uint64_t apply(uint64_t a) const { return table_[a]; }
  const std::vector<uint64_t>& table() const { return table_; }
  bool operator==(const DeltaOperator& o) const { return size_ == o.size_ && table_ == o.table_; }

 private:
  int size_ = 0;
  std::vector<uint64_t> table_{0};
};

/// Additivity, delta(empty) = empty, and the identity dA = d(A \ dA).
bool isMagari(const DeltaOperator& d);
/// Topology whose closed sets are the A with dA contained in A. Requires isMagari.
FiniteSpace magariToSpace(const DeltaOperator& d);
DeltaOperator spaceToDelta(const FiniteSpace& s);

struct DProductResult {
  FiniteSpace space;
  std::vector<int> pi0;        // Z -> X on the copy part, -1 elsewhere
  std::vector<int> pi1;        // Z -> Y, total
  uint64_t z0Mask = 0;
  std::vector<int> isoPoints;  // isolated points of Y, increasing
  std::vector<int> limitPoints;
};

/// d-product: a copy of X at every isolated point of Y, glued to the limit
/// part of Y. Scatteredness of the inputs is not required.
DProductResult dProduct(const FiniteSpace& x, const FiniteSpace& y);

/// d-product of polyspaces: theta_0 from dProduct of the first topologies,
/// theta_i (i >= 1) the topological sum of per-copy tau_i and sigma_i on dY.
PolySpace glpDProduct(const PolySpace& p, const PolySpace& q);

/// The frame viewed as a polyspace: sigma_k-opens are the R_k-upsets.
PolySpace treeAsPolySpace(const JTree& t);

/// Conditions (j1)-(j4) for f : P -> T, brute-forced.
bool isJnMorphism(const PolySpace& p, const JTree& t, const std::vector<int>& f);
/// The single condition equivalent to (j3) and (j4):
/// preimage of R*_k(w) u {w} is inside dTilde_k of the preimage of R*_k(w).
bool jMorphismStarCondition(const PolySpace& p, const JTree& t, const std::vector<int>& f);
/// (j3) and (j4) alone, for equivalence testing against the star condition.
bool jMorphismConditions34(const PolySpace& p, const JTree& t, const std::vector<int>& f);

/// Builds the polyspace induced by a family of operators that validate the
/// GLP axioms as set identities; nullopt when some axiom fails.
std::optional<PolySpace> neighborhoodToGLPSpace(const std::vector<DeltaOperator>& deltas);

}  // namespace glpwb
