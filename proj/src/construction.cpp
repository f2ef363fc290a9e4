#include "glpwb/construction.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <stdexcept>

namespace glpwb {

namespace {

uint64_t bit(int i) { return uint64_t{1} << i; }

std::vector<int> bitsOf(uint64_t mask) {
  std::vector<int> out;
  while (mask) {
    out.push_back(std::countr_zero(mask));
    mask &= mask - 1;
  }
  return out;
}

RecipeRef makeSingle(int node) {
  auto r = std::make_shared<ModelRecipe>();
  r->kind = ModelRecipe::Kind::Single;
  r->root = node;
  r->lambda = Ordinal::nat(1);
  return r;
}

RecipeRef makeSum(std::vector<RecipeRef> parts) {
  auto r = std::make_shared<ModelRecipe>();
  r->kind = ModelRecipe::Kind::Sum;
  Ordinal lam;
  for (const auto& p : parts) lam = add(lam, p->lambda);
  r->parts = std::move(parts);
  r->lambda = std::move(lam);
  return r;
}

RecipeRef makeGLIter(std::vector<RecipeRef> parts, int root) {
  auto r = std::make_shared<ModelRecipe>();
  r->kind = ModelRecipe::Kind::GLIter;
  Ordinal kappa;
  for (const auto& p : parts) kappa = add(kappa, p->lambda);
  r->parts = std::move(parts);
  r->root = root;
  r->kappa = kappa;
  r->lambda = mul(kappa, Ordinal::omega());
  return r;
}

// Case 1 lift: [1, l1] is re-indexed as [0, mu] with mu = l1 for infinite l1
// and mu = l1 - 1 for finite l1 (which only arises for singletons, l1 = 1).
RecipeRef makeLiftReindexed(RecipeRef inner, int root) {
  auto r = std::make_shared<ModelRecipe>();
  r->kind = ModelRecipe::Kind::Lift;
  r->root = root;
  r->exponent = inner->lambda.isFinite() ? pred(inner->lambda) : inner->lambda;
  r->lambda = omegaPow(r->exponent);
  r->inner = std::move(inner);
  return r;
}

// DProd 1-sheet lift uses w^(lambda_0) with the lambda as is.
RecipeRef makeLiftLiteral(RecipeRef inner, int root) {
  auto r = std::make_shared<ModelRecipe>();
  r->kind = ModelRecipe::Kind::Lift;
  r->root = root;
  r->exponent = inner->lambda;
  r->lambda = omegaPow(r->exponent);
  r->inner = std::move(inner);
  return r;
}

RecipeRef makeDProd(RecipeRef xpart, RecipeRef ypart, int root) {
  auto r = std::make_shared<ModelRecipe>();
  r->kind = ModelRecipe::Kind::DProd;
  r->root = root;
  r->kappa = xpart->lambda;
  r->lambda = mul(xpart->lambda, ypart->lambda);
  r->xpart = std::move(xpart);
  r->ypart = std::move(ypart);
  return r;
}

// Unique world of `carrier` with no incoming edge of any relation >= lo.
int rootOf(const JTree& t, uint64_t carrier, int lo) {
  uint64_t incoming = 0;
  for (int j = lo; j <= t.n; ++j)
    for (int x : bitsOf(carrier)) incoming |= t.rel[j][x] & carrier;
  uint64_t roots = carrier & ~incoming;
  if (std::popcount(roots) != 1) throw std::invalid_argument("frame is not rooted");
  return std::countr_zero(roots);
}

uint64_t starFrom(const JTree& t, uint64_t carrier, int lo, int w) {
  uint64_t m = 0;
  for (int j = lo; j <= t.n; ++j) m |= t.rel[j][w];
  return m & carrier;
}

// The double recursion of the main construction; relations lo..t.n act as
// modalities 0..(t.n - lo) on the subframe induced by `carrier`.
RecipeRef buildRec(const JTree& t, uint64_t carrier, int lo) {
  int a = rootOf(t, carrier, lo);
  bool r0empty = true;
  for (int x : bitsOf(carrier))
    if (t.rel[lo][x] & carrier) {
      r0empty = false;
      break;
    }

  if (lo == t.n) {
    if (r0empty) return makeSingle(a);
    // children are the immediate successors of the root
    std::vector<RecipeRef> parts;
    uint64_t succ = t.rel[lo][a] & carrier;
    for (int y : bitsOf(succ)) {
      bool immediate = true;
      for (int z : bitsOf(succ))
        if (z != y && t.related(lo, z, y)) {
          immediate = false;
          break;
        }
      if (!immediate) continue;
      uint64_t sub = bit(y) | starFrom(t, carrier, lo, y);
      parts.push_back(buildRec(t, sub, lo));
    }
    if (parts.empty()) throw std::logic_error("nonempty relation without immediate successors");
    return makeGLIter(std::move(parts), a);
  }

  if (r0empty) {
    // the whole carrier is one sheet at this modality; recurse one level up
    RecipeRef inner = buildRec(t, carrier, lo + 1);
    return makeLiftReindexed(std::move(inner), a);
  }

  // split off the root's sheet and the subtrees hanging below it
  uint64_t sheet0 = bit(a) | starFrom(t, carrier, lo + 1, a);
  std::vector<RecipeRef> xparts;
  uint64_t succ = t.rel[lo][a] & carrier;
  // hereditary next-level roots among the root's successors
  uint64_t incomingHi = 0;
  for (int j = lo + 1; j <= t.n; ++j)
    for (int x : bitsOf(carrier)) incomingHi |= t.rel[j][x] & carrier;
  uint64_t childRoots = succ & ~incomingHi;
  // keep only those whose sheet is directly below the root's sheet
  for (int y : bitsOf(childRoots)) {
    bool immediate = true;
    for (int z : bitsOf(succ & ~sheet0))
      if (z != y && t.related(lo, z, y)) {
        immediate = false;
        break;
      }
    if (!immediate) continue;
    uint64_t sub = bit(y) | starFrom(t, carrier, lo, y);
    xparts.push_back(buildRec(t, sub, lo));
  }
  if (xparts.empty()) throw std::logic_error("root sheet has no child sheets despite R_0 edges");
  RecipeRef xpart = makeSum(std::move(xparts));
  RecipeRef yInner = buildRec(t, sheet0, lo + 1);
  RecipeRef ypart = makeLiftLiteral(std::move(yInner), a);
  return makeDProd(std::move(xpart), std::move(ypart), a);
}

}  // namespace

OrdinalModel buildOrdinalModel(const JTree& t) {
  auto violations = validateJTree(t);
  if (!violations.empty())
    throw std::invalid_argument("invalid tree-like frame: " + violations.front().condition + ": " +
                                violations.front().detail);
  if (t.size() == 0) throw std::invalid_argument("empty frame");
  uint64_t carrier = t.size() == 64 ? ~uint64_t{0} : (bit(t.size()) - 1);
  int root = rootOf(t, carrier, 0);
  uint64_t reach = bit(root) | reachStar(t, 0, root);
  if (reach != carrier) throw std::invalid_argument("frame is not rooted");
  OrdinalModel m;
  m.tree = t;
  m.recipe = buildRec(t, carrier, 0);
  m.lambda = m.recipe->lambda;
  return m;
}

namespace {

// re-index [0, exponent] to [1, inner lambda]
Ordinal collapseToInner(const Ordinal& xi, const Ordinal& innerLambda) {
  if (xi.isZero()) return Ordinal::nat(1);
  if (xi.isFinite()) {
    Ordinal up = add(xi, Ordinal::nat(1));
    return cmp(up, innerLambda) == OrdCmp::Greater ? innerLambda : up;
  }
  return xi;
}

int evalRecipe(const ModelRecipe& r, const Ordinal& alpha);

int evalBlocks(const std::vector<RecipeRef>& parts, const Ordinal& alpha) {
  Ordinal offset;
  for (const auto& p : parts) {
    Ordinal end = add(offset, p->lambda);
    if (cmp(alpha, end) != OrdCmp::Greater) return evalRecipe(*p, leftDiff(offset, alpha));
    offset = std::move(end);
  }
  throw DomainError("ordinal outside the block sum");
}

int evalRecipe(const ModelRecipe& r, const Ordinal& alpha) {
  if (alpha.isZero() || cmp(alpha, r.lambda) == OrdCmp::Greater)
    throw DomainError("ordinal outside [1, lambda]");
  switch (r.kind) {
    case ModelRecipe::Kind::Single:
      return r.root;
    case ModelRecipe::Kind::Sum:
      return evalBlocks(r.parts, alpha);
    case ModelRecipe::Kind::GLIter: {
      if (alpha == r.lambda) return r.root;
      auto [q, rem] = divRem(alpha, r.kappa);
      return evalBlocks(r.parts, rem.isZero() ? r.kappa : rem);
    }
    case ModelRecipe::Kind::Lift: {
      Ordinal xi = intervalRank(alpha);
      return evalRecipe(*r.inner, collapseToInner(xi, r.inner->lambda));
    }
    case ModelRecipe::Kind::DProd: {
      auto [q, rem] = divRem(alpha, r.kappa);
      if (!rem.isZero()) return evalRecipe(*r.xpart, rem);
      if (isSuccessor(q)) return evalRecipe(*r.xpart, r.kappa);
      return evalRecipe(*r.ypart, q);  // q is a limit: the Z1 part
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

int evalMap(const OrdinalModel& m, const Ordinal& alpha) { return evalRecipe(*m.recipe, alpha); }

const Ordinal& lambdaOf(const OrdinalModel& m) { return m.lambda; }

namespace {

void collectWitnesses(const ModelRecipe& r, std::map<int, Ordinal>& out);

// a witness ordinal != 1 for the node, needed where block position 1 would
// collide with the re-indexing of a lift
Ordinal witnessAvoidingOne(const ModelRecipe& r, int node);

Ordinal witnessOf(const ModelRecipe& r, int node) {
  std::map<int, Ordinal> w;
  collectWitnesses(r, w);
  return w.at(node);
}

void collectWitnesses(const ModelRecipe& r, std::map<int, Ordinal>& out) {
  switch (r.kind) {
    case ModelRecipe::Kind::Single:
      out.emplace(r.root, Ordinal::nat(1));
      return;
    case ModelRecipe::Kind::Sum: {
      Ordinal offset;
      for (const auto& p : r.parts) {
        std::map<int, Ordinal> sub;
        collectWitnesses(*p, sub);
        for (auto& [node, wit] : sub) out.emplace(node, add(offset, wit));
        offset = add(offset, p->lambda);
      }
      return;
    }
    case ModelRecipe::Kind::GLIter: {
      Ordinal offset;
      for (const auto& p : r.parts) {
        std::map<int, Ordinal> sub;
        collectWitnesses(*p, sub);
        for (auto& [node, wit] : sub) out.emplace(node, add(offset, wit));
        offset = add(offset, p->lambda);
      }
      out[r.root] = r.lambda;
      return;
    }
    case ModelRecipe::Kind::Lift: {
      std::map<int, Ordinal> sub;
      collectWitnesses(*r.inner, sub);
      for (auto& [node, wit] : sub) {
        if (node == r.root) continue;
        Ordinal xi = wit.isFinite() ? pred(wit) : wit;  // invert the re-indexing
        out.emplace(node, omegaPow(xi));
      }
      out[r.root] = r.lambda;
      return;
    }
    case ModelRecipe::Kind::DProd: {
      std::map<int, Ordinal> xs;
      collectWitnesses(*r.xpart, xs);
      for (auto& [node, wit] : xs) out.emplace(node, wit);
      // 1-sheet nodes need limit multiples of kappa
      std::map<int, Ordinal> ys;
      collectWitnesses(*r.ypart, ys);
      for (auto& [node, wit] : ys) {
        if (node == r.root) continue;
        Ordinal q = wit;
        if (q.isFinite() && q.finiteValue() == 1) q = witnessAvoidingOne(*r.ypart, node);
        if (!isLimit(q)) throw std::logic_error("1-sheet witness is not a limit");
        out.emplace(node, mul(r.kappa, q));
      }
      out[r.root] = r.lambda;
      return;
    }
  }
}

Ordinal witnessAvoidingOne(const ModelRecipe& r, int node) {
  Ordinal w = witnessOf(r, node);
  if (!(w.isFinite() && w.finiteValue() == 1)) return w;
  switch (r.kind) {
    case ModelRecipe::Kind::GLIter:
      return add(r.kappa, w);  // same block, one period later
    case ModelRecipe::Kind::DProd:
      return add(r.kappa, w);
    case ModelRecipe::Kind::Lift: {
      Ordinal innerWit = witnessAvoidingOne(*r.inner, node);
      Ordinal xi = innerWit.isFinite() ? pred(innerWit) : innerWit;
      return omegaPow(xi);
    }
    default:
      throw std::logic_error("no alternative witness available");
  }
}

}  // namespace

std::vector<std::pair<int, Ordinal>> witnessOrdinals(const OrdinalModel& m) {
  std::map<int, Ordinal> w;
  collectWitnesses(*m.recipe, w);
  return {w.begin(), w.end()};
}

namespace {

void report(CheckReport& rep, bool ok, const std::string& what) {
  ++rep.checked;
  if (!ok) {
    rep.pass = false;
    if (rep.failures.size() < 8) rep.failures.push_back(what);
  }
}

}  // namespace

CheckReport checkRankHeight(const OrdinalModel& m, const std::vector<Ordinal>& samples) {
  CheckReport rep;
  rep.name = "rank-height";
  for (const auto& a : samples) {
    Ordinal lhs = intervalRankIter(a, static_cast<unsigned>(m.tree.n) + 1);
    int node = evalMap(m, a);
    int h = rnHeight(m.tree, m.tree.n, node);
    report(rep, lhs == Ordinal::nat(static_cast<uint64_t>(h)),
           "rank/height mismatch at " + printOrdinal(a) + ": rank " + printOrdinal(lhs) +
               ", height " + std::to_string(h) + " of " + m.tree.names[node]);
  }
  return rep;
}

CheckReport checkSuitability(const OrdinalModel& m, const std::vector<Ordinal>& samples) {
  CheckReport rep;
  rep.name = "suitability";
  int root = m.recipe->root;
  report(rep, evalMap(m, m.lambda) == root, "lambda does not map to the root");
  auto wits = witnessOrdinals(m);
  report(rep, wits.size() == static_cast<size_t>(m.tree.size()), "witness table misses nodes");
  for (const auto& [node, wit] : wits)
    report(rep, evalMap(m, wit) == node,
           "witness " + printOrdinal(wit) + " does not map to " + m.tree.names[node]);
  for (const auto& a : samples) {
    if (a == m.lambda) continue;
    report(rep, evalMap(m, a) != root,
           "root has a preimage below lambda at " + printOrdinal(a));
  }
  return rep;
}

namespace {

// hereditary 1-root of the 1-sheet containing w
int hereditaryOneRootAbove(const JTree& t, int w) {
  if (t.n == 0) return w;
  uint64_t sheetMask = 0;
  for (const auto& cls : sheets(t, 1)) {
    uint64_t m = 0;
    for (int x : cls) m |= bit(x);
    if (m & bit(w)) {
      sheetMask = m;
      break;
    }
  }
  uint64_t incoming = 0;
  for (int j = 1; j <= t.n; ++j)
    for (int x : bitsOf(sheetMask)) incoming |= t.rel[j][x] & sheetMask;
  uint64_t roots = sheetMask & ~incoming;
  if (std::popcount(roots) != 1) throw std::logic_error("1-sheet has no unique root");
  return std::countr_zero(roots);
}

}  // namespace

CheckReport checkLocalStructure(const OrdinalModel& m, const std::vector<Ordinal>& samples) {
  CheckReport rep;
  rep.name = "local-structure";
  for (const auto& a : samples) {
    Ordinal xi = intervalRank(a);
    if (xi.isZero()) {
      ++rep.vacuous;  // isolated point: the empty punctured interval suffices
      continue;
    }
    if (isLimit(xi)) {
      ++rep.vacuous;  // no order-interval guarantee at limit-rank points
      continue;
    }
    int node = evalMap(m, a);
    int v = hereditaryOneRootAbove(m.tree, node);
    uint64_t target = unionStar(m.tree, 0, v);
    // beta: alpha with the last CNF term's coefficient decremented
    auto terms = a.terms();
    Ordinal beta;
    {
      auto tv = terms;
      if (tv.back().coeff == 1)
        tv.pop_back();
      else
        tv.back().coeff -= 1;
      beta = Ordinal::fromTerms(tv);
    }
    Ordinal eta = pred(xi);
    std::vector<Ordinal> probes;
    for (uint64_t j = 1; j <= 3; ++j) {
      probes.push_back(add(beta, mul(omegaPow(eta), Ordinal::nat(j))));
      if (!eta.isZero())
        probes.push_back(add(add(beta, mul(omegaPow(eta), Ordinal::nat(j))), Ordinal::nat(1)));
    }
    bool ok = true;
    std::string bad;
    for (const auto& pr : probes) {
      if (cmp(pr, beta) != OrdCmp::Greater || cmp(pr, a) != OrdCmp::Less) continue;
      int img = evalMap(m, pr);
      if (!(target & bit(img))) {
        ok = false;
        bad = printOrdinal(pr) + " maps to " + m.tree.names[img] + " outside R*_0(" +
              m.tree.names[v] + ")";
        break;
      }
    }
    report(rep, ok, "interval below " + printOrdinal(a) + ": " + bad);
  }
  return rep;
}

std::vector<Ordinal> sampleOrdinals(const Ordinal& lambda, int count, uint64_t seed, bool includeTop) {
  std::vector<Ordinal> out;
  if (lambda.isZero()) return out;
  std::mt19937_64 rng(seed);
  auto randNat = [&](uint64_t hi) { return rng() % (hi + 1); };
  // random CNF term piles reduced modulo lambda
  std::function<Ordinal(int)> gen = [&](int depth) -> Ordinal {
    Ordinal acc;
    int terms = 1 + static_cast<int>(randNat(2));
    for (int i = 0; i < terms; ++i) {
      Ordinal e = depth > 0 && randNat(1) ? gen(depth - 1) : Ordinal::nat(randNat(4));
      acc = add(acc, mul(omegaPow(e), Ordinal::nat(1 + randNat(4))));
    }
    return acc;
  };
  for (int i = 0; i < count; ++i) {
    Ordinal raw = gen(2);
    Ordinal rem = divRem(raw, lambda).second;
    out.push_back(add(rem, Ordinal::nat(1)));  // in [1, lambda]
  }
  if (includeTop) out.push_back(lambda);
  return out;
}

RefutationResult refuteOnOrdinalSpace(const Formula& f, const DecideOptions& opts) {
  RefutationResult res;
  res.decision = decideGLP(f, opts);
  if (res.decision.refuted()) {
    res.countermodel = res.decision.countermodel;
    res.ordinalModel = buildOrdinalModel(res.countermodel->model.frame);
  }
  return res;
}

std::pair<int, int> BlockSumModel::eval(const Ordinal& alpha) const {
  if (alpha.isZero() || cmp(alpha, lambda) == OrdCmp::Greater)
    throw DomainError("ordinal outside the block sum");
  Ordinal offset;
  for (size_t i = 0; i < parts.size(); ++i) {
    Ordinal end = add(offset, parts[i].lambda);
    if (cmp(alpha, end) != OrdCmp::Greater)
      return {static_cast<int>(i), evalMap(parts[i], leftDiff(offset, alpha))};
    offset = std::move(end);
  }
  throw DomainError("ordinal outside the block sum");
}

BlockSumModel recipeSum(std::vector<OrdinalModel> models) {
  BlockSumModel s;
  Ordinal lam;
  for (const auto& m : models) lam = add(lam, m.lambda);
  s.parts = std::move(models);
  s.lambda = std::move(lam);
  return s;
}

}  // namespace glpwb
