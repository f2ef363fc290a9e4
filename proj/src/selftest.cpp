#include "glpwb/selftest.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <map>
#include <set>

#include "glpwb/construction.hpp"
#include "glpwb/finitetop.hpp"
#include "glpwb/kripke.hpp"

namespace glpwb {

namespace {

uint64_t bit(int i) { return uint64_t{1} << i; }

struct Suite {
  SuiteResult result;

  explicit Suite(std::string name) { result.name = std::move(name); }

  void check(bool ok, const std::string& what) {
    ++result.checks;
    if (!ok) {
      result.pass = false;
      if (result.failures.size() < 6) result.failures.push_back(what);
    }
  }
};

}  // namespace

FormulaRef randomFormula(std::mt19937_64& rng, int maxNodes, int maxModality,
                         const std::vector<std::string>& vars) {
  auto pickVar = [&]() -> FormulaRef {
    if (vars.empty() || rng() % 5 == 0) return Formula::bottom();
    return Formula::var(vars[rng() % vars.size()]);
  };
  std::function<FormulaRef(int)> gen = [&](int budget) -> FormulaRef {
    if (budget <= 1) return pickVar();
    switch (rng() % 7) {
      case 0:
        return pickVar();
      case 1:
        return Formula::neg(gen(budget - 1));
      case 2:
        return Formula::box(static_cast<int>(rng() % (maxModality + 1)), gen(budget - 1));
      case 3:
        return Formula::diamond(static_cast<int>(rng() % (maxModality + 1)), gen(budget - 1));
      case 4:
        return Formula::conj(gen((budget - 1) / 2 + 1), gen((budget - 1) / 2));
      case 5:
        return Formula::disj(gen((budget - 1) / 2 + 1), gen((budget - 1) / 2));
      default:
        return Formula::implies(gen((budget - 1) / 2 + 1), gen((budget - 1) / 2));
    }
  };
  return gen(maxNodes);
}

Ordinal randomSmallOrdinal(std::mt19937_64& rng) {
  auto nat = [&](uint64_t hi) { return rng() % (hi + 1); };
  // exponents below w^w: CNF with natural exponents
  auto smallExp = [&]() {
    Ordinal acc;
    int terms = static_cast<int>(nat(2));
    for (int i = 0; i < terms; ++i)
      acc = add(acc, mul(omegaPow(Ordinal::nat(nat(4))), Ordinal::nat(1 + nat(3))));
    return acc;
  };
  Ordinal acc;
  int terms = static_cast<int>(nat(3));
  for (int i = 0; i < terms; ++i)
    acc = add(acc, mul(omegaPow(smallExp()), Ordinal::nat(1 + nat(5))));
  return acc;
}

namespace {

// ---------------------------------------------------------------------------

SuiteResult suiteFormulaRoundtrip(const SelftestOptions& opts) {
  Suite s("formula-roundtrip");
  std::mt19937_64 rng(opts.seed * 7 + 1);
  for (int i = 0; i < opts.samples; ++i) {
    FormulaRef f = randomFormula(rng, 12, 2, {"p", "q", "r"});
    std::string text = printFormula(*f);
    FormulaRef g = parseFormula(text);
    s.check(structurallyEqual(*f, *g), "parse(print(f)) != f for " + text);
  }
  return s.result;
}

SuiteResult suiteFormulaReduction(const SelftestOptions& opts) {
  Suite s("formula-reduction");
  std::mt19937_64 rng(opts.seed * 7 + 2);
  for (int i = 0; i < opts.samples; ++i) {
    FormulaRef f = randomFormula(rng, 10, 2, {"p", "q"});
    auto boxes = boxSubformulas(f);
    FormulaRef m = reductionM(f);
    FormulaRef mp = reductionMplus(f);

    int n = 0;
    for (const auto& [mi, psi] : boxes) n = std::max(n, mi);
    auto mm = maxModality(*mp);
    s.check(mm.has_value() && *mm == n, "maxModality(M+) != n for " + printFormula(*f));

    // node-count bound against the box-primitive translation
    size_t sz = nodeCount(*toBoxForm(f));
    size_t bound = boxes.size() * (static_cast<size_t>(n) + 1) * (sz + 3);
    if (!boxes.empty())
      s.check(nodeCount(*m) <= std::max<size_t>(bound, 3), "M(f) exceeds the size bound for " + printFormula(*f));

    // M is a conjunction of implications between boxes of one body with
    // increasing index
    std::function<bool(const Formula&)> shape = [&](const Formula& g) -> bool {
      if (g.op == FOp::And) return shape(*g.lhs) && shape(*g.rhs);
      if (structurallyEqual(g, *Formula::top())) return true;
      if (g.op != FOp::Implies) return false;
      const Formula& a = *g.lhs;
      const Formula& b = *g.rhs;
      return a.op == FOp::Box && b.op == FOp::Box && a.index < b.index &&
             structurallyEqual(*a.lhs, *b.lhs);
    };
    s.check(shape(*m), "M(f) has an unexpected shape for " + printFormula(*f));
  }
  return s.result;
}

SuiteResult suiteOrdinalAlgebra(const SelftestOptions& opts) {
  Suite s("ordinal-algebra");
  std::mt19937_64 rng(opts.seed * 7 + 3);
  // fixed non-commutativity witnesses
  Ordinal one = Ordinal::nat(1), two = Ordinal::nat(2), w = Ordinal::omega();
  s.check(add(one, w) == w && add(w, one) != w, "1+w / w+1 witnesses");
  s.check(mul(two, w) == w && mul(w, two) != w, "2*w / w*2 witnesses");
  for (int i = 0; i < opts.samples; ++i) {
    Ordinal a = randomSmallOrdinal(rng);
    Ordinal b = randomSmallOrdinal(rng);
    Ordinal c = randomSmallOrdinal(rng);
    s.check(add(add(a, b), c) == add(a, add(b, c)), "associativity of + fails");
    s.check(mul(mul(a, b), c) == mul(a, mul(b, c)), "associativity of * fails");
    s.check(mul(a, add(b, c)) == add(mul(a, b), mul(a, c)), "left distributivity fails");
    if (!b.isZero()) {
      auto [q, rem] = divRem(a, b);
      s.check(add(mul(b, q), rem) == a && rem < b,
              "divRem reconstruction fails for " + printOrdinal(a) + " / " + printOrdinal(b));
    }
    // trichotomy and transitivity
    int rels = (a < b) + (a == b) + (a > b);
    s.check(rels == 1, "cmp trichotomy fails");
    if (a <= b && b <= c) s.check(a <= c, "cmp transitivity fails");
    // round trip
    s.check(parseOrdinal(printOrdinal(a)) == a, "ordinal print/parse round trip fails");
  }
  return s.result;
}

SuiteResult suiteOrdinalRank(const SelftestOptions& opts) {
  Suite s("ordinal-rank");
  std::mt19937_64 rng(opts.seed * 7 + 4);
  for (int i = 0; i < opts.samples; ++i) {
    Ordinal b = randomSmallOrdinal(rng);
    s.check(intervalRank(omegaPow(b)) == b, "rank of w^b is not b");
    Ordinal a = randomSmallOrdinal(rng);
    s.check(intervalRank(a) <= a, "rank exceeds the ordinal");
    if (isSuccessor(a)) s.check(add(pred(a), Ordinal::nat(1)) == a, "pred is not inverse to +1");
  }
  s.check(intervalRank(Ordinal()) == Ordinal(), "rank of 0");
  return s.result;
}

SuiteResult suiteKripkeFrames(const SelftestOptions& opts) {
  Suite s("kripke-frames");
  // connected single-relation frames are rooted trees: 1, 1, 2, 4, 9, ...
  const int expect[] = {1, 1, 2, 4, 9};
  int top = opts.quick ? 4 : 5;
  for (int m = 1; m <= top; ++m)
    s.check(static_cast<int>(enumerateRootedJTrees(0, m).size()) == expect[m - 1],
            "rooted frame count at size " + std::to_string(m));
  s.check(enumerateJTrees(0, 2).size() == 2, "two frames on two points");

  std::mt19937_64 rng(opts.seed * 7 + 5);
  for (int n = 0; n <= 2; ++n)
    for (int size = 1; size <= (opts.quick ? 3 : 4); ++size)
      for (const auto& t : enumerateJTrees(n, size)) {
        s.check(isValidJTree(t), "enumerated frame fails validation");
        for (int w = 0; w < t.size(); ++w)
          for (int k = 0; k <= n; ++k)
            s.check(reachStar(t, k, w) == unionStar(t, k, w),
                    "transitive-closure and union readings of R* disagree");
      }

  // points of one (k+1)-sheet are R_m-incomparable for m <= k
  for (const auto& t : enumerateJTrees(1, 4))
    for (int k = 0; k <= 0; ++k)
      for (const auto& cls : sheets(t, k + 1))
        for (int x : cls)
          for (int y : cls)
            s.check(!t.related(k, x, y), "R_m comparable points inside a sheet");
  return s.result;
}

SuiteResult suiteKripkeSoundness(const SelftestOptions& opts) {
  Suite s("kripke-soundness");
  std::mt19937_64 rng(opts.seed * 7 + 6);
  FormulaRef p = Formula::var("p");
  FormulaRef q = Formula::var("q");
  std::vector<FormulaRef> axioms = {
      // K, Loeb, (vi), (vii) at small indices
      Formula::implies(Formula::box(0, Formula::implies(p, q)),
                       Formula::implies(Formula::box(0, p), Formula::box(0, q))),
      Formula::implies(Formula::box(1, Formula::implies(p, q)),
                       Formula::implies(Formula::box(1, p), Formula::box(1, q))),
      Formula::implies(Formula::box(0, Formula::implies(Formula::box(0, p), p)), Formula::box(0, p)),
      Formula::implies(Formula::box(1, Formula::implies(Formula::box(1, p), p)), Formula::box(1, p)),
      Formula::implies(Formula::box(0, p), Formula::box(1, Formula::box(0, p))),
      Formula::implies(Formula::box(0, p), Formula::box(0, Formula::box(1, p))),
      Formula::implies(Formula::box(1, p), Formula::box(1, Formula::box(1, p))),
  };
  for (int size = 1; size <= (opts.quick ? 3 : 4); ++size)
    for (const auto& t : enumerateJTrees(1, size)) {
      uint64_t full = bit(t.size()) - 1;
      for (int trial = 0; trial < 8; ++trial) {
        KripkeModel m;
        m.frame = t;
        m.valuation["p"] = rng() & full;
        m.valuation["q"] = rng() & full;
        for (const auto& ax : axioms)
          s.check(evalModel(m, *ax) == full, "J axiom fails on a tree-like frame: " + printFormula(*ax));
      }
    }
  return s.result;
}

SuiteResult suiteKripkeDecision(const SelftestOptions& opts) {
  Suite s("kripke-decision");
  DecideOptions d;
  d.bound = opts.quick ? 3 : 4;
  auto valid = [&](const std::string& text, bool viaGLP) {
    auto f = parseFormula(text);
    auto res = viaGLP ? decideGLP(*f, d) : decideJ(*f, d);
    s.check(!res.refuted(), text + " should be valid");
  };
  auto refuted = [&](const std::string& text, bool viaGLP) {
    auto f = parseFormula(text);
    auto res = viaGLP ? decideGLP(*f, d) : decideJ(*f, d);
    s.check(res.refuted(), text + " should be refuted");
    if (res.refuted()) {
      const auto& cm = *res.countermodel;
      s.check(isValidJTree(cm.model.frame), "countermodel frame invalid");
      uint64_t tv = evalModel(cm.model, *f);
      s.check(!((tv >> cm.world) & 1), "countermodel does not refute at its world");
      auto roots = hereditaryRoots(cm.model.frame, 0);
      s.check(roots.size() == 1 && roots[0] == cm.world, "refuting world is not the hereditary 0-root");
    }
  };
  valid("[0]([0]p -> p) -> [0]p", false);   // Loeb
  valid("[0]p -> [1][0]p", false);          // (vi)
  valid("[0]p -> [0][1]p", false);          // (vii)
  refuted("[0]p -> [1]p", false);           // (iv) is not in J
  valid("[0]p -> [1]p", true);              // (iv) in GLP
  valid("<0>p -> [1]<0>p", true);           // (v)
  refuted("[1]p -> [0]p", true);
  refuted("[0]false", true);
  refuted("<0>true", true);
  return s.result;
}

SuiteResult suiteTopoDerivedSet(const SelftestOptions& opts) {
  Suite s("topo-derived-set");
  int cap = opts.quick ? 3 : 4;
  auto checkLaws = [&](const FiniteSpace& t) {
    int size = t.size();
    uint64_t subsets = uint64_t{1} << size;
    s.check(dOp(t, 0) == 0, "d(empty) != empty");
    for (uint64_t a = 0; a < subsets; ++a) {
      uint64_t da = dOp(t, a);
      for (uint64_t b = a; b < subsets; ++b)
        s.check(dOp(t, a | b) == (dOp(t, a) | dOp(t, b)), "additivity of d fails");
      if (isScattered(t)) {
        s.check(!(dOp(t, da) & ~da), "dd(A) not inside d(A) on a scattered space");
        s.check(dOp(t, a & ~da) == da, "d(A \\ dA) != d(A) on a scattered space");
      }
    }
  };
  for (int size = 1; size <= cap; ++size)
    for (const auto& t : enumerateTopologies(size)) checkLaws(t);
  if (!opts.quick) {
    // sampled spaces on 5 points
    std::mt19937_64 rng(opts.seed * 7 + 8);
    auto five = enumerateTopologies(5);
    for (int i = 0; i < 40; ++i) checkLaws(five[rng() % five.size()]);
  }

  // d-maps preserve CB sequences; d-maps onto left topologies are the rank
  for (int sx = 1; sx <= 3; ++sx)
    for (const auto& x : enumerateScatteredTopologies(sx)) {
      int rank = rankOfSpace(x);
      FiniteSpace omega = FiniteSpace::leftTopology(rank);
      std::vector<int> rho(sx);
      for (int p = 0; p < sx; ++p) rho[p] = rankOfPoint(x, p);
      s.check(isDMap(x, omega, rho), "rank function is not a d-map onto the left topology");

      for (int sy = 1; sy <= 3; ++sy)
        for (const auto& y : enumerateScatteredTopologies(sy)) {
          std::vector<int> f(sx, 0);
          while (true) {
            if (isDMap(x, y, f)) {
              auto cx = cbSequence(x);
              auto cy = cbSequence(y);
              for (size_t a = 0; a < std::max(cx.size(), cy.size()); ++a) {
                uint64_t dx = a < cx.size() ? cx[a] : 0;
                uint64_t dy = a < cy.size() ? cy[a] : 0;
                uint64_t pre = 0;
                for (int p = 0; p < sx; ++p)
                  if (dy & bit(f[p])) pre |= bit(p);
                s.check(dx == pre, "d-map does not pull back the CB sequence");
              }
              // any d-map into a left topology is the rank function
              if (y == FiniteSpace::leftTopology(sy))
                for (int p = 0; p < sx; ++p)
                  s.check(f[p] == rankOfPoint(x, p), "d-map into a left topology differs from the rank");
            }
            int i = 0;
            while (i < sx && ++f[i] == sy) f[i++] = 0;
            if (i == sx) break;
          }
        }
    }
  return s.result;
}

SuiteResult suiteTopoLMax(const SelftestOptions& opts) {
  Suite s("topo-lmax");
  int cap = opts.quick ? 3 : 4;
  for (int size = 1; size <= cap; ++size)
    for (const auto& t : enumerateScatteredTopologies(size)) {
      bool byDef = isLMaximalByDef(t);
      bool byCrit = isLMaximalByCriterion(t);
      s.check(byDef == byCrit, "l-maximality checks disagree");
      s.check(byDef, "a finite scattered space must be l-maximal");
      auto exts = lExtensions(t);
      s.check(!exts.empty(), "l-extension list is empty");
      bool hasSelf = false;
      for (const auto& e : exts) {
        s.check(isLExtension(t, e), "generator contract of lExtensions");
        if (e == t) hasSelf = true;
      }
      s.check(hasSelf, "lExtensions misses the space itself");
      auto maxs = maximalExtensions(t);
      s.check(!maxs.empty(), "no maximal extension found");
    }

  // lmax-plus: tau+ is generated by tau and the sets d^{b+1}X
  for (int size = 1; size <= cap; ++size)
    for (const auto& t : enumerateScatteredTopologies(size)) {
      auto seq = cbSequence(t);
      std::vector<uint64_t> family = t.opens();
      for (size_t b = 1; b < seq.size(); ++b) family.push_back(seq[b]);
      s.check(plusTopology(t) == FiniteSpace::generated(t.size(), family),
              "plus topology differs from the d^{b+1}X generation");
      // lmax-rank+: the rank of tau+ is r o rho; r vanishes on the finite
      // ordinals, so tau+ is discrete here
      FiniteSpace plus = plusTopology(t);
      for (int p = 0; p < size; ++p) {
        Ordinal expected = intervalRank(Ordinal::nat(rankOfPoint(t, p)));
        s.check(Ordinal::nat(rankOfPoint(plus, p)) == expected, "rank of tau+ is not r o rho");
      }
    }

  // lift+: an l-maximal source keeps d-maps after plus on both sides
  for (int sx = 1; sx <= 3; ++sx)
    for (const auto& x : enumerateScatteredTopologies(sx))
      for (int sy = 1; sy <= 3; ++sy)
        for (const auto& y : enumerateScatteredTopologies(sy)) {
          std::vector<int> f(sx, 0);
          while (true) {
            if (isDMap(x, y, f))
              s.check(isDMap(plusTopology(x), plusTopology(y), f), "lift+ fails");
            int i = 0;
            while (i < sx && ++f[i] == sy) f[i++] = 0;
            if (i == sx) break;
          }
        }

  // pullback, finite witness form: exhaustive maps up to 3x3 carriers,
  // seeded samples once a 4-point carrier is involved
  std::mt19937_64 rng(opts.seed * 7 + 12);
  int pullCap = opts.quick ? 2 : 3;
  auto pullbackAt = [&](const FiniteSpace& x, const FiniteSpace& y, const std::vector<int>& f) {
    if (!isDMap(x, y, f)) return;
    for (const auto& yprime : lExtensions(y)) {
      if (!isLMaximalByDef(yprime)) continue;
      bool found = false;
      for (const auto& xprime : lExtensions(x))
        if (isLMaximalByDef(xprime) && isDMap(xprime, yprime, f)) found = true;
      s.check(found, "pullback witness missing");
    }
  };
  for (int sx = 1; sx <= pullCap; ++sx)
    for (const auto& x : enumerateScatteredTopologies(sx))
      for (int sy = 1; sy <= pullCap; ++sy)
        for (const auto& y : enumerateScatteredTopologies(sy)) {
          std::vector<int> f(sx, 0);
          while (true) {
            pullbackAt(x, y, f);
            int i = 0;
            while (i < sx && ++f[i] == sy) f[i++] = 0;
            if (i == sx) break;
          }
        }
  if (!opts.quick) {
    auto four = enumerateScatteredTopologies(4);
    for (int trial = 0; trial < 60; ++trial) {
      const FiniteSpace& x = four[rng() % four.size()];
      int sy = 1 + static_cast<int>(rng() % 4);
      auto ys = enumerateScatteredTopologies(sy);
      const FiniteSpace& y = ys[rng() % ys.size()];
      std::vector<int> f(4);
      for (auto& v : f) v = static_cast<int>(rng() % sy);
      pullbackAt(x, y, f);
    }
  }
  return s.result;
}

SuiteResult suiteTopoMagari(const SelftestOptions& opts) {
  Suite s("topo-magari");
  int cap = opts.quick ? 3 : 4;
  for (int size = 1; size <= cap; ++size)
    for (const auto& t : enumerateTopologies(size)) {
      DeltaOperator d = spaceToDelta(t);
      s.check(isMagari(d) == isScattered(t), "Magari-ness differs from scatteredness");
      if (isScattered(t)) {
        s.check(magariToSpace(d) == t, "magariToSpace(spaceToDelta) is not the identity");
        s.check(spaceToDelta(magariToSpace(d)) == d, "spaceToDelta(magariToSpace) is not the identity");
      }
    }
  // exhaustive additive operators on 3 points: Magari ones match the
  // scattered topologies one to one
  {
    int size = 3;
    int magariCount = 0;
    std::vector<uint64_t> sing(size);
    auto rec = [&](auto&& self, int x) -> void {
      if (x == size) {
        std::vector<uint64_t> table(uint64_t{1} << size, 0);
        for (uint64_t a = 0; a < table.size(); ++a)
          for (int p = 0; p < size; ++p)
            if (a & bit(p)) table[a] |= sing[p];
        DeltaOperator d(size, std::move(table));
        if (isMagari(d)) ++magariCount;
        return;
      }
      for (uint64_t v = 0; v < (uint64_t{1} << size); ++v) {
        sing[x] = v;
        self(self, x + 1);
      }
    };
    rec(rec, 0);
    s.check(magariCount == static_cast<int>(enumerateScatteredTopologies(size).size()),
            "Magari operators on 3 points do not match scattered topologies");
  }
  return s.result;
}

SuiteResult suiteTopoDProduct(const SelftestOptions& opts) {
  Suite s("topo-dproduct");
  int cap = opts.quick ? 2 : 3;
  for (int sx = 1; sx <= cap; ++sx)
    for (const auto& x : enumerateScatteredTopologies(sx))
      for (int sy = 1; sy <= cap; ++sy)
        for (const auto& y : enumerateScatteredTopologies(sy)) {
          auto r = dProduct(x, y);
          const FiniteSpace& z = r.space;
          uint64_t dy = dOp(y, y.full());
          s.check(z.size() == sx * static_cast<int>(r.isoPoints.size()) +
                                  static_cast<int>(r.limitPoints.size()),
                  "d-product carrier size");
          s.check(isScattered(z), "d-product of scattered spaces is not scattered");

          // rank equations
          int rx = rankOfSpace(x);
          FiniteSpace dySpace = y.subspace(dy);
          for (int p = 0; p < z.size(); ++p) {
            if (r.pi0[p] >= 0) {
              s.check(rankOfPoint(z, p) == rankOfPoint(x, r.pi0[p]), "rank on Z0");
            } else {
              int j = 0;
              for (size_t q = 0; q < r.limitPoints.size(); ++q)
                if (r.limitPoints[q] == r.pi1[p]) j = static_cast<int>(q);
              s.check(rankOfPoint(z, p) == rx + rankOfPoint(dySpace, j), "rank on Z1");
            }
          }

          // pi1 continuous and open
          for (uint64_t u : y.opens()) {
            uint64_t pre = 0;
            for (int p = 0; p < z.size(); ++p)
              if (u & bit(r.pi1[p])) pre |= bit(p);
            s.check(z.isOpen(pre), "pi1 preimage not open");
          }
          for (uint64_t u : z.opens()) {
            uint64_t img = 0;
            for (int p = 0; p < z.size(); ++p)
              if (u & bit(p)) img |= bit(r.pi1[p]);
            s.check(y.isOpen(img), "pi1 image not open");
          }
          // pi0 is a d-map on Z0
          if (r.z0Mask) {
            FiniteSpace z0 = z.subspace(r.z0Mask);
            std::vector<int> f;
            for (int p = 0; p < z.size(); ++p)
              if (r.z0Mask & bit(p)) f.push_back(r.pi0[p]);
            s.check(isDMap(z0, x, f), "pi0 is not a d-map on Z0");
          }

          // dop lemma (ii): limit points of A in Z1 match limit points in Y
          // of the trace {y : A meets X_y}
          uint64_t subsets = uint64_t{1} << z.size();
          uint64_t checkedSubsets = std::min<uint64_t>(subsets, 256);
          for (uint64_t a = 0; a < checkedSubsets; ++a) {
            uint64_t da = dOp(z, a);
            uint64_t trace = 0;
            for (int p = 0; p < z.size(); ++p)
              if (a & bit(p)) trace |= bit(r.pi1[p]);
            uint64_t dtrace = dOp(y, trace);
            for (int p = 0; p < z.size(); ++p) {
              if (r.pi0[p] >= 0) continue;
              bool lhs = (da >> p) & 1;
              bool rhs = (dtrace >> r.pi1[p]) & 1;
              s.check(lhs == rhs, "dop lemma fails on Z1");
            }
          }

          // prod-lex / prod-lexm: on finite carriers every scattered space is
          // l-maximal, so the product of the (unique) l-extensions is one too;
          // the (lm) criterion covers carriers too large to enumerate against
          if (rankOfSpace(x) >= 1) {
            s.check(isLMaximalByCriterion(z), "prod-lexm fails the criterion");
            if (z.size() <= 4) {
              s.check(isLExtension(z, z), "product is not an l-extension of itself");
              s.check(isLMaximalByDef(z), "prod-lexm fails the definition");
            }
          }

          // prod-plus: (X (x) Y)+ equals (X+ x iso(Y)) + (dY)+ on the carrier
          if (rankOfSpace(x) >= 1) {
            FiniteSpace lhs = plusTopology(z);
            FiniteSpace xplus = plusTopology(x);
            FiniteSpace dyPlus = plusTopology(dySpace);
            std::vector<uint64_t> opens;
            uint64_t zsubsets = uint64_t{1} << z.size();
            int blocks = static_cast<int>(r.isoPoints.size());
            uint64_t xfull = x.full();
            for (uint64_t wset = 0; wset < zsubsets; ++wset) {
              bool ok = true;
              for (int b = 0; b < blocks && ok; ++b)
                if (!xplus.isOpen((wset >> (b * sx)) & xfull)) ok = false;
              if (ok && !dyPlus.isOpen(wset >> (blocks * sx))) ok = false;
              if (ok) opens.push_back(wset);
            }
            s.check(lhs == FiniteSpace(z.size(), opens), "prod-plus homeomorphism fails");
          }
        }
  return s.result;
}

SuiteResult suiteTopoGLP(const SelftestOptions& opts) {
  Suite s("topo-glp");
  std::mt19937_64 rng(opts.seed * 7 + 9);
  FormulaRef p = Formula::var("p");
  FormulaRef q = Formula::var("q");
  std::vector<FormulaRef> axioms = {
      Formula::implies(Formula::box(0, Formula::implies(p, q)),
                       Formula::implies(Formula::box(0, p), Formula::box(0, q))),
      Formula::implies(Formula::box(0, Formula::implies(Formula::box(0, p), p)), Formula::box(0, p)),
      Formula::implies(Formula::box(1, Formula::implies(Formula::box(1, p), p)), Formula::box(1, p)),
      Formula::implies(Formula::box(0, p), Formula::box(1, p)),
      Formula::implies(Formula::diamond(0, p), Formula::box(1, Formula::diamond(0, p))),
  };
  int cap = opts.quick ? 2 : 3;
  auto spaces = enumerateGLPSpaces(cap, 2);
  for (const auto& sp : spaces) {
    uint64_t full = sp.topologies[0].full();
    for (int trial = 0; trial < 6; ++trial) {
      std::map<std::string, uint64_t> val{{"p", rng() & full}, {"q", rng() & full}};
      for (const auto& ax : axioms)
        s.check(evalPolySpace(sp, val, *ax) == full,
                "GLP axiom fails on a GLP space: " + printFormula(*ax));
    }
    // neighbor: the induced operators validate GLP and regenerate the space
    std::vector<DeltaOperator> deltas;
    for (const auto& t : sp.topologies) deltas.push_back(spaceToDelta(t));
    auto back = neighborhoodToGLPSpace(deltas);
    s.check(back.has_value(), "GLP space's operators rejected");
    if (back) {
      bool same = back->topologies.size() == sp.topologies.size();
      for (size_t i = 0; same && i < sp.topologies.size(); ++i)
        same = back->topologies[i] == sp.topologies[i];
      s.check(same, "operators do not regenerate the GLP space");
    }
  }
  // operator families: a GLP one is accepted, a non-GLP one is rejected
  {
    DeltaOperator d0 = spaceToDelta(FiniteSpace::discrete(2));
    DeltaOperator d1 = spaceToDelta(FiniteSpace::sierpinski());
    auto good = neighborhoodToGLPSpace({d1, d0});
    s.check(good.has_value() && good->topologies[0] == FiniteSpace::sierpinski(),
            "valid operator family rejected");
    // discrete then Sierpinski breaks the inclusion tau_0 <= tau_1
    s.check(!neighborhoodToGLPSpace({d0, d1}).has_value(), "non-GLP family accepted");
  }
  return s.result;
}

SuiteResult suiteMainTheoremInstances(const SelftestOptions& opts) {
  Suite s("glp-morphism-transfer");
  std::mt19937_64 rng(opts.seed * 7 + 10);

  struct Instance {
    PolySpace space;
    JTree tree;
    std::vector<int> f;
  };
  std::vector<Instance> instances;

  {  // single reflexive-free point
    Instance inst;
    inst.space.size = 1;
    inst.space.topologies = {FiniteSpace::discrete(1), FiniteSpace::discrete(1)};
    inst.tree = makeJTree(1, 1);
    inst.f = {0};
    instances.push_back(std::move(inst));
  }
  {  // Sierpinski with discrete refinement onto a single R_0 edge
    Instance inst;
    inst.space.size = 2;
    inst.space.topologies = {FiniteSpace::sierpinski(), FiniteSpace::discrete(2)};
    inst.tree = makeJTree(1, 2);
    inst.tree.rel[0][1] = bit(0);  // w1 R_0 w0
    inst.f = {0, 1};
    instances.push_back(std::move(inst));
  }
  {  // left topology on 3 points onto the transitive 3-chain
    Instance inst;
    inst.space.size = 3;
    inst.space.topologies = {FiniteSpace::leftTopology(3), FiniteSpace::discrete(3)};
    inst.tree = makeJTree(1, 3);
    inst.tree.rel[0][2] = bit(1) | bit(0);  // w2 R_0 w1, w2 R_0 w0
    inst.tree.rel[0][1] = bit(0);           // w1 R_0 w0
    inst.f = {0, 1, 2};
    instances.push_back(std::move(inst));
  }
  {  // composition of a componentwise d-map with a morphism: two isolated
    // points collapse onto the leaf, so the morphism has a two-point fiber
    Instance inst;
    inst.space.size = 3;
    inst.space.topologies = {FiniteSpace(3, {0b000, 0b001, 0b010, 0b011, 0b111}),
                             FiniteSpace::discrete(3)};
    inst.tree = makeJTree(1, 2);
    inst.tree.rel[0][1] = bit(0);  // w1 R_0 w0
    inst.f = {0, 0, 1};
    // g = rank is a d-map componentwise, f the Sierpinski instance's morphism
    std::vector<int> g = {0, 0, 1};
    s.check(isDMap(inst.space.topologies[0], FiniteSpace::sierpinski(), g),
            "composition premise: g is not a d-map");
    instances.push_back(std::move(inst));
  }

  std::vector<FormulaRef> corpus;
  {
    FormulaRef p = Formula::var("p");
    corpus = {
        parseFormula("[0]p -> [1]p"), parseFormula("[1]p -> [0]p"),
        parseFormula("[0]([0]p -> p) -> [0]p"), parseFormula("[0]p -> [1][0]p"),
        parseFormula("[0]p -> [0][1]p"), parseFormula("<0>p -> [1]<0>p"),
        parseFormula("[0]false"), parseFormula("<0>true"), parseFormula("p -> [0]p"),
        parseFormula("[1]false -> [0]false"),
    };
    for (int i = 0; i < 6; ++i) corpus.push_back(randomFormula(rng, 8, 1, {"p", "q"}));
  }

  for (const auto& inst : instances) {
    s.check(isGLPSpace(inst.space), "transfer instance space is not a GLP space");
    s.check(isValidJTree(inst.tree), "transfer instance tree invalid");
    s.check(isJnMorphism(inst.space, inst.tree, inst.f), "transfer instance map is not a morphism");
    for (const auto& phi : corpus) {
      auto mm = maxModality(*phi);
      if (mm && *mm > inst.tree.n) continue;
      // X validates phi iff T validates M+(phi) -> phi
      FormulaRef reduced = Formula::implies(reductionMplus(phi), phi);
      auto vars = variablesOf(*phi);
      uint64_t fullX = inst.space.topologies[0].full();
      uint64_t fullT = bit(inst.tree.size()) - 1;
      bool xValid = true;
      int nv = static_cast<int>(vars.size());
      for (uint64_t combo = 0; combo < (uint64_t{1} << (nv * inst.space.size)); ++combo) {
        std::map<std::string, uint64_t> val;
        for (int j = 0; j < nv; ++j) val[vars[j]] = (combo >> (j * inst.space.size)) & fullX;
        if (evalPolySpace(inst.space, val, *phi) != fullX) {
          xValid = false;
          break;
        }
      }
      bool tValid = true;
      for (uint64_t combo = 0; combo < (uint64_t{1} << (nv * inst.tree.size())); ++combo) {
        KripkeModel m;
        m.frame = inst.tree;
        for (int j = 0; j < nv; ++j)
          m.valuation[vars[j]] = (combo >> (j * inst.tree.size())) & fullT;
        if (evalModel(m, *reduced) != fullT) {
          tValid = false;
          break;
        }
      }
      s.check(xValid == tValid, "morphism transfer fails for " + printFormula(*phi));
    }
  }

  // the (j3)/(j4) pair is equivalent to the punctured-neighborhood condition,
  // also on random non-morphisms
  for (int trial = 0; trial < opts.samples / 4; ++trial) {
    const auto& inst = instances[rng() % instances.size()];
    std::vector<int> f(inst.space.size);
    for (auto& v : f) v = static_cast<int>(rng() % inst.tree.size());
    s.check(jMorphismConditions34(inst.space, inst.tree, f) ==
                jMorphismStarCondition(inst.space, inst.tree, f),
            "(j3)&(j4) vs the star condition");
  }
  return s.result;
}

SuiteResult suiteConstruction(const SelftestOptions& opts) {
  Suite s("construction");
  std::mt19937_64 rng(opts.seed * 7 + 11);

  // pure chains of height h have lambda = w^h
  for (int h = 0; h <= 4; ++h) {
    JTree t = makeJTree(0, h + 1);
    for (int x = 0; x < h; ++x)
      for (int y = x + 1; y <= h; ++y) t.rel[0][x] |= bit(y);
    auto m = buildOrdinalModel(t);
    s.check(m.lambda == omegaPow(Ordinal::nat(h)),
            "chain of height " + std::to_string(h) + " has lambda " + printOrdinal(m.lambda));
  }

  int sizeCap = opts.quick ? 3 : 4;
  for (int n = 0; n <= 2; ++n)
    for (int size = 1; size <= sizeCap; ++size)
      for (const auto& t : enumerateRootedJTrees(n, size)) {
        auto m = buildOrdinalModel(t);
        auto samples = sampleOrdinals(m.lambda, opts.quick ? 40 : 120, opts.seed + size, true);
        auto rh = checkRankHeight(m, samples);
        s.check(rh.pass, "rank-height fails: " + (rh.failures.empty() ? "" : rh.failures[0]));
        auto su = checkSuitability(m, samples);
        s.check(su.pass, "suitability fails: " + (su.failures.empty() ? "" : su.failures[0]));
        auto ls = checkLocalStructure(m, samples);
        s.check(ls.pass, "local structure fails: " + (ls.failures.empty() ? "" : ls.failures[0]));

        // GLIter periodicity at the top level
        if (m.recipe->kind == ModelRecipe::Kind::GLIter && !m.recipe->kappa.isZero()) {
          const Ordinal& kappa = m.recipe->kappa;
          for (int trial = 0; trial < 8; ++trial) {
            Ordinal beta = add(divRem(randomSmallOrdinal(rng), kappa).second, Ordinal::nat(1));
            uint64_t q1 = 1 + rng() % 4, q2 = 1 + rng() % 4;
            Ordinal a1 = add(mul(kappa, Ordinal::nat(q1)), beta);
            Ordinal a2 = add(mul(kappa, Ordinal::nat(q2)), beta);
            if (cmp(a1, m.lambda) == OrdCmp::Less && cmp(a2, m.lambda) == OrdCmp::Less)
              s.check(evalMap(m, a1) == evalMap(m, a2), "GLIter periodicity fails");
          }
        }
        // DProd: limit multiples of kappa land in the root's 1-sheet
        if (m.recipe->kind == ModelRecipe::Kind::DProd) {
          uint64_t sheet0 = bit(m.recipe->root) | unionStar(t, 1, m.recipe->root);
          for (int trial = 0; trial < 8; ++trial) {
            Ordinal q = divRem(randomSmallOrdinal(rng), m.recipe->ypart->lambda).second;
            if (!isLimit(q)) continue;
            Ordinal a = mul(m.recipe->kappa, q);
            if (!a.isZero() && cmp(a, m.lambda) != OrdCmp::Greater)
              s.check((sheet0 >> evalMap(m, a)) & 1, "limit block lands outside the 1-sheet");
          }
        }
      }

  // recipeSum block dispatch
  {
    JTree single = makeJTree(0, 1);
    JTree edge = makeJTree(0, 2);
    edge.rel[0][0] = bit(1);
    auto m1 = buildOrdinalModel(single);
    auto m2 = buildOrdinalModel(edge);
    auto sum = recipeSum({m1, m2});
    s.check(sum.lambda == Ordinal::omega(), "1 + w must be w");
    s.check(sum.eval(Ordinal::nat(1)) == std::make_pair(0, 0), "block 1 dispatch");
    s.check(sum.eval(Ordinal::nat(5)).first == 1, "block 2 dispatch");
    s.check(sum.eval(Ordinal::omega()) == std::make_pair(1, 0), "top of block 2");
  }
  return s.result;
}

}  // namespace

std::vector<SuiteResult> runSelftest(const SelftestOptions& opts) {
  std::vector<SuiteResult> out;
  out.push_back(suiteFormulaRoundtrip(opts));
  out.push_back(suiteFormulaReduction(opts));
  out.push_back(suiteOrdinalAlgebra(opts));
  out.push_back(suiteOrdinalRank(opts));
  out.push_back(suiteKripkeFrames(opts));
  out.push_back(suiteKripkeSoundness(opts));
  out.push_back(suiteKripkeDecision(opts));
  out.push_back(suiteTopoDerivedSet(opts));
  out.push_back(suiteTopoLMax(opts));
  out.push_back(suiteTopoMagari(opts));
  out.push_back(suiteTopoDProduct(opts));
  out.push_back(suiteTopoGLP(opts));
  out.push_back(suiteMainTheoremInstances(opts));
  out.push_back(suiteConstruction(opts));
  return out;
}

}  // namespace glpwb
