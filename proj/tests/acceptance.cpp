// Acceptance suite: one criterion per section, one pass/fail line each.
// Exit code 0 iff every criterion passes within its time budget.

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "glpwb/construction.hpp"
#include "glpwb/finitetop.hpp"
#include "glpwb/formula.hpp"
#include "glpwb/json_io.hpp"
#include "glpwb/kripke.hpp"
#include "glpwb/ordinal.hpp"
#include "glpwb/selftest.hpp"

using namespace glpwb;
using Clock = std::chrono::steady_clock;

namespace {

uint64_t bit(int i) { return uint64_t{1} << i; }

struct Criterion {
  int number;
  std::string title;
  double limitSeconds;
  std::function<bool(std::string&)> run;
};

bool g_allPass = true;

void runCriterion(const Criterion& c) {
  auto start = Clock::now();
  std::string detail;
  bool ok = false;
  try {
    ok = c.run(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (c.limitSeconds > 0 && secs > c.limitSeconds) {
    ok = false;
    detail += (detail.empty() ? "" : "; ") + std::string("over time budget");
  }
  g_allPass = g_allPass && ok;
  char line[512];
  std::snprintf(line, sizeof(line), "%s criterion %d: %s (%.1fs)%s%s", ok ? "PASS" : "FAIL", c.number,
                c.title.c_str(), secs, detail.empty() ? "" : " -- ", detail.c_str());
  std::cout << line << std::endl;
}

// ---------------------------------------------------------------------------
// criterion 1: decision corpus

std::vector<FormulaRef> axiomBodies() {
  // all formulas of parse-tree height <= 2 over p, q, false with modalities <= 2
  std::vector<FormulaRef> h1 = {Formula::var("p"), Formula::var("q"), Formula::bottom()};
  std::vector<FormulaRef> out = h1;
  for (const auto& a : h1) {
    out.push_back(Formula::neg(a));
    for (int n = 0; n <= 2; ++n) {
      out.push_back(Formula::box(n, a));
      out.push_back(Formula::diamond(n, a));
    }
    for (const auto& b : h1) {
      out.push_back(Formula::conj(a, b));
      out.push_back(Formula::disj(a, b));
      out.push_back(Formula::implies(a, b));
    }
  }
  return out;
}

bool criterion1(std::string& detail) {
  auto bodies = axiomBodies();
  DecideOptions opts;  // default bound, as the CLI uses
  int checked = 0;
  auto expectValid = [&](const FormulaRef& f) -> bool {
    ++checked;
    if (!decideGLP(*f, opts).refuted()) return true;
    detail = "refuted instance: " + printFormula(*f);
    return false;
  };

  for (const auto& a : bodies) {
    // (i) Boolean tautologies over the bodies
    if (!expectValid(Formula::disj(a, Formula::neg(a)))) return false;
    if (!expectValid(Formula::implies(Formula::neg(Formula::neg(a)), a))) return false;
    if (!expectValid(Formula::implies(a, a))) return false;
    // (iii) Loeb
    for (int n = 0; n <= 2; ++n)
      if (!expectValid(Formula::implies(Formula::box(n, Formula::implies(Formula::box(n, a), a)),
                                        Formula::box(n, a))))
        return false;
    // (iv), (v), (vii) for m < n; (vi) for m <= n
    for (int m = 0; m <= 2; ++m)
      for (int n = m; n <= 2; ++n) {
        if (!expectValid(Formula::implies(Formula::box(m, a), Formula::box(n, Formula::box(m, a)))))
          return false;  // (vi)
        if (n == m) continue;
        if (!expectValid(Formula::implies(Formula::box(m, a), Formula::box(n, a)))) return false;
        if (!expectValid(Formula::implies(Formula::diamond(m, a),
                                          Formula::box(n, Formula::diamond(m, a)))))
          return false;
        if (!expectValid(Formula::implies(Formula::box(m, a), Formula::box(m, Formula::box(n, a)))))
          return false;  // (vii)
      }
  }
  for (const auto& a : bodies)
    for (const auto& b : bodies) {
      // (i) two-body tautologies
      if (!expectValid(Formula::implies(Formula::conj(a, b), a))) return false;
      if (!expectValid(Formula::implies(a, Formula::disj(b, a)))) return false;
      if (!expectValid(Formula::implies(a, Formula::implies(b, a)))) return false;
      // (ii) distribution, per modality
      for (int n = 0; n <= 2; ++n)
        if (!expectValid(Formula::implies(
                Formula::box(n, Formula::implies(a, b)),
                Formula::implies(Formula::box(n, a), Formula::box(n, b)))))
          return false;
    }

  for (const char* text : {"[1]p -> [0]p", "[0]false", "<0>true", "[1]false -> [0]false"}) {
    ++checked;
    auto res = decideGLP(*parseFormula(text), opts);
    if (!res.refuted()) {
      detail = std::string("expected countermodel: ") + text;
      return false;
    }
  }
  detail = std::to_string(checked) + " instances";
  return true;
}

// ---------------------------------------------------------------------------
// criterion 2: reduction fidelity

bool criterion2(std::string& detail) {
  std::mt19937_64 rng(20240801);
  DecideOptions opts;
  opts.bound = 5;
  auto glpSpaces = enumerateGLPSpaces(2, 3);
  {
    auto three = enumerateGLPSpaces(3, 3);
    glpSpaces.insert(glpSpaces.end(), three.begin(), three.end());
    auto one = enumerateGLPSpaces(1, 3);
    glpSpaces.insert(glpSpaces.end(), one.begin(), one.end());
  }
  int refutedBoth = 0, spaceRefuted = 0;
  for (int i = 0; i < 200; ++i) {
    FormulaRef f = randomFormula(rng, 12, 2, {"p", "q"});
    auto direct = decideGLP(*f, opts);
    auto viaJ = decideJ(*Formula::implies(reductionMplus(f), f), opts);
    if (direct.refuted() != viaJ.refuted()) {
      detail = "reduction disagreement on " + printFormula(*f);
      return false;
    }
    // topological side: refutation on a small GLP space must imply a Kripke
    // refutation
    bool onSpace = false;
    auto vars = variablesOf(*f);
    int nv = static_cast<int>(vars.size());
    for (const auto& sp : glpSpaces) {
      uint64_t full = sp.topologies[0].full();
      for (uint64_t combo = 0; combo < (uint64_t{1} << (nv * sp.size)) && !onSpace; ++combo) {
        std::map<std::string, uint64_t> val;
        for (int j = 0; j < nv; ++j) val[vars[j]] = (combo >> (j * sp.size)) & full;
        if (evalPolySpace(sp, val, *f) != full) onSpace = true;
      }
      if (onSpace) break;
    }
    if (onSpace) {
      ++spaceRefuted;
      if (!direct.refuted()) {
        detail = "refuted on a GLP space but not by the search: " + printFormula(*f);
        return false;
      }
    }
    if (direct.refuted()) ++refutedBoth;
  }
  detail = std::to_string(refutedBoth) + " Kripke-refuted, " + std::to_string(spaceRefuted) +
           " space-refuted of 200";
  return true;
}

// ---------------------------------------------------------------------------
// criterion 3: appendix round trip

bool criterion3(std::string& detail) {
  int scatteredTotal = 0;
  for (int size = 1; size <= 4; ++size) {
    auto topos = enumerateTopologies(size);
    // cross-check every family by revalidating closure through the ctor
    for (const auto& t : topos) {
      FiniteSpace again(t.size(), t.opens());
      if (!(again == t)) {
        detail = "closure verification disagrees with the enumerator";
        return false;
      }
      DeltaOperator d = spaceToDelta(t);
      if (isMagari(d) != isScattered(t)) {
        detail = "scattered <-> Magari fails at size " + std::to_string(size);
        return false;
      }
      if (isScattered(t)) {
        ++scatteredTotal;
        if (!(magariToSpace(d) == t)) {
          detail = "magariToSpace(spaceToDelta) misses the identity";
          return false;
        }
        if (!(spaceToDelta(magariToSpace(d)) == d)) {
          detail = "spaceToDelta(magariToSpace) misses the identity";
          return false;
        }
      }
    }
  }
  size_t n4 = enumerateTopologies(4).size();
  size_t n3 = enumerateTopologies(3).size();
  size_t n2 = enumerateTopologies(2).size();
  if (n2 != 4 || n3 != 29 || n4 != 355) {
    detail = "labeled topology counts off: " + std::to_string(n2) + ", " + std::to_string(n3) + ", " +
             std::to_string(n4);
    return false;
  }
  detail = "355 topologies on 4 points, " + std::to_string(scatteredTotal) + " scattered in total";
  return true;
}

// ---------------------------------------------------------------------------
// criterion 4: l-maximality criterion

bool criterion4(std::string& detail) {
  int count = 0;
  for (int size = 1; size <= 4; ++size)
    for (const auto& t : enumerateScatteredTopologies(size)) {
      ++count;
      if (isLMaximalByDef(t) != isLMaximalByCriterion(t)) {
        detail = "criterion mismatch at size " + std::to_string(size);
        return false;
      }
    }
  detail = std::to_string(count) + " scattered spaces";
  return true;
}

// ---------------------------------------------------------------------------
// criterion 5: d-product suite

bool criterion5(std::string& detail) {
  int pairs = 0;
  for (int sx = 1; sx <= 3; ++sx)
    for (const auto& x : enumerateScatteredTopologies(sx))
      for (int sy = 1; sy <= 3; ++sy)
        for (const auto& y : enumerateScatteredTopologies(sy)) {
          ++pairs;
          auto r = dProduct(x, y);
          const FiniteSpace& z = r.space;
          uint64_t dy = dOp(y, y.full());
          int iso = sy - std::popcount(dy);
          if (z.size() != sx * iso + std::popcount(dy)) {
            detail = "carrier size law fails";
            return false;
          }
          FiniteSpace dySpace = y.subspace(dy);
          int rx = rankOfSpace(x);
          for (int pnt = 0; pnt < z.size(); ++pnt) {
            if (r.pi0[pnt] >= 0) {
              if (rankOfPoint(z, pnt) != rankOfPoint(x, r.pi0[pnt])) {
                detail = "rank equation fails on the copy part";
                return false;
              }
            } else {
              int j = -1;
              for (size_t q = 0; q < r.limitPoints.size(); ++q)
                if (r.limitPoints[q] == r.pi1[pnt]) j = static_cast<int>(q);
              if (rankOfPoint(z, pnt) != rx + rankOfPoint(dySpace, j)) {
                detail = "rank equation fails on the limit part";
                return false;
              }
            }
          }
          // pi1 continuous and open; pi0 a d-map on Z0
          for (uint64_t u : y.opens()) {
            uint64_t pre = 0;
            for (int pnt = 0; pnt < z.size(); ++pnt)
              if (u & bit(r.pi1[pnt])) pre |= bit(pnt);
            if (!z.isOpen(pre)) {
              detail = "pi1 not continuous";
              return false;
            }
          }
          for (uint64_t u : z.opens()) {
            uint64_t img = 0;
            for (int pnt = 0; pnt < z.size(); ++pnt)
              if (u & bit(pnt)) img |= bit(r.pi1[pnt]);
            if (!y.isOpen(img)) {
              detail = "pi1 not open";
              return false;
            }
          }
          if (r.z0Mask) {
            FiniteSpace z0 = z.subspace(r.z0Mask);
            std::vector<int> f;
            for (int pnt = 0; pnt < z.size(); ++pnt)
              if (r.z0Mask & bit(pnt)) f.push_back(r.pi0[pnt]);
            if (!isDMap(z0, x, f)) {
              detail = "pi0 is not a d-map on Z0";
              return false;
            }
          }
          // prod-plus under its premises (rank of X a successor, both
          // factors l-maximal; finite spaces always are)
          if (rx >= 1) {
            FiniteSpace lhs = plusTopology(z);
            FiniteSpace xplus = plusTopology(x);
            FiniteSpace dyPlus = plusTopology(dySpace);
            std::vector<uint64_t> opens;
            for (uint64_t wset = 0; wset < (uint64_t{1} << z.size()); ++wset) {
              bool ok = true;
              for (int b = 0; b < iso && ok; ++b)
                if (!xplus.isOpen((wset >> (b * sx)) & x.full())) ok = false;
              if (ok && !dyPlus.isOpen(wset >> (iso * sx))) ok = false;
              if (ok) opens.push_back(wset);
            }
            if (!(lhs == FiniteSpace(z.size(), opens))) {
              detail = "prod-plus homeomorphism fails";
              return false;
            }
          }
        }
  detail = std::to_string(pairs) + " pairs";
  return true;
}

// ---------------------------------------------------------------------------
// criterion 6: plus-topology laws

bool criterion6(std::string& detail) {
  for (int k = 1; k <= 6; ++k)
    if (!(plusTopology(FiniteSpace::leftTopology(k)) == FiniteSpace::discrete(k))) {
      detail = "left topology plus is not discrete at size " + std::to_string(k);
      return false;
    }
  int spaces = 0;
  for (int size = 1; size <= 4; ++size)
    for (const auto& t : enumerateScatteredTopologies(size)) {
      ++spaces;
      FiniteSpace plus = plusTopology(t);
      for (int x = 0; x < size; ++x) {
        // r vanishes on the finite ordinals, so the rank of tau+ must too
        Ordinal expected = intervalRank(Ordinal::nat(rankOfPoint(t, x)));
        if (!(Ordinal::nat(rankOfPoint(plus, x)) == expected)) {
          detail = "plus rank differs from r o rho";
          return false;
        }
      }
    }
  detail = std::to_string(spaces) + " scattered spaces up to 4 points";
  return true;
}

// ---------------------------------------------------------------------------
// criterion 7: construction skeleton

bool criterion7(std::string& detail) {
  int models = 0;
  auto runOne = [&](const JTree& t, int idx) -> bool {
    auto m = buildOrdinalModel(t);
    ++models;
    auto samples = sampleOrdinals(m.lambda, 1000, 77 + idx, true);
    if (!checkSuitability(m, samples).pass) {
      detail = "suitability fails on a frame of size " + std::to_string(t.size());
      return false;
    }
    if (!checkRankHeight(m, samples).pass) {
      detail = "rank-height fails on a frame of size " + std::to_string(t.size());
      return false;
    }
    return true;
  };
  int idx = 0;
  for (int size = 1; size <= 5; ++size)
    for (const auto& t : enumerateRootedJTrees(1, size))
      if (!runOne(t, ++idx)) return false;
  for (int size = 1; size <= 4; ++size)
    for (const auto& t : enumerateRootedJTrees(2, size))
      if (!runOne(t, ++idx)) return false;
  for (int h = 0; h <= 4; ++h) {
    JTree t = makeJTree(0, h + 1);
    for (int x = 0; x <= h; ++x)
      for (int y = x + 1; y <= h; ++y) t.rel[0][x] |= bit(y);
    auto m = buildOrdinalModel(t);
    if (!(m.lambda == omegaPow(Ordinal::nat(h)))) {
      detail = "chain of height " + std::to_string(h) + " gives " + printOrdinal(m.lambda);
      return false;
    }
  }
  detail = std::to_string(models) + " models, 1000 samples each";
  return true;
}

// ---------------------------------------------------------------------------
// criterion 8: end-to-end CLI demo

struct CliResult {
  int exitCode;
  std::string out;
};

CliResult runCli(const std::string& args) {
  std::string cmd = std::string(GLPWB_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  CliResult res{-1, {}};
  if (!pipe) return res;
  char buf[4096];
  while (size_t got = fread(buf, 1, sizeof(buf), pipe)) res.out.append(buf, got);
  int status = pclose(pipe);
  res.exitCode = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return res;
}

bool criterion8(std::string& detail) {
  auto refuted = runCli("refute \"[1]p -> [0]p\" --json");
  if (refuted.exitCode != 0) {
    detail = "refute exited with " + std::to_string(refuted.exitCode);
    return false;
  }
  Json j = Json::parse(refuted.out);
  if (j["result"] != "refuted") {
    detail = "expected a refutation";
    return false;
  }
  for (const auto& check : j["checks"])
    if (!check["pass"].get<bool>()) {
      detail = "ordinal model check failed: " + check["name"].get<std::string>();
      return false;
    }
  // re-verify the emitted countermodel independently
  JTree frame = jtreeFromJson(j["countermodel"]["frame"]);
  if (!isValidJTree(frame)) {
    detail = "emitted frame is invalid";
    return false;
  }
  KripkeModel m;
  m.frame = frame;
  for (auto it = j["countermodel"]["valuation"].begin(); it != j["countermodel"]["valuation"].end(); ++it) {
    uint64_t mask = 0;
    for (const auto& w : it.value())
      for (int i = 0; i < frame.size(); ++i)
        if (frame.names[i] == w.get<std::string>()) mask |= bit(i);
    m.valuation[it.key()] = mask;
  }
  int world = -1;
  for (int i = 0; i < frame.size(); ++i)
    if (frame.names[i] == j["countermodel"]["world"].get<std::string>()) world = i;
  FormulaRef f = parseFormula("[1]p -> [0]p");
  if ((evalModel(m, *f) >> world) & 1) {
    detail = "emitted countermodel does not refute the formula";
    return false;
  }

  auto none = runCli("refute \"[0]p -> [1]p\" --json");
  if (none.exitCode != 0 || Json::parse(none.out)["result"] != "none") {
    detail = "valid formula did not come back as none";
    return false;
  }

  auto decide = runCli("decide --logic glp \"[0]p -> [1]p\"");
  if (decide.exitCode != 0 || decide.out.rfind("valid", 0) != 0) {
    detail = "decide output: " + decide.out;
    return false;
  }
  // identical inputs and flags yield byte-identical structured output
  auto again = runCli("refute \"[1]p -> [0]p\" --json");
  if (again.out != refuted.out) {
    detail = "output is not deterministic";
    return false;
  }
  detail = "lambda = " + j["ordinalModel"]["lambda"].get<std::string>();
  return true;
}

// ---------------------------------------------------------------------------
// criterion 9: ordinal algebra property suite

bool criterion9(std::string& detail) {
  std::mt19937_64 rng(424242);
  for (int i = 0; i < 10000; ++i) {
    Ordinal a = randomSmallOrdinal(rng);
    Ordinal b = randomSmallOrdinal(rng);
    Ordinal c = randomSmallOrdinal(rng);
    if (!(add(add(a, b), c) == add(a, add(b, c)))) {
      detail = "associativity of addition fails";
      return false;
    }
    if (!(mul(a, add(b, c)) == add(mul(a, b), mul(a, c)))) {
      detail = "left distributivity fails";
      return false;
    }
    if (!b.isZero()) {
      auto [q, rem] = divRem(a, b);
      if (!(add(mul(b, q), rem) == a) || !(rem < b)) {
        detail = "divRem reconstruction fails";
        return false;
      }
    }
    if (((a < b) + (a == b) + (a > b)) != 1) {
      detail = "trichotomy fails";
      return false;
    }
    if (a <= b && b <= c && !(a <= c)) {
      detail = "transitivity fails";
      return false;
    }
  }
  detail = "10000 seeded triples";
  return true;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {1, "GLP decision corpus (axiom schemata valid, non-theorem corpus refuted)", 60, criterion1},
      {2, "reduction fidelity against small GLP polyspaces", 600, criterion2},
      {3, "Magari round trip over all topologies on <= 4 points", 300, criterion3},
      {4, "l-maximality criterion agrees with the definition", 300, criterion4},
      {5, "d-product laws on all scattered pairs <= 3 points", 300, criterion5},
      {6, "plus-topology laws", 300, criterion6},
      {7, "construction skeleton over small rooted trees", 300, criterion7},
      {8, "end-to-end refutation pipeline through the CLI", 120, criterion8},
      {9, "ordinal arithmetic property suite", 30, criterion9},
  };
  for (const auto& c : criteria) runCriterion(c);
  std::cout << (g_allPass ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL") << std::endl;
  return g_allPass ? 0 : 1;
}
