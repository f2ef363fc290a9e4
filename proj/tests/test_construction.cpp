#include <doctest.h>

#include <random>

#include "glpwb/construction.hpp"
#include "glpwb/selftest.hpp"

using namespace glpwb;

namespace {

uint64_t bit(int i) { return uint64_t{1} << i; }

Ordinal o(const std::string& text) { return parseOrdinal(text); }

JTree chain0(int height) {  // transitive R_0 chain rooted at w0
  JTree t = makeJTree(0, height + 1);
  for (int x = 0; x <= height; ++x)
    for (int y = x + 1; y <= height; ++y) t.rel[0][x] |= bit(y);
  return t;
}

}  // namespace

TEST_CASE("single node model") {
  auto m = buildOrdinalModel(makeJTree(0, 1));
  CHECK(m.lambda == Ordinal::nat(1));
  CHECK(evalMap(m, Ordinal::nat(1)) == 0);
  CHECK_THROWS_AS(evalMap(m, Ordinal::nat(2)), DomainError);
  CHECK_THROWS_AS(evalMap(m, Ordinal()), DomainError);

  auto m1 = buildOrdinalModel(makeJTree(1, 1));
  CHECK(m1.lambda == Ordinal::nat(1));
  auto m2 = buildOrdinalModel(makeJTree(2, 1));
  CHECK(m2.lambda == Ordinal::nat(1));
}

TEST_CASE("one R0 edge: lambda = w, blocks map to the child") {
  auto m = buildOrdinalModel(chain0(1));
  CHECK(m.lambda == Ordinal::omega());
  for (uint64_t k = 1; k <= 20; ++k) CHECK(evalMap(m, Ordinal::nat(k)) == 1);
  CHECK(evalMap(m, Ordinal::omega()) == 0);
}

TEST_CASE("chain of height two: lambda = w^2") {
  auto m = buildOrdinalModel(chain0(2));
  CHECK(m.lambda == o("w^2"));
  // inside a block: finite offsets land on the leaf
  CHECK(evalMap(m, o("w*3 + 5")) == 2);
  CHECK(evalMap(m, Ordinal::nat(7)) == 2);
  // block tops w*q with successor q land on the middle node
  CHECK(evalMap(m, o("w*4")) == 1);
  CHECK(evalMap(m, Ordinal::omega()) == 1);
  CHECK(evalMap(m, o("w^2")) == 0);
}

TEST_CASE("pure chains of height h give w^h") {
  for (int h = 0; h <= 4; ++h) {
    auto m = buildOrdinalModel(chain0(h));
    CHECK(m.lambda == omegaPow(Ordinal::nat(h)));
  }
}

TEST_CASE("one R1 edge: lambda = w^w via the lift") {
  JTree t = makeJTree(1, 2);
  t.rel[1][0] = bit(1);
  auto m = buildOrdinalModel(t);
  CHECK(m.lambda == o("w^w"));
  CHECK(evalMap(m, o("w^w")) == 0);
  CHECK(evalMap(m, o("w^5")) == 1);
  CHECK(evalMap(m, Ordinal::nat(1)) == 1);
  CHECK(evalMap(m, o("w^3*2 + w + 4")) == 1);
  // every alpha below lambda maps to the leaf
  for (const auto& a : sampleOrdinals(m.lambda, 300, 99))
    if (a != m.lambda) CHECK(evalMap(m, a) == 1);
}

TEST_CASE("branching at R0: two leaves alternate") {
  JTree t = makeJTree(1, 3);
  t.rel[0][0] = bit(1) | bit(2);
  auto m = buildOrdinalModel(t);
  // kappa = 2, the 1-sheet of the root is a singleton, so lambda = 2 * w = w
  CHECK(m.lambda == Ordinal::omega());
  CHECK(evalMap(m, Ordinal::nat(1)) == 1);
  CHECK(evalMap(m, Ordinal::nat(2)) == 2);
  CHECK(evalMap(m, Ordinal::nat(3)) == 1);
  CHECK(evalMap(m, Ordinal::nat(4)) == 2);
  CHECK(evalMap(m, Ordinal::omega()) == 0);
}

TEST_CASE("R1 edge with R0 child below") {
  // root w0 with R0 child w1; w0 R1 w2 forces w2 R0 w1 by condition 2
  JTree t = makeJTree(1, 3);
  t.rel[1][0] = bit(2);
  t.rel[0][0] = bit(1);
  t.rel[0][2] = bit(1);
  REQUIRE(isValidJTree(t));
  auto m = buildOrdinalModel(t);
  // the single-node subtree at w1 gives kappa = 1; the root 1-sheet {w0, w2}
  // has lambda_0 = w and lifts to w^w, so lambda = 1 * w^w
  CHECK(m.lambda == o("w^w"));
  CHECK(evalMap(m, m.lambda) == 0);
  CHECK(evalMap(m, Ordinal::nat(3)) == 1);   // successor multiples of kappa
  CHECK(evalMap(m, o("w*2")) == 2);          // limits land in the 1-sheet
  CHECK(evalMap(m, o("w^3")) == 2);
  auto samples = sampleOrdinals(m.lambda, 400, 5, true);
  CHECK(checkSuitability(m, samples).pass);
  CHECK(checkRankHeight(m, samples).pass);
  CHECK(checkLocalStructure(m, samples).pass);
}

TEST_CASE("nested sheets: hand-derived lambda for a five-world tree") {
  // 1-sheets {w0,w4} -> {w1,w2} -> {w3}; R_1 inside the first two sheets
  JTree t = makeJTree(1, 5);
  t.rel[1][0] = bit(4);
  t.rel[1][1] = bit(2);
  t.rel[0][0] = bit(1) | bit(2) | bit(3);
  t.rel[0][4] = bit(1) | bit(2) | bit(3);
  t.rel[0][1] = bit(3);
  t.rel[0][2] = bit(3);
  REQUIRE(isValidJTree(t));
  auto m = buildOrdinalModel(t);
  // subtree at w1 gives kappa = w^w, the root sheet lifts to w^w again
  CHECK(m.lambda == o("w^(w*2)"));
  CHECK(evalMap(m, m.lambda) == 0);
  CHECK(evalMap(m, o("w^(w+1)")) == 4);  // kappa * w: first limit block
  CHECK(evalMap(m, o("w^w")) == 1);      // kappa * 1: top of the first copy
  CHECK(evalMap(m, o("w*5")) == 2);      // inside the first copy's 1-sheet
  CHECK(evalMap(m, Ordinal::nat(9)) == 3);
  auto samples = sampleOrdinals(m.lambda, 500, 8, true);
  CHECK(checkSuitability(m, samples).pass);
  CHECK(checkRankHeight(m, samples).pass);
  CHECK(checkLocalStructure(m, samples).pass);
}

TEST_CASE("witnesses cover every node") {
  for (int n = 0; n <= 2; ++n)
    for (int size = 1; size <= 4; ++size)
      for (const auto& t : enumerateRootedJTrees(n, size)) {
        auto m = buildOrdinalModel(t);
        auto wits = witnessOrdinals(m);
        REQUIRE(wits.size() == static_cast<size_t>(t.size()));
        for (const auto& [node, w] : wits) CHECK(evalMap(m, w) == node);
      }
}

TEST_CASE("spec trace: witnesses of the single edge") {
  auto m = buildOrdinalModel(chain0(1));
  auto wits = witnessOrdinals(m);
  REQUIRE(wits.size() == 2);
  CHECK(wits[0].first == 0);
  CHECK(wits[0].second == Ordinal::omega());
  CHECK(wits[1].first == 1);
  CHECK(wits[1].second == Ordinal::nat(1));
}

TEST_CASE("rank-height shadow") {
  JTree t = makeJTree(1, 2);
  t.rel[1][0] = bit(1);
  auto m = buildOrdinalModel(t);
  CHECK(intervalRankIter(o("w^w"), 2) == Ordinal::nat(1));  // matches height of the root
  auto rep = checkRankHeight(m, sampleOrdinals(m.lambda, 500, 1, true));
  CHECK(rep.pass);

  auto single = buildOrdinalModel(makeJTree(2, 1));
  auto rep1 = checkRankHeight(single, {Ordinal::nat(1)});
  CHECK(rep1.pass);
}

TEST_CASE("local structure") {
  auto single = buildOrdinalModel(makeJTree(0, 1));
  auto rep = checkLocalStructure(single, {Ordinal::nat(1)});
  CHECK(rep.pass);
  CHECK(rep.vacuous == 1);  // rank-0 sample

  auto m = buildOrdinalModel(chain0(2));
  auto rep2 = checkLocalStructure(m, {o("w*3"), o("w^2"), Ordinal::nat(5)});
  CHECK(rep2.pass);
  CHECK(rep2.vacuous == 1);  // the rank-0 sample
  CHECK(rep2.checked == 2);
}

TEST_CASE("checks pass on all small rooted trees") {
  for (int n = 0; n <= 2; ++n)
    for (int size = 1; size <= 4; ++size)
      for (const auto& t : enumerateRootedJTrees(n, size)) {
        auto m = buildOrdinalModel(t);
        auto samples = sampleOrdinals(m.lambda, 200, 42 + size, true);
        auto su = checkSuitability(m, samples);
        auto rh = checkRankHeight(m, samples);
        auto ls = checkLocalStructure(m, samples);
        INFO("frame size ", size, " n ", n);
        CHECK(su.pass);
        CHECK(rh.pass);
        CHECK(ls.pass);
      }
}

TEST_CASE("build rejects bad input") {
  JTree forest = makeJTree(0, 2);  // two roots
  CHECK_THROWS_AS(buildOrdinalModel(forest), std::invalid_argument);
  JTree loop = makeJTree(0, 1);
  loop.rel[0][0] = bit(0);
  CHECK_THROWS_AS(buildOrdinalModel(loop), std::invalid_argument);
}

TEST_CASE("refutation pipeline") {
  DecideOptions d;
  d.bound = 4;
  auto none = refuteOnOrdinalSpace(*parseFormula("[0]p -> [1]p"), d);
  CHECK_FALSE(none.refuted());

  auto res = refuteOnOrdinalSpace(*parseFormula("[1]p -> [0]p"), d);
  REQUIRE(res.refuted());
  REQUIRE(res.ordinalModel.has_value());
  const auto& om = *res.ordinalModel;
  auto samples = sampleOrdinals(om.lambda, 300, 17, true);
  CHECK(checkSuitability(om, samples).pass);
  CHECK(checkRankHeight(om, samples).pass);
  CHECK(checkLocalStructure(om, samples).pass);

  auto bot = refuteOnOrdinalSpace(*parseFormula("[0]false"), d);
  REQUIRE(bot.refuted());
  CHECK(bot.ordinalModel->lambda == Ordinal::omega());
  CHECK(bot.countermodel->model.frame.size() == 2);
}

TEST_CASE("block sums") {
  auto m1 = buildOrdinalModel(makeJTree(0, 1));
  auto mw = buildOrdinalModel(chain0(1));

  auto sum = recipeSum({m1, mw});
  CHECK(sum.lambda == Ordinal::omega());  // 1 + w
  CHECK(sum.eval(Ordinal::nat(1)) == std::make_pair(0, 0));
  CHECK(sum.eval(Ordinal::nat(2)) == std::make_pair(1, 1));
  CHECK(sum.eval(Ordinal::omega()) == std::make_pair(1, 0));
  CHECK_THROWS_AS(sum.eval(Ordinal()), DomainError);
  CHECK_THROWS_AS(sum.eval(o("w*2")), DomainError);

  auto solo = recipeSum({mw});
  for (const auto& a : sampleOrdinals(mw.lambda, 50, 3, true))
    CHECK(solo.eval(a) == std::make_pair(0, evalMap(mw, a)));

  // chains of heights 1..3: lambda = w + w^2 + w^3 = w^3
  auto sum3 = recipeSum({buildOrdinalModel(chain0(1)), buildOrdinalModel(chain0(2)),
                         buildOrdinalModel(chain0(3))});
  CHECK(sum3.lambda == o("w^3"));
  CHECK(sum3.eval(Ordinal::nat(5)).first == 0);
  CHECK(sum3.eval(o("w*2")).first == 1);
  CHECK(sum3.eval(o("w^2")).first == 1);       // top of the second block
  CHECK(sum3.eval(o("w^2 + w")).first == 2);
  CHECK(sum3.eval(o("w^3")) == std::make_pair(2, 0));
}

TEST_CASE("all selftest suites pass in quick mode") {
  SelftestOptions opts;
  opts.samples = 60;
  opts.quick = true;
  for (const auto& r : runSelftest(opts)) {
    INFO(r.name, ": ", r.failures.empty() ? "ok" : r.failures[0]);
    CHECK(r.pass);
  }
}
