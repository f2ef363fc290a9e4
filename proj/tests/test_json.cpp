#include <doctest.h>

#include <random>

#include "glpwb/json_io.hpp"
#include "glpwb/selftest.hpp"

using namespace glpwb;

TEST_CASE("formula json round trip is bit-exact") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 400; ++i) {
    FormulaRef f = randomFormula(rng, 12, 2, {"p", "q", "r"});
    Json j = formulaToJson(*f);
    CHECK(structurallyEqual(*formulaFromJson(j), *f));
    CHECK(formulaToJson(*formulaFromJson(j)) == j);
  }
  Json box = formulaToJson(*parseFormula("[0]p"));
  CHECK(box["op"] == "box");
  CHECK(box["n"] == 0);
  CHECK(box["arg"]["op"] == "var");
  CHECK_THROWS_AS(formulaFromJson(Json{{"op", "zap"}}), std::invalid_argument);
  // variable names are held to the grammar's atom shape
  CHECK_THROWS_AS(formulaFromJson(Json{{"op", "var"}, {"name", "false"}}), std::invalid_argument);
  CHECK_THROWS_AS(formulaFromJson(Json{{"op", "var"}, {"name", "x1"}}), std::invalid_argument);
}

TEST_CASE("jtree json matches the documented shape") {
  JTree t = makeJTree(2, 2);
  t.rel[0][0] = 2;  // w0 R0 w1
  Json j = jtreeToJson(t);
  CHECK(j["n"] == 2);
  CHECK(j["worlds"] == Json::array({"w0", "w1"}));
  CHECK(j["rel"]["0"] == Json::array({Json::array({"w0", "w1"})}));
  CHECK(j["rel"]["1"] == Json::array());
  JTree back = jtreeFromJson(j);
  CHECK(back.rel == t.rel);
  CHECK(back.names == t.names);

  CHECK_THROWS_AS(jtreeFromJson(Json::parse(R"({"n":0,"worlds":["a","a"],"rel":{"0":[]}})")),
                  std::invalid_argument);
  CHECK_THROWS_AS(jtreeFromJson(Json::parse(R"({"n":0,"worlds":["a"],"rel":{"0":[["a","b"]]}})")),
                  std::invalid_argument);
}

TEST_CASE("space and polyspace json") {
  FiniteSpace s = FiniteSpace::leftTopology(3);
  Json j = spaceToJson(s);
  CHECK(j["size"] == 3);
  CHECK(j["opens"] == Json::parse("[[],[0],[0,1],[0,1,2]]"));
  CHECK(spaceFromJson(j) == s);

  PolySpace p{2, {FiniteSpace::sierpinski(), FiniteSpace::discrete(2)}};
  CHECK(polySpaceFromJson(polySpaceToJson(p)).topologies[0] == p.topologies[0]);
  CHECK(polySpaceFromJson(polySpaceToJson(p)).topologies[1] == p.topologies[1]);

  for (const auto& t : enumerateTopologies(3)) CHECK(spaceFromJson(spaceToJson(t)) == t);
}

TEST_CASE("delta operator json uses subset keys") {
  DeltaOperator d = spaceToDelta(FiniteSpace::sierpinski());
  Json j = deltaToJson(d);
  CHECK(j["size"] == 2);
  CHECK(j["table"]["[0]"] == Json::array({1}));  // d({0}) = {1}
  CHECK(j["table"]["[]"] == Json::array());
  CHECK(deltaFromJson(j) == d);
  Json missing = j;
  missing["table"].erase("[0]");
  CHECK_THROWS_AS(deltaFromJson(missing), std::invalid_argument);
}

TEST_CASE("recipe json carries lambda and kappa in ordinal syntax") {
  JTree t = makeJTree(1, 3);
  t.rel[1][0] = uint64_t{1} << 2;
  t.rel[0][0] = uint64_t{1} << 1;
  t.rel[0][2] = uint64_t{1} << 1;
  auto m = buildOrdinalModel(t);
  Json j = ordinalModelToJson(m);
  CHECK(j["lambda"] == "w^w");
  CHECK(j["recipe"]["kind"] == "dprod");
  CHECK(j["recipe"]["kappa"] == "1");
  CHECK(j["recipe"]["y"]["kind"] == "lift");
  CHECK(j["witnesses"]["w0"] == "w^w");
  // the countermodel payload evaluates every subformula
  KripkeModel km;
  km.frame = t;
  km.valuation["p"] = 1;
  Countermodel cm{km, 0};
  Json cj = countermodelToJson(cm, *parseFormula("[0]p -> p"));
  CHECK(cj["world"] == "w0");
  CHECK(cj["truthSets"].contains("[0]p -> p"));
  CHECK(cj["valuation"]["p"] == Json::array({"w0"}));
}
