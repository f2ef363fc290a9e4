#include "glpwb/json_io.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <stdexcept>

namespace glpwb {

namespace {

uint64_t bit(int i) { return uint64_t{1} << i; }

Json maskToArray(uint64_t mask) {
  Json arr = Json::array();
  while (mask) {
    arr.push_back(std::countr_zero(mask));
    mask &= mask - 1;
  }
  return arr;
}

uint64_t arrayToMask(const Json& arr, int size, const char* what) {
  if (!arr.is_array()) throw std::invalid_argument(std::string(what) + ": expected an array of points");
  uint64_t m = 0;
  for (const auto& v : arr) {
    if (!v.is_number_integer()) throw std::invalid_argument(std::string(what) + ": expected point indices");
    long long p = v.get<long long>();
    if (p < 0 || p >= size) throw std::invalid_argument(std::string(what) + ": point index out of range");
    m |= bit(static_cast<int>(p));
  }
  return m;
}

std::string subsetKey(uint64_t mask) {
  std::string s = "[";
  bool first = true;
  while (mask) {
    if (!first) s += ",";
    first = false;
    s += std::to_string(std::countr_zero(mask));
    mask &= mask - 1;
  }
  return s + "]";
}

uint64_t keyToSubset(const std::string& key, int size) {
  if (key.size() < 2 || key.front() != '[' || key.back() != ']')
    throw std::invalid_argument("delta table key must look like [0,2]");
  uint64_t m = 0;
  size_t i = 1;
  while (i < key.size() - 1) {
    size_t j = i;
    while (j < key.size() - 1 && key[j] != ',') ++j;
    int p = std::stoi(key.substr(i, j - i));
    if (p < 0 || p >= size) throw std::invalid_argument("delta table key point out of range");
    m |= bit(p);
    i = j + 1;
  }
  return m;
}

}  // namespace

Json formulaToJson(const Formula& f) {
  switch (f.op) {
    case FOp::Bottom:
      return Json{{"op", "false"}};
    case FOp::Var:
      return Json{{"op", "var"}, {"name", f.name}};
    case FOp::Not:
      return Json{{"op", "not"}, {"arg", formulaToJson(*f.lhs)}};
    case FOp::And:
      return Json{{"op", "and"}, {"left", formulaToJson(*f.lhs)}, {"right", formulaToJson(*f.rhs)}};
    case FOp::Or:
      return Json{{"op", "or"}, {"left", formulaToJson(*f.lhs)}, {"right", formulaToJson(*f.rhs)}};
    case FOp::Implies:
      return Json{{"op", "implies"}, {"left", formulaToJson(*f.lhs)}, {"right", formulaToJson(*f.rhs)}};
    case FOp::Box:
      return Json{{"op", "box"}, {"n", f.index}, {"arg", formulaToJson(*f.lhs)}};
    case FOp::Diamond:
      return Json{{"op", "diamond"}, {"n", f.index}, {"arg", formulaToJson(*f.lhs)}};
  }
  throw std::logic_error("unreachable");
}

FormulaRef formulaFromJson(const Json& j) {
  if (!j.is_object() || !j.contains("op")) throw std::invalid_argument("formula JSON needs an op field");
  std::string op = j.at("op").get<std::string>();
  auto arg = [&] { return formulaFromJson(j.at("arg")); };
  auto left = [&] { return formulaFromJson(j.at("left")); };
  auto right = [&] { return formulaFromJson(j.at("right")); };
  if (op == "false") return Formula::bottom();
  if (op == "var") return Formula::var(j.at("name").get<std::string>());
  if (op == "not") return Formula::neg(arg());
  if (op == "and") return Formula::conj(left(), right());
  if (op == "or") return Formula::disj(left(), right());
  if (op == "implies") return Formula::implies(left(), right());
  if (op == "box") return Formula::box(j.at("n").get<int>(), arg());
  if (op == "diamond") return Formula::diamond(j.at("n").get<int>(), arg());
  throw std::invalid_argument("unknown formula op: " + op);
}

Json jtreeToJson(const JTree& t) {
  Json rel = Json::object();
  for (int k = 0; k <= t.n; ++k) {
    Json pairs = Json::array();
    for (int x = 0; x < t.size(); ++x)
      for (int y = 0; y < t.size(); ++y)
        if (t.related(k, x, y)) pairs.push_back(Json::array({t.names[x], t.names[y]}));
    rel[std::to_string(k)] = std::move(pairs);
  }
  return Json{{"n", t.n}, {"worlds", t.names}, {"rel", std::move(rel)}};
}

JTree jtreeFromJson(const Json& j) {
  int n = j.at("n").get<int>();
  auto worlds = j.at("worlds").get<std::vector<std::string>>();
  if (n < 0 || worlds.size() > 64) throw std::invalid_argument("bad frame shape");
  std::map<std::string, int> idx;
  for (size_t i = 0; i < worlds.size(); ++i)
    if (!idx.emplace(worlds[i], static_cast<int>(i)).second)
      throw std::invalid_argument("duplicate world name: " + worlds[i]);
  JTree t;
  t.n = n;
  t.names = worlds;
  t.rel.assign(n + 1, std::vector<uint64_t>(worlds.size(), 0));
  const Json& rel = j.at("rel");
  for (auto it = rel.begin(); it != rel.end(); ++it) {
    int k = std::stoi(it.key());
    if (k < 0 || k > n) throw std::invalid_argument("relation index out of range: " + it.key());
    for (const auto& pair : it.value()) {
      if (!pair.is_array() || pair.size() != 2) throw std::invalid_argument("relation entries are world pairs");
      auto a = idx.find(pair[0].get<std::string>());
      auto b = idx.find(pair[1].get<std::string>());
      if (a == idx.end() || b == idx.end()) throw std::invalid_argument("relation references unknown world");
      t.rel[k][a->second] |= bit(b->second);
    }
  }
  return t;
}

Json countermodelToJson(const Countermodel& cm, const Formula& checkedFormula) {
  const auto& m = cm.model;
  Json valuation = Json::object();
  for (const auto& [var, mask] : m.valuation) {
    Json arr = Json::array();
    for (int w = 0; w < m.frame.size(); ++w)
      if (mask & bit(w)) arr.push_back(m.frame.names[w]);
    valuation[var] = std::move(arr);
  }
  Json truth = Json::object();
  auto self = std::make_shared<Formula>(checkedFormula);
  for (const auto& sub : subformulas(self)) {
    uint64_t mask = evalModel(m, *sub);
    Json arr = Json::array();
    for (int w = 0; w < m.frame.size(); ++w)
      if (mask & bit(w)) arr.push_back(m.frame.names[w]);
    truth[printFormula(*sub)] = std::move(arr);
  }
  return Json{{"frame", jtreeToJson(m.frame)},
              {"valuation", std::move(valuation)},
              {"world", m.frame.names[cm.world]},
              {"truthSets", std::move(truth)}};
}

Json spaceToJson(const FiniteSpace& s) {
  Json opens = Json::array();
  for (uint64_t u : s.opens()) opens.push_back(maskToArray(u));
  return Json{{"size", s.size()}, {"opens", std::move(opens)}};
}

FiniteSpace spaceFromJson(const Json& j) {
  int size = j.at("size").get<int>();
  std::vector<uint64_t> opens;
  for (const auto& arr : j.at("opens")) opens.push_back(arrayToMask(arr, size, "opens"));
  return FiniteSpace(size, std::move(opens));
}

Json polySpaceToJson(const PolySpace& p) {
  Json topos = Json::array();
  for (const auto& t : p.topologies) {
    Json opens = Json::array();
    for (uint64_t u : t.opens()) opens.push_back(maskToArray(u));
    topos.push_back(std::move(opens));
  }
  return Json{{"size", p.size}, {"topologies", std::move(topos)}};
}

PolySpace polySpaceFromJson(const Json& j) {
  PolySpace p;
  p.size = j.at("size").get<int>();
  for (const auto& topo : j.at("topologies")) {
    std::vector<uint64_t> opens;
    for (const auto& arr : topo) opens.push_back(arrayToMask(arr, p.size, "topologies"));
    p.topologies.emplace_back(p.size, std::move(opens));
  }
  return p;
}

Json deltaToJson(const DeltaOperator& d) {
  Json table = Json::object();
  for (uint64_t a = 0; a < d.table().size(); ++a) table[subsetKey(a)] = maskToArray(d.apply(a));
  return Json{{"size", d.size()}, {"table", std::move(table)}};
}

DeltaOperator deltaFromJson(const Json& j) {
  int size = j.at("size").get<int>();
  if (size < 0 || size > 16) throw std::invalid_argument("delta carrier out of range");
  std::vector<uint64_t> table(uint64_t{1} << size, 0);
  std::vector<bool> seen(table.size(), false);
  const Json& tj = j.at("table");
  for (auto it = tj.begin(); it != tj.end(); ++it) {
    uint64_t key = keyToSubset(it.key(), size);
    table[key] = arrayToMask(it.value(), size, "table");
    seen[key] = true;
  }
  for (size_t i = 0; i < seen.size(); ++i)
    if (!seen[i]) throw std::invalid_argument("delta table misses subset " + subsetKey(i));
  return DeltaOperator(size, std::move(table));
}

Json recipeToJson(const ModelRecipe& r, const JTree& t) {
  Json j;
  j["lambda"] = printOrdinal(r.lambda);
  switch (r.kind) {
    case ModelRecipe::Kind::Single:
      j["kind"] = "single";
      j["node"] = t.names[r.root];
      break;
    case ModelRecipe::Kind::Sum: {
      j["kind"] = "sum";
      Json parts = Json::array();
      for (const auto& p : r.parts) parts.push_back(recipeToJson(*p, t));
      j["parts"] = std::move(parts);
      break;
    }
    case ModelRecipe::Kind::GLIter: {
      j["kind"] = "gliter";
      j["root"] = t.names[r.root];
      j["kappa"] = printOrdinal(r.kappa);
      Json parts = Json::array();
      for (const auto& p : r.parts) parts.push_back(recipeToJson(*p, t));
      j["parts"] = std::move(parts);
      break;
    }
    case ModelRecipe::Kind::Lift:
      j["kind"] = "lift";
      j["root"] = t.names[r.root];
      j["exponent"] = printOrdinal(r.exponent);
      j["inner"] = recipeToJson(*r.inner, t);
      break;
    case ModelRecipe::Kind::DProd:
      j["kind"] = "dprod";
      j["root"] = t.names[r.root];
      j["kappa"] = printOrdinal(r.kappa);
      j["x"] = recipeToJson(*r.xpart, t);
      j["y"] = recipeToJson(*r.ypart, t);
      break;
  }
  return j;
}

Json ordinalModelToJson(const OrdinalModel& m) {
  Json wits = Json::object();
  for (const auto& [node, w] : witnessOrdinals(m)) wits[m.tree.names[node]] = printOrdinal(w);
  return Json{{"tree", jtreeToJson(m.tree)},
              {"lambda", printOrdinal(m.lambda)},
              {"recipe", recipeToJson(*m.recipe, m.tree)},
              {"witnesses", std::move(wits)}};
}

Json checkReportToJson(const CheckReport& r) {
  return Json{{"name", r.name},
              {"pass", r.pass},
              {"checked", r.checked},
              {"vacuous", r.vacuous},
              {"failures", r.failures}};
}

}  // namespace glpwb
