// glpwb: decide GLP/J validity over tree-like frames, reduce formulas,
// verify finite-space topology facts, and compile countermodel trees into
// ordinal models. Structured output is line-delimited JSON behind --json.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "glpwb/construction.hpp"
#include "glpwb/finitetop.hpp"
#include "glpwb/formula.hpp"
#include "glpwb/json_io.hpp"
#include "glpwb/kripke.hpp"
#include "glpwb/ordinal.hpp"
#include "glpwb/selftest.hpp"

using namespace glpwb;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInconclusive = 3;

// @path arguments name files holding the actual value
std::string resolveArg(const std::string& arg) {
  if (arg.empty() || arg[0] != '@') return arg;
  std::ifstream in(arg.substr(1));
  if (!in) throw std::invalid_argument("cannot read file: " + arg.substr(1));
  std::stringstream ss;
  ss << in.rdbuf();
  std::string text = ss.str();
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
  return text;
}

struct CommonFlags {
  int bound = 0;
  bool exhaustive = false;
  int maxSize = 6;
  bool json = false;
  uint64_t seed = 1;
  int samples = 200;

  DecideOptions decideOptions() const {
    DecideOptions d;
    d.bound = bound;
    d.exhaustive = exhaustive;
    d.maxSize = maxSize;
    return d;
  }
};

void addCommonFlags(CLI::App* cmd, CommonFlags& flags, bool search) {
  cmd->add_flag("--json", flags.json, "line-delimited JSON output");
  if (search) {
    cmd->add_option("--bound", flags.bound, "max frame size searched");
    cmd->add_flag("--exhaustive", flags.exhaustive, "search up to the filtration estimate");
    cmd->add_option("--max-size", flags.maxSize, "hard cap on the searched frame size");
  }
}

std::string verdictLabel(const DecisionResult& res) {
  switch (res.verdict) {
    case DecisionResult::Verdict::Valid:
      return "valid";
    case DecisionResult::Verdict::ValidBounded:
      return "valid (bounded search up to size " + std::to_string(res.searchedBound) + ")";
    case DecisionResult::Verdict::Refuted:
      return "countermodel";
  }
  return "?";
}

// --exhaustive promises the full estimate; a capped search is inconclusive
int decisionExit(const DecisionResult& res, const CommonFlags& flags) {
  if (res.refuted()) return kExitOk;
  if (flags.exhaustive && res.verdict == DecisionResult::Verdict::ValidBounded) return kExitInconclusive;
  return kExitOk;
}

int runDecide(const std::string& logic, const std::string& formulaArg, const CommonFlags& flags) {
  FormulaRef f = parseFormula(resolveArg(formulaArg));
  DecisionResult res;
  if (logic == "glp") {
    res = decideGLP(*f, flags.decideOptions());
  } else if (logic == "j") {
    res = decideJ(*f, flags.decideOptions());
  } else if (logic == "gl") {
    auto mm = maxModality(*f);
    if (mm && *mm > 0) throw std::invalid_argument("gl mode accepts only the [0] modality");
    res = decideJ(*f, flags.decideOptions());
  } else {
    throw std::invalid_argument("unknown logic: " + logic);
  }
  if (flags.json) {
    Json j{{"formula", printFormula(*f)},
           {"logic", logic},
           {"result", res.refuted() ? "countermodel" : "valid"},
           {"complete", res.verdict != DecisionResult::Verdict::ValidBounded},
           {"searchedBound", res.searchedBound}};
    if (res.refuted()) j["countermodel"] = countermodelToJson(*res.countermodel, *f);
    std::cout << j.dump() << "\n";
  } else {
    std::cout << verdictLabel(res) << "\n";
    if (res.refuted()) {
      const auto& cm = *res.countermodel;
      std::cout << "refuting world: " << cm.model.frame.names[cm.world] << "\n";
      std::cout << countermodelToJson(cm, *f).dump() << "\n";
    }
  }
  return decisionExit(res, flags);
}

int runReduce(const std::string& formulaArg, const CommonFlags& flags) {
  FormulaRef f = parseFormula(resolveArg(formulaArg));
  FormulaRef m = reductionM(f);
  FormulaRef mp = reductionMplus(f);
  if (flags.json) {
    std::cout << Json{{"formula", printFormula(*f)},
                      {"m", printFormula(*m)},
                      {"mplus", printFormula(*mp)}}
                     .dump()
              << "\n";
  } else {
    std::cout << printFormula(*mp) << "\n";
  }
  return kExitOk;
}

int runCountermodel(const std::string& logic, const std::string& formulaArg, const CommonFlags& flags) {
  FormulaRef f = parseFormula(resolveArg(formulaArg));
  DecisionResult res = logic == "j" ? decideJ(*f, flags.decideOptions()) : decideGLP(*f, flags.decideOptions());
  if (!res.refuted()) {
    if (flags.json)
      std::cout << Json{{"formula", printFormula(*f)}, {"result", "valid"}}.dump() << "\n";
    else
      std::cout << verdictLabel(res) << "\n";
    return decisionExit(res, flags);
  }
  FormulaRef checked = logic == "j" ? f : Formula::implies(reductionMplus(f), f);
  std::cout << countermodelToJson(*res.countermodel, *checked).dump() << "\n";
  return kExitOk;
}

int runOrdinalModel(const std::vector<std::string>& treeArgs, const CommonFlags& flags) {
  std::vector<OrdinalModel> models;
  for (const auto& arg : treeArgs) {
    JTree t = jtreeFromJson(Json::parse(resolveArg(arg)));
    models.push_back(buildOrdinalModel(t));
  }
  bool allPass = true;
  for (const auto& m : models) {
    auto samples = sampleOrdinals(m.lambda, flags.samples, flags.seed, true);
    std::vector<CheckReport> reports{checkSuitability(m, samples), checkRankHeight(m, samples),
                                     checkLocalStructure(m, samples)};
    for (const auto& r : reports) allPass = allPass && r.pass;
    if (flags.json) {
      Json j = ordinalModelToJson(m);
      Json rj = Json::array();
      for (const auto& r : reports) rj.push_back(checkReportToJson(r));
      j["checks"] = std::move(rj);
      std::cout << j.dump() << "\n";
    } else {
      std::cout << "lambda = " << printOrdinal(m.lambda) << "\n";
      for (const auto& [node, w] : witnessOrdinals(m))
        std::cout << "  " << m.tree.names[node] << " <- " << printOrdinal(w) << "\n";
      for (const auto& r : reports) {
        std::cout << "  check " << r.name << ": " << (r.pass ? "ok" : "FAIL") << " (" << r.checked
                  << " checked, " << r.vacuous << " vacuous)\n";
        for (const auto& fail : r.failures) std::cout << "    " << fail << "\n";
      }
    }
  }
  if (models.size() > 1) {
    auto sum = recipeSum(models);
    if (flags.json)
      std::cout << Json{{"sumLambda", printOrdinal(sum.lambda)}, {"parts", models.size()}}.dump() << "\n";
    else
      std::cout << "block sum lambda = " << printOrdinal(sum.lambda) << "\n";
  }
  return allPass ? kExitOk : kExitFailure;
}

int runOrd(const std::string& op, std::vector<std::string> args, int iter, const CommonFlags& flags) {
  for (auto& a : args) a = resolveArg(a);
  auto need = [&](size_t n) {
    if (args.size() != n) throw std::invalid_argument("ord " + op + " takes " + std::to_string(n) + " arguments");
  };
  auto emit = [&](const std::string& key, const std::string& value) {
    if (flags.json)
      std::cout << Json{{"op", op}, {key, value}}.dump() << "\n";
    else
      std::cout << value << "\n";
  };
  if (op == "add" || op == "mul" || op == "cmp" || op == "div") {
    need(2);
    Ordinal a = parseOrdinal(args[0]), b = parseOrdinal(args[1]);
    if (op == "add") emit("result", printOrdinal(add(a, b)));
    if (op == "mul") emit("result", printOrdinal(mul(a, b)));
    if (op == "cmp")
      emit("result", cmp(a, b) == OrdCmp::Less ? "less" : cmp(a, b) == OrdCmp::Equal ? "equal" : "greater");
    if (op == "div") {
      auto [q, rem] = divRem(a, b);
      if (flags.json)
        std::cout << Json{{"op", "div"}, {"q", printOrdinal(q)}, {"rem", printOrdinal(rem)}}.dump() << "\n";
      else
        std::cout << printOrdinal(q) << " rem " << printOrdinal(rem) << "\n";
    }
    return kExitOk;
  }
  if (op == "pow") {
    need(1);
    emit("result", printOrdinal(omegaPow(parseOrdinal(args[0]))));
    return kExitOk;
  }
  if (op == "r") {
    need(1);
    emit("result", printOrdinal(intervalRankIter(parseOrdinal(args[0]), static_cast<unsigned>(iter))));
    return kExitOk;
  }
  throw std::invalid_argument("unknown ord operation: " + op);
}

int runTopo(const std::string& op, std::vector<std::string> args, int size, bool scatteredOnly,
            bool lext, const CommonFlags& flags) {
  for (auto& a : args) a = resolveArg(a);
  if (op == "enumerate") {
    auto spaces = scatteredOnly ? enumerateScatteredTopologies(size) : enumerateTopologies(size);
    if (flags.json) {
      for (const auto& sp : spaces) std::cout << spaceToJson(sp).dump() << "\n";
    }
    std::cout << (flags.json ? Json{{"count", spaces.size()}}.dump()
                             : std::to_string(spaces.size()) + " topologies")
              << "\n";
    return kExitOk;
  }
  if (op == "extensions") {
    if (args.size() != 1) throw std::invalid_argument("topo extensions needs a space");
    FiniteSpace s = spaceFromJson(Json::parse(args[0]));
    auto exts = lext ? lExtensions(s) : maximalExtensions(s);
    for (const auto& e : exts) std::cout << spaceToJson(e).dump() << "\n";
    return kExitOk;
  }
  if (op == "plus") {
    if (args.size() != 1) throw std::invalid_argument("topo plus needs a space");
    std::cout << spaceToJson(plusTopology(spaceFromJson(Json::parse(args[0])))).dump() << "\n";
    return kExitOk;
  }
  if (op == "dproduct") {
    if (args.size() != 2) throw std::invalid_argument("topo dproduct needs two spaces");
    auto r = dProduct(spaceFromJson(Json::parse(args[0])), spaceFromJson(Json::parse(args[1])));
    Json j{{"space", spaceToJson(r.space)}, {"pi0", r.pi0}, {"pi1", r.pi1}};
    std::cout << j.dump() << "\n";
    return kExitOk;
  }
  if (op == "check-glp") {
    if (args.size() != 1) throw std::invalid_argument("topo check-glp needs a polyspace");
    bool ok = isGLPSpace(polySpaceFromJson(Json::parse(args[0])));
    std::cout << (flags.json ? Json{{"glp", ok}}.dump() : std::string(ok ? "yes" : "no")) << "\n";
    return kExitOk;
  }
  if (op == "eval") {
    if (args.size() != 3) throw std::invalid_argument("topo eval needs a polyspace, a valuation and a formula");
    PolySpace p = polySpaceFromJson(Json::parse(args[0]));
    Json vj = Json::parse(args[1]);
    std::map<std::string, uint64_t> val;
    for (auto it = vj.begin(); it != vj.end(); ++it) {
      uint64_t m = 0;
      for (const auto& v : it.value()) m |= uint64_t{1} << v.get<int>();
      val[it.key()] = m;
    }
    FormulaRef f = parseFormula(args[2]);
    uint64_t truth = evalPolySpace(p, val, *f);
    Json arr = Json::array();
    for (int x = 0; x < p.size; ++x)
      if ((truth >> x) & 1) arr.push_back(x);
    std::cout << (flags.json ? Json{{"truth", arr}}.dump() : arr.dump()) << "\n";
    return kExitOk;
  }
  if (op == "magari") {
    if (args.size() != 1) throw std::invalid_argument("topo magari needs a space or delta operator");
    Json j = Json::parse(args[0]);
    if (j.contains("table")) {
      DeltaOperator d = deltaFromJson(j);
      if (!isMagari(d)) {
        std::cout << (flags.json ? Json{{"magari", false}}.dump() : std::string("not Magari")) << "\n";
        return kExitOk;
      }
      std::cout << spaceToJson(magariToSpace(d)).dump() << "\n";
    } else {
      std::cout << deltaToJson(spaceToDelta(spaceFromJson(j))).dump() << "\n";
    }
    return kExitOk;
  }
  throw std::invalid_argument("unknown topo operation: " + op);
}

int runRefute(const std::string& formulaArg, const CommonFlags& flags) {
  FormulaRef f = parseFormula(resolveArg(formulaArg));
  RefutationResult res = refuteOnOrdinalSpace(*f, flags.decideOptions());
  if (!res.refuted()) {
    if (flags.json)
      std::cout << Json{{"formula", printFormula(*f)}, {"result", "none"}}.dump() << "\n";
    else
      std::cout << "none\n";
    return decisionExit(res.decision, flags);
  }
  const auto& om = *res.ordinalModel;
  auto samples = sampleOrdinals(om.lambda, flags.samples, flags.seed, true);
  std::vector<CheckReport> reports{checkSuitability(om, samples), checkRankHeight(om, samples),
                                   checkLocalStructure(om, samples)};
  bool allPass = true;
  for (const auto& r : reports) allPass = allPass && r.pass;
  FormulaRef checked = Formula::implies(reductionMplus(f), f);
  if (flags.json) {
    Json j{{"formula", printFormula(*f)},
           {"result", "refuted"},
           {"countermodel", countermodelToJson(*res.countermodel, *checked)},
           {"ordinalModel", ordinalModelToJson(om)}};
    Json rj = Json::array();
    for (const auto& r : reports) rj.push_back(checkReportToJson(r));
    j["checks"] = std::move(rj);
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "refuted\n";
    std::cout << countermodelToJson(*res.countermodel, *checked).dump() << "\n";
    std::cout << "lambda = " << printOrdinal(om.lambda) << "\n";
    for (const auto& r : reports)
      std::cout << "check " << r.name << ": " << (r.pass ? "ok" : "FAIL") << "\n";
  }
  return allPass ? kExitOk : kExitFailure;
}

int runSelftestCmd(const CommonFlags& flags, bool quick) {
  SelftestOptions opts;
  opts.seed = flags.seed;
  opts.samples = flags.samples;
  opts.quick = quick;
  bool allPass = true;
  for (const auto& r : runSelftest(opts)) {
    allPass = allPass && r.pass;
    if (flags.json) {
      std::cout << Json{{"suite", r.name}, {"pass", r.pass}, {"checks", r.checks}, {"failures", r.failures}}
                       .dump()
                << "\n";
    } else {
      std::cout << (r.pass ? "ok   " : "FAIL ") << r.name << " (" << r.checks << " checks)\n";
      for (const auto& fmsg : r.failures) std::cout << "       " << fmsg << "\n";
    }
  }
  return allPass ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* cap = std::getenv("GLPWB_MAX_TERMS")) {
    try {
      setOrdinalTermCap(std::stoull(cap));
    } catch (...) {
      std::cerr << "invalid GLPWB_MAX_TERMS\n";
      return kExitUsage;
    }
  }

  CLI::App app{"workbench for the polymodal provability logic GLP"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string logic = "glp";
  std::string formulaArg;
  std::vector<std::string> listArgs;
  std::string opArg;
  int iter = 1;
  int size = 3;
  bool scatteredOnly = false;
  bool lext = false;
  bool quick = false;

  auto* decide = app.add_subcommand("decide", "decide validity (glp, j or gl)");
  decide->add_option("--logic", logic, "glp | j | gl")->default_str("glp");
  decide->add_option("formula", formulaArg, "formula text or @file")->required();
  addCommonFlags(decide, flags, true);

  auto* reduce = app.add_subcommand("reduce", "print the reduction formula M+");
  reduce->add_option("formula", formulaArg)->required();
  addCommonFlags(reduce, flags, false);

  auto* counter = app.add_subcommand("countermodel", "search for a countermodel, print it as JSON");
  counter->add_option("--logic", logic, "glp | j")->default_str("glp");
  counter->add_option("formula", formulaArg)->required();
  addCommonFlags(counter, flags, true);

  auto* omodel = app.add_subcommand("ordinal-model", "compile trees into ordinal models and run the checks");
  omodel->add_option("tree", listArgs, "tree JSON or @file (several build a block sum)")->required();
  omodel->add_option("--samples", flags.samples, "sample count for the checks");
  omodel->add_option("--seed", flags.seed, "sampling seed");
  addCommonFlags(omodel, flags, false);

  auto* ord = app.add_subcommand("ord", "ordinal calculator (add | mul | pow | r | div | cmp)");
  ord->add_option("operation", opArg)->required();
  ord->add_option("args", listArgs, "ordinal arguments");
  ord->add_option("--iter", iter, "iterations for r");
  addCommonFlags(ord, flags, false);

  auto* topo = app.add_subcommand(
      "topo", "finite spaces (enumerate | extensions | plus | dproduct | check-glp | eval | magari)");
  topo->add_option("operation", opArg)->required();
  topo->add_option("args", listArgs, "JSON arguments or @files");
  topo->add_option("--size", size, "carrier size for enumerate");
  topo->add_flag("--scattered", scatteredOnly, "restrict enumeration to scattered spaces");
  topo->add_flag("--l", lext, "list l-extensions instead of maximal extensions");
  addCommonFlags(topo, flags, false);

  auto* refute = app.add_subcommand("refute", "GLP decision plus ordinal countermodel compilation");
  refute->add_option("formula", formulaArg)->required();
  refute->add_option("--samples", flags.samples, "sample count for the checks");
  refute->add_option("--seed", flags.seed, "sampling seed");
  addCommonFlags(refute, flags, true);

  auto* selftest = app.add_subcommand("selftest", "run the invariant suites");
  selftest->add_option("--samples", flags.samples, "sample count per randomized suite");
  selftest->add_option("--seed", flags.seed, "random seed");
  selftest->add_flag("--quick", quick, "smaller enumeration limits");
  addCommonFlags(selftest, flags, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (decide->parsed()) return runDecide(logic, formulaArg, flags);
    if (reduce->parsed()) return runReduce(formulaArg, flags);
    if (counter->parsed()) return runCountermodel(logic, formulaArg, flags);
    if (omodel->parsed()) return runOrdinalModel(listArgs, flags);
    if (ord->parsed()) return runOrd(opArg, listArgs, iter, flags);
    if (topo->parsed()) return runTopo(opArg, listArgs, size, scatteredOnly, lext, flags);
    if (refute->parsed()) return runRefute(formulaArg, flags);
    if (selftest->parsed()) return runSelftestCmd(flags, quick);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
