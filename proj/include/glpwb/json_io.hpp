#pragma once

#include <string>

#include <json.hpp>

#include "glpwb/construction.hpp"
#include "glpwb/finitetop.hpp"
#include "glpwb/formula.hpp"
#include "glpwb/kripke.hpp"

namespace glpwb {

using Json = nlohmann::json;

// Formula: tagged objects, e.g. {"op":"box","n":0,"arg":{...}}.
Json formulaToJson(const Formula& f);
FormulaRef formulaFromJson(const Json& j);

// JTree: {"n":1,"worlds":["w0","w1"],"rel":{"0":[["w0","w1"]],"1":[]}}.
Json jtreeToJson(const JTree& t);
JTree jtreeFromJson(const Json& j);

// Countermodel: frame, valuation, refuting world and per-subformula truth
// sets for auditability.
Json countermodelToJson(const Countermodel& cm, const Formula& checkedFormula);

// FiniteSpace: {"size":3,"opens":[[],[0],[0,1],[0,1,2]]}.
Json spaceToJson(const FiniteSpace& s);
FiniteSpace spaceFromJson(const Json& j);

// PolySpace: {"size":m,"topologies":[opens,...]}.
Json polySpaceToJson(const PolySpace& p);
PolySpace polySpaceFromJson(const Json& j);

// DeltaOperator: {"size":m,"table":{"[0,2]":[1],...}}.
Json deltaToJson(const DeltaOperator& d);
DeltaOperator deltaFromJson(const Json& j);

// ModelRecipe: tagged nested objects with ordinals in text syntax.
Json recipeToJson(const ModelRecipe& r, const JTree& t);
Json ordinalModelToJson(const OrdinalModel& m);
Json checkReportToJson(const CheckReport& r);

}  // namespace glpwb
