#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace glpwb {

struct ParseError : std::runtime_error {
  size_t offset;
  ParseError(const std::string& what, size_t off)
      : std::runtime_error(what + " at offset " + std::to_string(off)), offset(off) {}
};

enum class FOp : uint8_t { Bottom, Var, Not, And, Or, Implies, Box, Diamond };

struct Formula;
using FormulaRef = std::shared_ptr<const Formula>;

/// Immutable modal formula. <n>f is kept as its own node kind but is
/// semantically ~[n]~f; evaluators treat the two dually.
struct Formula {
  FOp op;
  std::string name;  // Var
  int index = -1;    // Box / Diamond
  FormulaRef lhs;    // unary operand or left operand
  FormulaRef rhs;

  static FormulaRef bottom();
  static FormulaRef top();  // ~false
  static FormulaRef var(std::string name);
  static FormulaRef neg(FormulaRef f);
  static FormulaRef conj(FormulaRef a, FormulaRef b);
  static FormulaRef disj(FormulaRef a, FormulaRef b);
  static FormulaRef implies(FormulaRef a, FormulaRef b);
  static FormulaRef box(int n, FormulaRef f);
  static FormulaRef diamond(int n, FormulaRef f);
};

bool structurallyEqual(const Formula& a, const Formula& b);
size_t nodeCount(const Formula& f);
std::vector<std::string> variablesOf(const Formula& f);  // sorted, distinct

/// ASCII grammar with unicode aliases on input; see printFormula for the
/// canonical output form. Throws ParseError with a byte offset.
FormulaRef parseFormula(const std::string& text);
std::string printFormula(const Formula& f);

std::optional<int> maxModality(const Formula& f);

/// Replaces every <n>g by ~[n]~g, recursively.
FormulaRef toBoxForm(const FormulaRef& f);

/// Distinct subformulas in post-order of first occurrence.
std::vector<FormulaRef> subformulas(const FormulaRef& f);

/// Distinct box subformulas (m, psi) of the box-primitive translation of f,
/// in post-order. Diamonds contribute their definitional boxes.
std::vector<std::pair<int, FormulaRef>> boxSubformulas(const FormulaRef& f);

/// Right-folded conjunction; empty input yields the constant true.
FormulaRef conjoin(const std::vector<FormulaRef>& fs);

/// M(f): for each box subformula [m]psi and each k with m < k <= n,
/// the implication [m]psi -> [k]psi, conjoined; n is the largest box index.
FormulaRef reductionM(const FormulaRef& f);

/// M+(f) = M(f) & [0]M(f) & ... & [n]M(f); n := 0 when f has no boxes.
FormulaRef reductionMplus(const FormulaRef& f);

}  // namespace glpwb
