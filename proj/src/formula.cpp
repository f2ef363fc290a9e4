#include "glpwb/formula.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <unordered_set>

namespace glpwb {

namespace {
FormulaRef make(FOp op, std::string name, int index, FormulaRef lhs, FormulaRef rhs) {
  auto f = std::make_shared<Formula>();
  f->op = op;
  f->name = std::move(name);
  f->index = index;
  f->lhs = std::move(lhs);
  f->rhs = std::move(rhs);
  return f;
}
}  // namespace

namespace {
// atoms are p, q, r optionally followed by digits, as in the text grammar
bool validVarName(const std::string& name) {
  if (name.empty()) return false;
  if (name[0] != 'p' && name[0] != 'q' && name[0] != 'r') return false;
  for (size_t i = 1; i < name.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return false;
  return true;
}
}  // namespace

FormulaRef Formula::bottom() { return make(FOp::Bottom, "", -1, nullptr, nullptr); }
FormulaRef Formula::top() { return neg(bottom()); }

FormulaRef Formula::var(std::string name) {
  if (!validVarName(name)) throw std::invalid_argument("variable must be p, q or r with optional digits");
  return make(FOp::Var, std::move(name), -1, nullptr, nullptr);
}
FormulaRef Formula::neg(FormulaRef f) { return make(FOp::Not, "", -1, std::move(f), nullptr); }
FormulaRef Formula::conj(FormulaRef a, FormulaRef b) { return make(FOp::And, "", -1, std::move(a), std::move(b)); }
FormulaRef Formula::disj(FormulaRef a, FormulaRef b) { return make(FOp::Or, "", -1, std::move(a), std::move(b)); }
FormulaRef Formula::implies(FormulaRef a, FormulaRef b) { return make(FOp::Implies, "", -1, std::move(a), std::move(b)); }

FormulaRef Formula::box(int n, FormulaRef f) {
  if (n < 0) throw std::invalid_argument("modal index must be nonnegative");
  return make(FOp::Box, "", n, std::move(f), nullptr);
}

FormulaRef Formula::diamond(int n, FormulaRef f) {
  if (n < 0) throw std::invalid_argument("modal index must be nonnegative");
  return make(FOp::Diamond, "", n, std::move(f), nullptr);
}

bool structurallyEqual(const Formula& a, const Formula& b) {
  if (a.op != b.op) return false;
  switch (a.op) {
    case FOp::Bottom:
      return true;
    case FOp::Var:
      return a.name == b.name;
    case FOp::Not:
      return structurallyEqual(*a.lhs, *b.lhs);
    case FOp::Box:
    case FOp::Diamond:
      return a.index == b.index && structurallyEqual(*a.lhs, *b.lhs);
    case FOp::And:
    case FOp::Or:
    case FOp::Implies:
      return structurallyEqual(*a.lhs, *b.lhs) && structurallyEqual(*a.rhs, *b.rhs);
  }
  return false;
}

size_t nodeCount(const Formula& f) {
  size_t n = 1;
  if (f.lhs) n += nodeCount(*f.lhs);
  if (f.rhs) n += nodeCount(*f.rhs);
  return n;
}

std::vector<std::string> variablesOf(const Formula& f) {
  std::set<std::string> seen;
  std::vector<const Formula*> stack{&f};
  while (!stack.empty()) {
    const Formula* cur = stack.back();
    stack.pop_back();
    if (cur->op == FOp::Var) seen.insert(cur->name);
    if (cur->lhs) stack.push_back(cur->lhs.get());
    if (cur->rhs) stack.push_back(cur->rhs.get());
  }
  return {seen.begin(), seen.end()};
}

std::optional<int> maxModality(const Formula& f) {
  std::optional<int> best;
  if (f.op == FOp::Box || f.op == FOp::Diamond) best = f.index;
  for (const auto& child : {f.lhs, f.rhs}) {
    if (!child) continue;
    auto sub = maxModality(*child);
    if (sub && (!best || *sub > *best)) best = sub;
  }
  return best;
}

FormulaRef toBoxForm(const FormulaRef& f) {
  switch (f->op) {
    case FOp::Bottom:
    case FOp::Var:
      return f;
    case FOp::Not:
      return Formula::neg(toBoxForm(f->lhs));
    case FOp::And:
      return Formula::conj(toBoxForm(f->lhs), toBoxForm(f->rhs));
    case FOp::Or:
      return Formula::disj(toBoxForm(f->lhs), toBoxForm(f->rhs));
    case FOp::Implies:
      return Formula::implies(toBoxForm(f->lhs), toBoxForm(f->rhs));
    case FOp::Box:
      return Formula::box(f->index, toBoxForm(f->lhs));
    case FOp::Diamond:
      return Formula::neg(Formula::box(f->index, Formula::neg(toBoxForm(f->lhs))));
  }
  return f;
}

namespace {
void collectPostOrder(const FormulaRef& f, std::vector<FormulaRef>& out,
                      std::unordered_set<std::string>& seen) {
  if (f->lhs) collectPostOrder(f->lhs, out, seen);
  if (f->rhs) collectPostOrder(f->rhs, out, seen);
  std::string key = printFormula(*f);
  if (seen.insert(std::move(key)).second) out.push_back(f);
}
}  // namespace

std::vector<FormulaRef> subformulas(const FormulaRef& f) {
  std::vector<FormulaRef> out;
  std::unordered_set<std::string> seen;
  collectPostOrder(f, out, seen);
  return out;
}

std::vector<std::pair<int, FormulaRef>> boxSubformulas(const FormulaRef& f) {
  std::vector<std::pair<int, FormulaRef>> out;
  for (const auto& g : subformulas(toBoxForm(f)))
    if (g->op == FOp::Box) out.emplace_back(g->index, g->lhs);
  return out;
}

FormulaRef conjoin(const std::vector<FormulaRef>& fs) {
  if (fs.empty()) return Formula::top();
  FormulaRef acc = fs.back();
  for (size_t i = fs.size() - 1; i-- > 0;) acc = Formula::conj(fs[i], acc);
  return acc;
}

FormulaRef reductionM(const FormulaRef& f) {
  auto boxes = boxSubformulas(f);
  int n = 0;
  for (const auto& [m, psi] : boxes) n = std::max(n, m);
  std::vector<FormulaRef> conjuncts;
  for (const auto& [m, psi] : boxes)
    for (int k = m + 1; k <= n; ++k)
      conjuncts.push_back(Formula::implies(Formula::box(m, psi), Formula::box(k, psi)));
  return conjoin(conjuncts);
}

FormulaRef reductionMplus(const FormulaRef& f) {
  auto boxes = boxSubformulas(f);
  int n = 0;
  for (const auto& [m, psi] : boxes) n = std::max(n, m);
  FormulaRef m = reductionM(f);
  std::vector<FormulaRef> conjuncts{m};
  for (int k = 0; k <= n; ++k) conjuncts.push_back(Formula::box(k, m));
  return conjoin(conjuncts);
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

enum class Tok { End, LParen, RParen, Not, And, Or, Implies, False, True, Var, Box, Diamond };

struct Lexer {
  const std::string& s;
  size_t pos = 0;
  Tok tok = Tok::End;
  size_t tokPos = 0;
  std::string varName;
  int modIndex = -1;

  explicit Lexer(const std::string& text) : s(text) { next(); }

  bool startsWith(const char* lit) const {
    size_t n = std::char_traits<char>::length(lit);
    return s.compare(pos, n, lit) == 0;
  }

  [[noreturn]] void fail(const std::string& what, size_t off) { throw ParseError(what, off); }

  void next() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    tokPos = pos;
    if (pos >= s.size()) {
      tok = Tok::End;
      return;
    }
    char c = s[pos];
    // unicode aliases: ⊥ ¬ ∧ ∨ →
    if (startsWith("\xE2\x8A\xA5")) { pos += 3; tok = Tok::False; return; }
    if (startsWith("\xC2\xAC")) { pos += 2; tok = Tok::Not; return; }
    if (startsWith("\xE2\x88\xA7")) { pos += 3; tok = Tok::And; return; }
    if (startsWith("\xE2\x88\xA8")) { pos += 3; tok = Tok::Or; return; }
    if (startsWith("\xE2\x86\x92")) { pos += 3; tok = Tok::Implies; return; }
    switch (c) {
      case '(': ++pos; tok = Tok::LParen; return;
      case ')': ++pos; tok = Tok::RParen; return;
      case '~': ++pos; tok = Tok::Not; return;
      case '&': ++pos; tok = Tok::And; return;
      case '|': ++pos; tok = Tok::Or; return;
      case '[': ++pos; modIndex = lexIndex(']'); tok = Tok::Box; return;
      case '<': ++pos; modIndex = lexIndex('>'); tok = Tok::Diamond; return;
      default: break;
    }
    if (c == '-') {
      if (pos + 1 < s.size() && s[pos + 1] == '>') {
        pos += 2;
        tok = Tok::Implies;
        return;
      }
      fail("unexpected '-'", pos);
    }
    if (startsWith("false") && !isalnumAt(pos + 5)) { pos += 5; tok = Tok::False; return; }
    if (startsWith("true") && !isalnumAt(pos + 4)) { pos += 4; tok = Tok::True; return; }
    if (c == 'p' || c == 'q' || c == 'r') {
      size_t start = pos++;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      varName = s.substr(start, pos - start);
      tok = Tok::Var;
      return;
    }
    fail("unexpected character", pos);
  }

  bool isalnumAt(size_t p) const {
    return p < s.size() && std::isalnum(static_cast<unsigned char>(s[p]));
  }

  int lexIndex(char close) {
    size_t start = pos;
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos])))
      fail("expected nonnegative modal index", pos);
    long v = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      v = v * 10 + (s[pos] - '0');
      if (v > 1000000) fail("modal index too large", start);
      ++pos;
    }
    if (pos >= s.size() || s[pos] != close) fail(std::string("expected '") + close + "'", pos);
    ++pos;
    return static_cast<int>(v);
  }
};

struct FmlParser {
  Lexer lx;

  explicit FmlParser(const std::string& text) : lx(text) {}

  FormulaRef parseImplies() {
    FormulaRef left = parseOr();
    if (lx.tok == Tok::Implies) {
      lx.next();
      return Formula::implies(std::move(left), parseImplies());
    }
    return left;
  }

  FormulaRef parseOr() {
    FormulaRef left = parseAnd();
    if (lx.tok == Tok::Or) {
      lx.next();
      return Formula::disj(std::move(left), parseOr());
    }
    return left;
  }

  FormulaRef parseAnd() {
    FormulaRef left = parseUnary();
    if (lx.tok == Tok::And) {
      lx.next();
      return Formula::conj(std::move(left), parseAnd());
    }
    return left;
  }

  FormulaRef parseUnary() {
    switch (lx.tok) {
      case Tok::Not: {
        lx.next();
        return Formula::neg(parseUnary());
      }
      case Tok::Box: {
        int n = lx.modIndex;
        lx.next();
        return Formula::box(n, parseUnary());
      }
      case Tok::Diamond: {
        int n = lx.modIndex;
        lx.next();
        return Formula::diamond(n, parseUnary());
      }
      default:
        return parseAtom();
    }
  }

  FormulaRef parseAtom() {
    switch (lx.tok) {
      case Tok::False:
        lx.next();
        return Formula::bottom();
      case Tok::True:
        lx.next();
        return Formula::top();
      case Tok::Var: {
        std::string name = lx.varName;
        lx.next();
        return Formula::var(std::move(name));
      }
      case Tok::LParen: {
        lx.next();
        FormulaRef inner = parseImplies();
        if (lx.tok != Tok::RParen) lx.fail("expected ')'", lx.tokPos);
        lx.next();
        return inner;
      }
      case Tok::End:
        lx.fail("unexpected end of input", lx.tokPos);
      default:
        lx.fail("expected formula", lx.tokPos);
    }
  }
};

}  // namespace

FormulaRef parseFormula(const std::string& text) {
  FmlParser p(text);
  FormulaRef f = p.parseImplies();
  if (p.lx.tok != Tok::End) p.lx.fail("trailing input", p.lx.tokPos);
  return f;
}

namespace {

constexpr int kPrecImplies = 1;
constexpr int kPrecOr = 2;
constexpr int kPrecAnd = 3;
constexpr int kPrecUnary = 4;

bool isTop(const Formula& f) { return f.op == FOp::Not && f.lhs->op == FOp::Bottom; }

void printInto(const Formula& f, int minPrec, std::string& out) {
  if (isTop(f)) {
    out += "true";
    return;
  }
  switch (f.op) {
    case FOp::Bottom:
      out += "false";
      return;
    case FOp::Var:
      out += f.name;
      return;
    case FOp::Not:
      out += "~";
      printInto(*f.lhs, kPrecUnary, out);
      return;
    case FOp::Box:
      out += "[" + std::to_string(f.index) + "]";
      printInto(*f.lhs, kPrecUnary, out);
      return;
    case FOp::Diamond:
      out += "<" + std::to_string(f.index) + ">";
      printInto(*f.lhs, kPrecUnary, out);
      return;
    case FOp::And:
    case FOp::Or:
    case FOp::Implies: {
      int prec = f.op == FOp::And ? kPrecAnd : f.op == FOp::Or ? kPrecOr : kPrecImplies;
      const char* sym = f.op == FOp::And ? " & " : f.op == FOp::Or ? " | " : " -> ";
      bool paren = prec < minPrec;
      if (paren) out += "(";
      printInto(*f.lhs, prec + 1, out);  // right-associative
      out += sym;
      printInto(*f.rhs, prec, out);
      if (paren) out += ")";
      return;
    }
  }
}

}  // namespace

std::string printFormula(const Formula& f) {
  std::string out;
  printInto(f, 0, out);
  return out;
}

}  // namespace glpwb
