#include "glpwb/ordinal.hpp"

#include <atomic>
#include <cctype>

namespace glpwb {

namespace {
std::atomic<size_t> g_termCap{1000000};

void checkCap(const std::vector<Ordinal::Term>& terms) {
  if (terms.size() > g_termCap.load()) throw ResourceError("ordinal term count exceeds cap");
}

uint64_t mulCoeff(uint64_t a, uint64_t b) {
  uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw ResourceError("ordinal coefficient overflow");
  return r;
}

uint64_t addCoeff(uint64_t a, uint64_t b) {
  uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw ResourceError("ordinal coefficient overflow");
  return r;
}
}  // namespace

Ordinal::Ordinal() noexcept = default;
Ordinal::Ordinal(const Ordinal&) = default;
Ordinal::Ordinal(Ordinal&&) noexcept = default;
Ordinal& Ordinal::operator=(const Ordinal&) = default;
Ordinal& Ordinal::operator=(Ordinal&&) noexcept = default;
Ordinal::~Ordinal() = default;

Ordinal Ordinal::nat(uint64_t n) {
  Ordinal o;
  if (n > 0) o.terms_.push_back(Term{Ordinal(), n});
  return o;
}

Ordinal Ordinal::omega() {
  Ordinal o;
  o.terms_.push_back(Term{nat(1), 1});
  return o;
}

Ordinal Ordinal::fromTerms(std::vector<Term> terms) {
  for (size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].coeff == 0) throw std::invalid_argument("CNF coefficient must be positive");
    if (i > 0 && cmp(terms[i].exp, terms[i - 1].exp) != OrdCmp::Less)
      throw std::invalid_argument("CNF exponents must be strictly decreasing");
  }
  checkCap(terms);
  Ordinal o;
  o.terms_ = std::move(terms);
  return o;
}

bool Ordinal::isFinite() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].exp.isZero());
}

uint64_t Ordinal::finiteValue() const {
  if (!isFinite()) throw DomainError("ordinal is not finite");
  return terms_.empty() ? 0 : terms_[0].coeff;
}

OrdCmp cmp(const Ordinal& a, const Ordinal& b) {
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  size_t n = std::min(ta.size(), tb.size());
  for (size_t i = 0; i < n; ++i) {
    OrdCmp ce = cmp(ta[i].exp, tb[i].exp);
    if (ce != OrdCmp::Equal) return ce;
    if (ta[i].coeff != tb[i].coeff)
      return ta[i].coeff < tb[i].coeff ? OrdCmp::Less : OrdCmp::Greater;
  }
  if (ta.size() == tb.size()) return OrdCmp::Equal;
  return ta.size() < tb.size() ? OrdCmp::Less : OrdCmp::Greater;
}

Ordinal add(const Ordinal& a, const Ordinal& b) {
  if (b.isZero()) return a;
  if (a.isZero()) return b;
  const Ordinal& e = b.terms()[0].exp;
  std::vector<Ordinal::Term> out;
  // keep a's terms with exponent > e, merge at equality, drop the rest
  size_t i = 0;
  for (; i < a.terms().size(); ++i) {
    if (cmp(a.terms()[i].exp, e) == OrdCmp::Greater)
      out.push_back(a.terms()[i]);
    else
      break;
  }
  bool merged = i < a.terms().size() && cmp(a.terms()[i].exp, e) == OrdCmp::Equal;
  Ordinal::Term head = b.terms()[0];
  if (merged) head.coeff = addCoeff(head.coeff, a.terms()[i].coeff);
  out.push_back(std::move(head));
  out.insert(out.end(), b.terms().begin() + 1, b.terms().end());
  checkCap(out);
  return Ordinal::fromTerms(std::move(out));
}

Ordinal mul(const Ordinal& a, const Ordinal& b) {
  if (a.isZero() || b.isZero()) return Ordinal();
  Ordinal acc;
  const Ordinal& lead = a.terms()[0].exp;
  for (const auto& t : b.terms()) {
    Ordinal part;
    if (t.exp.isZero()) {
      // a * n: multiply the leading coefficient, keep the tail
      std::vector<Ordinal::Term> tv = a.terms();
      tv[0].coeff = mulCoeff(tv[0].coeff, t.coeff);
      part = Ordinal::fromTerms(std::move(tv));
    } else {
      part = Ordinal::fromTerms({Ordinal::Term{add(lead, t.exp), t.coeff}});
    }
    acc = add(acc, part);
  }
  return acc;
}

Ordinal omegaPow(const Ordinal& e) {
  return Ordinal::fromTerms({Ordinal::Term{e, 1}});
}

Ordinal leftDiff(const Ordinal& a, const Ordinal& b) {
  if (cmp(a, b) == OrdCmp::Greater) throw DomainError("leftDiff requires a <= b");
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  size_t i = 0;
  while (i < ta.size() && i < tb.size()) {
    OrdCmp ce = cmp(ta[i].exp, tb[i].exp);
    if (ce != OrdCmp::Equal) break;
    if (ta[i].coeff != tb[i].coeff) break;
    ++i;
  }
  if (i == ta.size()) {
    // a is a prefix of b: the remaining tail is the difference
    return Ordinal::fromTerms({tb.begin() + i, tb.end()});
  }
  // First mismatch at i; a <= b forces either a smaller exponent (whole tail
  // of a is absorbed) or, at equal exponent, a smaller coefficient.
  std::vector<Ordinal::Term> out;
  if (cmp(ta[i].exp, tb[i].exp) == OrdCmp::Equal) {
    out.push_back(Ordinal::Term{tb[i].exp, tb[i].coeff - ta[i].coeff});
    out.insert(out.end(), tb.begin() + i + 1, tb.end());
  } else {
    out.insert(out.end(), tb.begin() + i, tb.end());
  }
  return Ordinal::fromTerms(std::move(out));
}

std::pair<Ordinal, Ordinal> divRem(const Ordinal& a, const Ordinal& k) {
  if (k.isZero()) throw DomainError("ordinal division by zero");
  Ordinal q;
  Ordinal rem = a;
  const Ordinal& mu = k.terms()[0].exp;
  uint64_t m = k.terms()[0].coeff;
  Ordinal ktail = Ordinal::fromTerms({k.terms().begin() + 1, k.terms().end()});
  while (cmp(rem, k) != OrdCmp::Less) {
    const Ordinal alpha = rem.terms()[0].exp;
    const uint64_t c = rem.terms()[0].coeff;
    if (cmp(alpha, mu) == OrdCmp::Greater) {
      // k * (w^delta * c) equals rem's leading term exactly
      Ordinal delta = leftDiff(mu, alpha);
      q = add(q, Ordinal::fromTerms({Ordinal::Term{std::move(delta), c}}));
      rem = Ordinal::fromTerms({rem.terms().begin() + 1, rem.terms().end()});
    } else {
      // leading exponents agree; find the largest finite factor
      Ordinal rest = Ordinal::fromTerms({rem.terms().begin() + 1, rem.terms().end()});
      if (c % m == 0 && cmp(ktail, rest) != OrdCmp::Greater) {
        q = add(q, Ordinal::nat(c / m));
        rem = leftDiff(ktail, rest);
      } else {
        uint64_t n = (c - 1) / m;
        q = add(q, Ordinal::nat(n));
        std::vector<Ordinal::Term> rv;
        rv.push_back(Ordinal::Term{alpha, c - m * n});
        rv.insert(rv.end(), rest.terms().begin(), rest.terms().end());
        rem = Ordinal::fromTerms(std::move(rv));
      }
      break;
    }
  }
  return {std::move(q), std::move(rem)};
}

Ordinal intervalRank(const Ordinal& a) {
  if (a.isZero()) return Ordinal();
  return a.terms().back().exp;
}

Ordinal intervalRankIter(const Ordinal& a, unsigned n) {
  Ordinal r = a;
  for (unsigned i = 0; i < n; ++i) r = intervalRank(r);
  return r;
}

bool isLimit(const Ordinal& a) {
  return !a.isZero() && !a.terms().back().exp.isZero();
}

bool isSuccessor(const Ordinal& a) {
  return !a.isZero() && a.terms().back().exp.isZero();
}

Ordinal pred(const Ordinal& a) {
  if (!isSuccessor(a)) throw DomainError("pred requires a successor ordinal");
  std::vector<Ordinal::Term> tv = a.terms();
  if (tv.back().coeff == 1)
    tv.pop_back();
  else
    tv.back().coeff -= 1;
  return Ordinal::fromTerms(std::move(tv));
}

namespace {

struct OrdParser {
  const std::string& s;
  size_t pos = 0;

  explicit OrdParser(const std::string& text) : s(text) {}

  void skipWs() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  [[noreturn]] void fail(const std::string& what) {
    throw std::invalid_argument("ordinal syntax error at offset " + std::to_string(pos) + ": " + what);
  }

  bool eat(char c) {
    skipWs();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  uint64_t parseNat() {
    skipWs();
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos]))) fail("expected digits");
    uint64_t v = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      uint64_t d = static_cast<uint64_t>(s[pos] - '0');
      if (v > (UINT64_MAX - d) / 10) fail("number too large");
      v = v * 10 + d;
      ++pos;
    }
    return v;
  }

  Ordinal parseExpr() {
    Ordinal acc = parseTerm();
    while (eat('+')) acc = add(acc, parseTerm());
    return acc;
  }

  Ordinal parseTerm() {
    Ordinal f = parseFactor();
    if (eat('*')) {
      uint64_t c = parseNat();
      f = mul(f, Ordinal::nat(c));
    }
    return f;
  }

  Ordinal parseFactor() {
    skipWs();
    if (pos >= s.size()) fail("unexpected end of input");
    char c = s[pos];
    if (c == '(') {
      ++pos;
      Ordinal inner = parseExpr();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (c == 'w') {
      ++pos;
      if (eat('^')) return omegaPow(parseExpAtom());
      return Ordinal::omega();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return Ordinal::nat(parseNat());
    fail("expected ordinal");
  }

  Ordinal parseExpAtom() {
    skipWs();
    if (pos >= s.size()) fail("unexpected end of input");
    char c = s[pos];
    if (c == '(') {
      ++pos;
      Ordinal inner = parseExpr();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (c == 'w') {
      ++pos;
      return Ordinal::omega();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return Ordinal::nat(parseNat());
    fail("expected exponent");
  }
};

}  // namespace

Ordinal parseOrdinal(const std::string& text) {
  OrdParser p(text);
  Ordinal o = p.parseExpr();
  p.skipWs();
  if (p.pos != text.size()) p.fail("trailing input");
  return o;
}

std::string printOrdinal(const Ordinal& a) {
  if (a.isZero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& t : a.terms()) {
    if (!first) out += " + ";
    first = false;
    if (t.exp.isZero()) {
      out += std::to_string(t.coeff);
      continue;
    }
    out += "w";
    if (!(t.exp.isFinite() && t.exp.finiteValue() == 1)) {
      out += "^";
      if (t.exp.isFinite()) {
        out += std::to_string(t.exp.finiteValue());
      } else if (t.exp == Ordinal::omega()) {
        out += "w";
      } else {
        out += "(" + printOrdinal(t.exp) + ")";
      }
    }
    if (t.coeff > 1) out += "*" + std::to_string(t.coeff);
  }
  return out;
}

void setOrdinalTermCap(size_t cap) { g_termCap.store(cap); }
size_t ordinalTermCap() { return g_termCap.load(); }

}  // namespace glpwb
