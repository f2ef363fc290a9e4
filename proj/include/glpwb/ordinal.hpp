#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace glpwb {

// Thrown when a computation would exceed a configured resource bound
// (ordinal term count, coefficient overflow).
struct ResourceError : std::runtime_error {
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown on domain violations (pred of a limit, division by zero, ...).
struct DomainError : std::runtime_error {
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// An ordinal below epsilon_0 in Cantor normal form:
/// sum of w^exp * coeff with strictly decreasing exponents (themselves
/// ordinals) and positive integer coefficients. The empty sum is 0.
class Ordinal {
 public:
  struct Term;

  Ordinal() noexcept;
  Ordinal(const Ordinal&);
  Ordinal(Ordinal&&) noexcept;
  Ordinal& operator=(const Ordinal&);
  Ordinal& operator=(Ordinal&&) noexcept;
  ~Ordinal();

  static Ordinal nat(uint64_t n);
  static Ordinal omega();
  /// Builds from an explicit term list; throws std::invalid_argument unless
  /// exponents are strictly decreasing and coefficients positive.
  static Ordinal fromTerms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  bool isZero() const { return terms_.empty(); }
  /// True iff the value is a natural number (0 or a single w^0 term).
  bool isFinite() const;
  uint64_t finiteValue() const;  // requires isFinite()

  size_t termCount() const { return terms_.size(); }

 private:
  std::vector<Term> terms_;
  friend Ordinal addChecked(const Ordinal&, const Ordinal&);
};

struct Ordinal::Term {
  Ordinal exp;
  uint64_t coeff = 0;
};

enum class OrdCmp { Less, Equal, Greater };

OrdCmp cmp(const Ordinal& a, const Ordinal& b);

inline bool operator==(const Ordinal& a, const Ordinal& b) { return cmp(a, b) == OrdCmp::Equal; }
inline bool operator!=(const Ordinal& a, const Ordinal& b) { return cmp(a, b) != OrdCmp::Equal; }
inline bool operator<(const Ordinal& a, const Ordinal& b) { return cmp(a, b) == OrdCmp::Less; }
inline bool operator>(const Ordinal& a, const Ordinal& b) { return cmp(a, b) == OrdCmp::Greater; }
inline bool operator<=(const Ordinal& a, const Ordinal& b) { return cmp(a, b) != OrdCmp::Greater; }
inline bool operator>=(const Ordinal& a, const Ordinal& b) { return cmp(a, b) != OrdCmp::Less; }

Ordinal add(const Ordinal& a, const Ordinal& b);
Ordinal mul(const Ordinal& a, const Ordinal& b);
Ordinal omegaPow(const Ordinal& e);

/// Quotient and remainder of left division: a = k*q + rem with rem < k.
/// Throws DomainError when k = 0.
std::pair<Ordinal, Ordinal> divRem(const Ordinal& a, const Ordinal& k);

/// The unique x with a + x = b. Requires a <= b (throws DomainError otherwise).
/// Internal decomposition helper; not part of the calculator surface.
Ordinal leftDiff(const Ordinal& a, const Ordinal& b);

/// Rank function of the interval (order) topology on the ordinals:
/// 0 at 0, otherwise the exponent of the last CNF term, i.e. the unique
/// beta with a = gamma + w^beta.
Ordinal intervalRank(const Ordinal& a);
Ordinal intervalRankIter(const Ordinal& a, unsigned n);

bool isLimit(const Ordinal& a);
bool isSuccessor(const Ordinal& a);
Ordinal pred(const Ordinal& a);  // requires isSuccessor

/// Text syntax: `0`, `5`, `w`, `w^w`, `w^(w^2)*3 + w*2 + 7`.
/// Whitespace-insensitive. Sums are evaluated with ordinal addition, so
/// non-CNF input like `1+w` normalizes to `w`.
Ordinal parseOrdinal(const std::string& text);
std::string printOrdinal(const Ordinal& a);

/// Cap on the CNF term count of any computed ordinal (default 10^6).
/// Exceeding it raises ResourceError instead of blowing up silently.
void setOrdinalTermCap(size_t cap);
size_t ordinalTermCap();

}  // namespace glpwb
