#include <doctest.h>

#include <random>

#include "glpwb/ordinal.hpp"
#include "glpwb/selftest.hpp"

using namespace glpwb;

namespace {
Ordinal o(const std::string& text) { return parseOrdinal(text); }
}  // namespace

TEST_CASE("cnf comparison") {
  CHECK(cmp(Ordinal::omega(), Ordinal::nat(3)) == OrdCmp::Greater);
  CHECK(cmp(o("w^2 + 1"), o("w^2 + 1")) == OrdCmp::Equal);
  CHECK(cmp(o("w^w"), o("w*5")) == OrdCmp::Greater);
  // CNF order agrees with term-by-term expansion: w^w dominates every w*k
  for (int k = 1; k <= 50; ++k) CHECK(o("w^w") > mul(Ordinal::omega(), Ordinal::nat(k)));
  CHECK(o("w^2") > o("w*7 + 3"));
  CHECK(o("w + 1") > Ordinal::omega());
}

TEST_CASE("addition absorbs smaller left parts") {
  CHECK(add(Ordinal::nat(1), Ordinal::omega()) == Ordinal::omega());
  CHECK(add(Ordinal::omega(), Ordinal::nat(1)) == o("w + 1"));
  CHECK(add(o("w^2 + w"), o("w*3 + 5")) == o("w^2 + w*4 + 5"));
  CHECK(add(o("w"), o("w^2")) == o("w^2"));
}

TEST_CASE("multiplication") {
  // (w+1) * w = w^2: the finite prefixes (w+1)*k grow strictly and stay below,
  // and any ordinal below w^2 is dominated by some prefix
  Ordinal wp1 = o("w + 1");
  CHECK(mul(wp1, Ordinal::omega()) == o("w^2"));
  Ordinal prev;
  for (int k = 1; k <= 50; ++k) {
    Ordinal prefix = mul(wp1, Ordinal::nat(k));
    CHECK(prefix > prev);
    CHECK(prefix < o("w^2"));
    prev = prefix;
  }
  CHECK(mul(wp1, Ordinal::nat(3)) == o("w*3 + 1"));
  CHECK(mul(Ordinal::nat(2), Ordinal::omega()) == Ordinal::omega());
  CHECK(mul(Ordinal::omega(), Ordinal::nat(2)) == o("w*2"));
  CHECK(mul(o("w^w"), o("w^2*3")) == o("w^(w+2)*3"));
  CHECK(mul(o("w + 1"), o("w^2 + w")) == o("w^3 + w^2"));
}

TEST_CASE("omega powers") {
  CHECK(omegaPow(Ordinal()) == Ordinal::nat(1));
  CHECK(omegaPow(Ordinal::nat(1)) == Ordinal::omega());
  CHECK(omegaPow(o("w")) == o("w^w"));
  CHECK(mul(omegaPow(o("w")), omegaPow(o("w"))) == omegaPow(o("w*2")));
}

TEST_CASE("interval rank reads the last exponent") {
  CHECK(intervalRank(Ordinal()) == Ordinal());
  CHECK(intervalRank(o("w^w*3 + w^2")) == Ordinal::nat(2));
  CHECK(intervalRank(Ordinal::nat(5)) == Ordinal());
  // oracle: r(a) is the unique b with a = g + w^b for some g
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    Ordinal a = randomSmallOrdinal(rng);
    if (a.isZero()) continue;
    Ordinal b = intervalRank(a);
    bool found = false;
    // search g among prefixes of a's CNF terms
    const auto& ts = a.terms();
    for (size_t cut = 0; cut <= ts.size(); ++cut) {
      std::vector<Ordinal::Term> prefix(ts.begin(), ts.begin() + cut);
      for (uint64_t drop = 0; cut > 0 && drop < ts[cut - 1].coeff; ++drop) {
        auto pv = prefix;
        pv[cut - 1].coeff -= drop;
        Ordinal g = Ordinal::fromTerms(pv);
        if (add(g, omegaPow(b)) == a) found = true;
      }
      if (cut == 0 && add(Ordinal(), omegaPow(b)) == a) found = true;
    }
    CHECK(found);
  }
}

TEST_CASE("iterated rank") {
  CHECK(intervalRankIter(o("w^w"), 2) == Ordinal::nat(1));
  CHECK(intervalRankIter(o("w^(w^2)*3 + w*2 + 7"), 0) == o("w^(w^2)*3 + w*2 + 7"));
  // the tower w_3 = w^(w^w) vanishes after four steps
  Ordinal tower = omegaPow(omegaPow(Ordinal::omega()));
  CHECK(intervalRankIter(tower, 4) == Ordinal());
  CHECK(intervalRankIter(tower, 3) == Ordinal::nat(1));
}

TEST_CASE("division") {
  auto [q, rem] = divRem(o("w^2 + w*3 + 5"), Ordinal::omega());
  CHECK(q == o("w + 3"));
  CHECK(rem == Ordinal::nat(5));
  auto [q1, r1] = divRem(o("w^2 + 4"), Ordinal::nat(1));
  CHECK(q1 == o("w^2 + 4"));
  CHECK(r1 == Ordinal());
  auto [q2, r2] = divRem(Ordinal::omega(), o("w^2"));
  CHECK(q2 == Ordinal());
  CHECK(r2 == Ordinal::omega());
  CHECK_THROWS_AS(divRem(Ordinal::omega(), Ordinal()), DomainError);
}

TEST_CASE("limits, successors, predecessor") {
  CHECK(isLimit(o("w*2")));
  CHECK_FALSE(isSuccessor(o("w*2")));
  CHECK(isSuccessor(o("w + 1")));
  CHECK(pred(o("w + 1")) == Ordinal::omega());
  CHECK_FALSE(isLimit(Ordinal()));
  CHECK_FALSE(isSuccessor(Ordinal()));
  CHECK_THROWS_AS(pred(Ordinal()), DomainError);
  CHECK_THROWS_AS(pred(Ordinal::omega()), DomainError);
}

TEST_CASE("text syntax round trip") {
  for (const char* text : {"0", "5", "w", "w^w", "w^(w^2)*3 + w*2 + 7", "w^(w^w)", "w^3*2 + w^2 + 1"}) {
    Ordinal a = o(text);
    CHECK(parseOrdinal(printOrdinal(a)) == a);
    CHECK(printOrdinal(a) == text);
  }
  CHECK(o(" w ^ ( w ^ 2 ) * 3+w*2+7") == o("w^(w^2)*3 + w*2 + 7"));
  CHECK(o("1+w") == Ordinal::omega());  // parser evaluates, so sums normalize
  CHECK_THROWS(parseOrdinal("w^"));
  CHECK_THROWS(parseOrdinal("3w"));
  CHECK_THROWS(parseOrdinal(""));
}

TEST_CASE("term cap raises a resource error") {
  size_t before = ordinalTermCap();
  setOrdinalTermCap(3);
  CHECK_THROWS_AS(o("w^5 + w^4 + w^3 + w^2 + w + 1"), ResourceError);
  setOrdinalTermCap(before);
  CHECK(o("w^5 + w^4 + w^3 + w^2 + w + 1").termCount() == 6);
}

TEST_CASE("algebraic laws on random triples") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 500; ++i) {
    Ordinal a = randomSmallOrdinal(rng);
    Ordinal b = randomSmallOrdinal(rng);
    Ordinal c = randomSmallOrdinal(rng);
    CHECK(add(add(a, b), c) == add(a, add(b, c)));
    CHECK(mul(mul(a, b), c) == mul(a, mul(b, c)));
    CHECK(mul(a, add(b, c)) == add(mul(a, b), mul(a, c)));
    if (!b.isZero()) {
      auto [q, rem] = divRem(a, b);
      CHECK(add(mul(b, q), rem) == a);
      CHECK(rem < b);
    }
    CHECK(((a < b) + (a == b) + (a > b)) == 1);
    CHECK(intervalRank(omegaPow(a)) == a);
    CHECK(intervalRank(a) <= a);
    CHECK(parseOrdinal(printOrdinal(a)) == a);
  }
}
