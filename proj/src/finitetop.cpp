#include "glpwb/finitetop.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <stdexcept>

#include "glpwb/ordinal.hpp"

namespace glpwb {

namespace {

constexpr int kMaxCarrier = 16;
constexpr int kEnumCap = 5;  // exhaustive topology enumeration cap

uint64_t bit(int i) { return uint64_t{1} << i; }

std::vector<int> bitsOf(uint64_t mask) {
  std::vector<int> out;
  while (mask) {
    out.push_back(std::countr_zero(mask));
    mask &= mask - 1;
  }
  return out;
}

std::vector<uint64_t> opensFromMinNbhds(int size, const std::vector<uint64_t>& nb) {
  std::vector<uint64_t> opens;
  uint64_t subsets = uint64_t{1} << size;
  for (uint64_t u = 0; u < subsets; ++u) {
    bool ok = true;
    for (int x : bitsOf(u))
      if (nb[x] & ~u) {
        ok = false;
        break;
      }
    if (ok) opens.push_back(u);
  }
  return opens;
}

}  // namespace

FiniteSpace::FiniteSpace(int size, std::vector<uint64_t> opens) : size_(size) {
  if (size < 0 || size > kMaxCarrier) throw std::invalid_argument("carrier size out of range");
  std::sort(opens.begin(), opens.end());
  opens.erase(std::unique(opens.begin(), opens.end()), opens.end());
  uint64_t fullMask = size == 0 ? 0 : ((uint64_t{1} << size) - 1);
  for (uint64_t u : opens)
    if (u & ~fullMask) throw std::invalid_argument("open set references points outside the carrier");
  minNbhd_.assign(size, fullMask);
  for (int x = 0; x < size; ++x)
    for (uint64_t u : opens)
      if (u & bit(x)) minNbhd_[x] &= u;
  // a family is a topology iff it equals the up-closure family of its
  // minimal neighborhoods (this subsumes closure under union/intersection
  // and the presence of the empty and full sets)
  std::vector<uint64_t> expect = opensFromMinNbhds(size, minNbhd_);
  if (opens != expect)
    throw std::invalid_argument("open family is not closed under union/intersection");
  opens_ = std::move(opens);
}

FiniteSpace FiniteSpace::discrete(int size) {
  std::vector<uint64_t> nb(size);
  for (int x = 0; x < size; ++x) nb[x] = bit(x);
  FiniteSpace s;
  s.size_ = size;
  s.minNbhd_ = nb;
  s.opens_ = opensFromMinNbhds(size, nb);
  return s;
}

FiniteSpace FiniteSpace::indiscrete(int size) {
  uint64_t fullMask = size == 0 ? 0 : ((uint64_t{1} << size) - 1);
  std::vector<uint64_t> opens{0};
  if (size > 0) opens.push_back(fullMask);
  return FiniteSpace(size, std::move(opens));
}

FiniteSpace FiniteSpace::leftTopology(int size) {
  std::vector<uint64_t> opens;
  for (int k = 0; k <= size; ++k) opens.push_back(k == 0 ? 0 : (bit(k) - 1));
  return FiniteSpace(size, std::move(opens));
}

FiniteSpace FiniteSpace::sierpinski() { return FiniteSpace(2, {0, 1, 3}); }

FiniteSpace FiniteSpace::generated(int size, const std::vector<uint64_t>& family) {
  if (size < 0 || size > kMaxCarrier) throw std::invalid_argument("carrier size out of range");
  uint64_t fullMask = size == 0 ? 0 : ((uint64_t{1} << size) - 1);
  std::vector<uint64_t> nb(size, fullMask);
  for (int x = 0; x < size; ++x)
    for (uint64_t u : family)
      if (u & bit(x)) nb[x] &= u;
  FiniteSpace s;
  s.size_ = size;
  s.minNbhd_ = nb;
  s.opens_ = opensFromMinNbhds(size, nb);
  return s;
}

bool FiniteSpace::isOpen(uint64_t u) const {
  return std::binary_search(opens_.begin(), opens_.end(), u);
}

FiniteSpace FiniteSpace::subspace(uint64_t mask) const {
  auto pts = bitsOf(mask);
  std::vector<int> newIdx(size_, -1);
  for (size_t i = 0; i < pts.size(); ++i) newIdx[pts[i]] = static_cast<int>(i);
  std::set<uint64_t> traces;
  for (uint64_t u : opens_) {
    uint64_t tr = 0;
    for (int p : bitsOf(u & mask)) tr |= bit(newIdx[p]);
    traces.insert(tr);
  }
  return FiniteSpace(static_cast<int>(pts.size()), {traces.begin(), traces.end()});
}

uint64_t dOp(const FiniteSpace& s, uint64_t a) {
  uint64_t out = 0;
  for (int x = 0; x < s.size(); ++x)
    if (s.minNbhd(x) & a & ~bit(x)) out |= bit(x);
  return out;
}

uint64_t dTildeOp(const FiniteSpace& s, uint64_t a) {
  return s.full() & ~dOp(s, s.full() & ~a);
}

bool isScattered(const FiniteSpace& s) {
  uint64_t subsets = uint64_t{1} << s.size();
  for (uint64_t a = 1; a < subsets; ++a) {
    bool iso = false;
    for (int x : bitsOf(a))
      if ((s.minNbhd(x) & a) == bit(x)) {
        iso = true;
        break;
      }
    if (!iso) return false;
  }
  return true;
}

std::vector<uint64_t> cbSequence(const FiniteSpace& s) {
  std::vector<uint64_t> seq{s.full()};
  while (seq.back() != 0) {
    uint64_t d = dOp(s, seq.back());  // decreasing by monotonicity of d
    if (d == seq.back()) throw DomainError("space is not scattered");
    seq.push_back(d);
  }
  return seq;
}

int rankOfPoint(const FiniteSpace& s, int x) {
  auto seq = cbSequence(s);
  for (size_t a = 0; a + 1 < seq.size(); ++a)
    if (!(seq[a + 1] & bit(x))) return static_cast<int>(a);
  throw DomainError("point outside carrier");
}

int rankOfSpace(const FiniteSpace& s) { return static_cast<int>(cbSequence(s).size()) - 1; }

int rankOfSubset(const FiniteSpace& s, uint64_t a) {
  int r = 0;
  for (int x : bitsOf(a)) r = std::max(r, rankOfPoint(s, x) + 1);
  return r;
}

bool isDMap(const FiniteSpace& x, const FiniteSpace& y, const std::vector<int>& f) {
  if (static_cast<int>(f.size()) != x.size()) throw std::invalid_argument("map arity mismatch");
  for (int v : f)
    if (v < 0 || v >= y.size()) throw std::invalid_argument("map target out of range");
  // continuity
  for (uint64_t v : y.opens()) {
    uint64_t pre = 0;
    for (int p = 0; p < x.size(); ++p)
      if (v & bit(f[p])) pre |= bit(p);
    if (!x.isOpen(pre)) return false;
  }
  // openness
  for (uint64_t u : x.opens()) {
    uint64_t img = 0;
    for (int p : bitsOf(u)) img |= bit(f[p]);
    if (!y.isOpen(img)) return false;
  }
  // pointwise discreteness
  for (int w = 0; w < y.size(); ++w) {
    uint64_t fiber = 0;
    for (int p = 0; p < x.size(); ++p)
      if (f[p] == w) fiber |= bit(p);
    for (int p : bitsOf(fiber))
      if ((x.minNbhd(p) & fiber) != bit(p)) return false;
  }
  return true;
}

bool isRankPreservingExtension(const FiniteSpace& s, const FiniteSpace& finer) {
  if (s.size() != finer.size()) throw std::invalid_argument("carrier mismatch");
  if (!std::includes(finer.opens().begin(), finer.opens().end(), s.opens().begin(), s.opens().end()))
    return false;
  if (!isScattered(s) || !isScattered(finer)) return false;
  for (int x = 0; x < s.size(); ++x)
    if (rankOfPoint(s, x) != rankOfPoint(finer, x)) return false;
  return true;
}

bool isLExtension(const FiniteSpace& s, const FiniteSpace& finer) {
  if (!isRankPreservingExtension(s, finer)) return false;
  // condition (l) at every point of non-limit rank; finite ranks are never
  // limits, so it applies everywhere here
  for (uint64_t u : finer.opens())
    for (int x : bitsOf(u))
      if (s.minNbhd(x) & ~u) return false;
  return true;
}

std::vector<FiniteSpace> rankPreservingExtensions(const FiniteSpace& s) {
  if (s.size() > kEnumCap) throw std::invalid_argument("carrier too large for exhaustive enumeration");
  std::vector<FiniteSpace> out;
  for (const auto& t : enumerateTopologies(s.size()))
    if (isRankPreservingExtension(s, t)) out.push_back(t);
  return out;
}

std::vector<FiniteSpace> lExtensions(const FiniteSpace& s) {
  if (s.size() > kEnumCap) throw std::invalid_argument("carrier too large for exhaustive enumeration");
  std::vector<FiniteSpace> out;
  for (const auto& t : enumerateTopologies(s.size()))
    if (isLExtension(s, t)) out.push_back(t);
  return out;
}

bool isMaximal(const FiniteSpace& s) {
  for (const auto& t : rankPreservingExtensions(s))
    if (t != s) return false;
  return true;
}

std::vector<FiniteSpace> maximalExtensions(const FiniteSpace& s) {
  std::vector<FiniteSpace> out;
  for (const auto& t : rankPreservingExtensions(s))
    if (isMaximal(t)) out.push_back(t);
  return out;
}

bool isLMaximalByDef(const FiniteSpace& s) {
  for (const auto& t : lExtensions(s))
    if (t != s) return false;
  return true;
}

bool isLMaximalByCriterion(const FiniteSpace& s, const std::function<bool(int)>& limitHook) {
  auto isLim = [&](int r) { return limitHook ? limitHook(r) : false; };
  auto seq = cbSequence(s);
  for (int x = 0; x < s.size(); ++x) {
    int lambda = rankOfPoint(s, x);
    if (!isLim(lambda)) continue;
    uint64_t oLambda = s.full() & ~seq[lambda];  // points of rank < lambda
    for (uint64_t v : s.opens()) {
      if (v & ~oLambda) continue;
      if (s.isOpen(v | bit(x))) continue;
      bool small = false;
      for (uint64_t u : s.opens()) {
        if (!(u & bit(x))) continue;
        if (rankOfSubset(s, v & u) < lambda) {
          small = true;
          break;
        }
      }
      if (!small) return false;
    }
  }
  return true;
}

FiniteSpace plusTopology(const FiniteSpace& s) {
  std::vector<uint64_t> family = s.opens();
  uint64_t subsets = uint64_t{1} << s.size();
  for (uint64_t a = 0; a < subsets; ++a) family.push_back(dOp(s, a));
  return FiniteSpace::generated(s.size(), family);
}

std::vector<FiniteSpace> enumerateTopologies(int size) {
  if (size < 0 || size > kEnumCap) throw std::invalid_argument("size out of range for topology enumeration");
  std::vector<FiniteSpace> out;
  if (size == 0) {
    out.push_back(FiniteSpace(0, {0}));
    return out;
  }
  // enumerate minimal-neighborhood matrices: x in nb[x], and y in nb[x]
  // forces nb[y] inside nb[x]
  std::vector<uint64_t> nb(size);
  auto rec = [&](auto&& self, int x) -> void {
    if (x == size) {
      for (int a = 0; a < size; ++a)
        for (int b : bitsOf(nb[a]))
          if (nb[b] & ~nb[a]) return;
      out.push_back(FiniteSpace(size, opensFromMinNbhds(size, nb)));
      return;
    }
    uint64_t others = ((uint64_t{1} << size) - 1) & ~bit(x);
    uint64_t sub = 0;
    while (true) {
      nb[x] = sub | bit(x);
      self(self, x + 1);
      if (sub == others) break;
      sub = (sub - others) & others;
    }
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end(),
            [](const FiniteSpace& a, const FiniteSpace& b) { return a.opens() < b.opens(); });
  return out;
}

std::vector<FiniteSpace> enumerateScatteredTopologies(int size) {
  std::vector<FiniteSpace> out;
  for (auto& t : enumerateTopologies(size))
    if (isScattered(t)) out.push_back(std::move(t));
  return out;
}

bool isGLPSpace(const PolySpace& p) {
  for (const auto& t : p.topologies)
    if (t.size() != p.size) throw std::invalid_argument("polyspace carrier mismatch");
  if (p.topologies.empty()) return true;
  uint64_t subsets = uint64_t{1} << p.size;
  for (size_t i = 0; i < p.topologies.size(); ++i) {
    if (!isScattered(p.topologies[i])) return false;
    if (i + 1 < p.topologies.size()) {
      const auto& cur = p.topologies[i].opens();
      const auto& nxt = p.topologies[i + 1].opens();
      if (!std::includes(nxt.begin(), nxt.end(), cur.begin(), cur.end())) return false;
      for (uint64_t a = 0; a < subsets; ++a)
        if (!p.topologies[i + 1].isOpen(dOp(p.topologies[i], a))) return false;
    }
  }
  return true;
}

uint64_t evalPolySpace(const PolySpace& p, const std::map<std::string, uint64_t>& valuation,
                       const Formula& f) {
  auto mm = maxModality(f);
  if (mm && *mm + 1 > static_cast<int>(p.topologies.size()))
    throw std::invalid_argument("formula modality exceeds polyspace arity");
  uint64_t full = p.size == 0 ? 0 : ((uint64_t{1} << p.size) - 1);
  std::function<uint64_t(const Formula&)> ev = [&](const Formula& g) -> uint64_t {
    switch (g.op) {
      case FOp::Bottom: return 0;
      case FOp::Var: {
        auto it = valuation.find(g.name);
        return it == valuation.end() ? 0 : (it->second & full);
      }
      case FOp::Not: return full & ~ev(*g.lhs);
      case FOp::And: return ev(*g.lhs) & ev(*g.rhs);
      case FOp::Or: return ev(*g.lhs) | ev(*g.rhs);
      case FOp::Implies: return (full & ~ev(*g.lhs)) | ev(*g.rhs);
      case FOp::Box: return dTildeOp(p.topologies[g.index], ev(*g.lhs));
      case FOp::Diamond: return dOp(p.topologies[g.index], ev(*g.lhs));
    }
    return 0;
  };
  return ev(f);
}

std::vector<PolySpace> enumerateGLPSpaces(int size, int arity) {
  auto topos = enumerateTopologies(size);
  std::vector<PolySpace> out;
  std::vector<int> pick;
  auto rec = [&](auto&& self) -> void {
    if (static_cast<int>(pick.size()) == arity) {
      PolySpace p;
      p.size = size;
      for (int i : pick) p.topologies.push_back(topos[i]);
      if (isGLPSpace(p)) out.push_back(std::move(p));
      return;
    }
    for (size_t i = 0; i < topos.size(); ++i) {
      if (!pick.empty()) {
        const auto& prev = topos[pick.back()].opens();
        const auto& cur = topos[i].opens();
        if (!std::includes(cur.begin(), cur.end(), prev.begin(), prev.end())) continue;
      } else if (!isScattered(topos[i])) {
        continue;
      }
      pick.push_back(static_cast<int>(i));
      self(self);
      pick.pop_back();
    }
  };
  rec(rec);
  return out;
}

DeltaOperator::DeltaOperator(int size, std::vector<uint64_t> table) : size_(size), table_(std::move(table)) {
  if (size < 0 || size > kMaxCarrier) throw std::invalid_argument("carrier size out of range");
  if (table_.size() != (uint64_t{1} << size)) throw std::invalid_argument("delta table has wrong length");
  uint64_t fullMask = size == 0 ? 0 : ((uint64_t{1} << size) - 1);
  for (uint64_t v : table_)
    if (v & ~fullMask) throw std::invalid_argument("delta value outside the carrier");
}

bool isMagari(const DeltaOperator& d) {
  uint64_t subsets = uint64_t{1} << d.size();
  if (d.apply(0) != 0) return false;
  for (uint64_t a = 0; a < subsets; ++a) {
    for (uint64_t b = a; b < subsets; ++b)
      if (d.apply(a | b) != (d.apply(a) | d.apply(b))) return false;
    if (d.apply(a) != d.apply(a & ~d.apply(a))) return false;
  }
  return true;
}

FiniteSpace magariToSpace(const DeltaOperator& d) {
  if (!isMagari(d)) throw std::invalid_argument("operator is not Magari");
  uint64_t subsets = uint64_t{1} << d.size();
  uint64_t fullMask = d.size() == 0 ? 0 : ((uint64_t{1} << d.size()) - 1);
  std::vector<uint64_t> opens;
  for (uint64_t a = 0; a < subsets; ++a)
    if (!(d.apply(a) & ~a)) opens.push_back(fullMask & ~a);  // closed sets are the delta-stable ones
  return FiniteSpace(d.size(), std::move(opens));
}

DeltaOperator spaceToDelta(const FiniteSpace& s) {
  uint64_t subsets = uint64_t{1} << s.size();
  std::vector<uint64_t> table(subsets);
  for (uint64_t a = 0; a < subsets; ++a) table[a] = dOp(s, a);
  return DeltaOperator(s.size(), std::move(table));
}

DProductResult dProduct(const FiniteSpace& x, const FiniteSpace& y) {
  DProductResult r;
  uint64_t dy = dOp(y, y.full());
  for (int p = 0; p < y.size(); ++p)
    ((dy >> p) & 1 ? r.limitPoints : r.isoPoints).push_back(p);
  int nx = x.size();
  int zsize = nx * static_cast<int>(r.isoPoints.size()) + static_cast<int>(r.limitPoints.size());
  if (zsize > kMaxCarrier) throw std::invalid_argument("d-product carrier too large");
  int z0 = nx * static_cast<int>(r.isoPoints.size());
  r.z0Mask = z0 == 0 ? 0 : ((uint64_t{1} << z0) - 1);
  r.pi0.assign(zsize, -1);
  r.pi1.assign(zsize, -1);
  for (size_t i = 0; i < r.isoPoints.size(); ++i)
    for (int p = 0; p < nx; ++p) {
      r.pi0[i * nx + p] = p;
      r.pi1[i * nx + p] = r.isoPoints[i];
    }
  for (size_t j = 0; j < r.limitPoints.size(); ++j) r.pi1[z0 + static_cast<int>(j)] = r.limitPoints[j];

  std::vector<uint64_t> family;
  for (size_t i = 0; i < r.isoPoints.size(); ++i)
    for (uint64_t v : x.opens()) family.push_back(v << (i * nx));
  for (uint64_t u : y.opens()) {
    uint64_t pre = 0;
    for (int z = 0; z < zsize; ++z)
      if (u & bit(r.pi1[z])) pre |= bit(z);
    family.push_back(pre);
  }
  r.space = FiniteSpace::generated(zsize, family);
  return r;
}

PolySpace glpDProduct(const PolySpace& p, const PolySpace& q) {
  if (p.topologies.size() != q.topologies.size())
    throw std::invalid_argument("polyspace arity mismatch");
  if (p.topologies.empty()) throw std::invalid_argument("empty polyspace");
  DProductResult base = dProduct(p.topologies[0], q.topologies[0]);
  int zsize = base.space.size();
  PolySpace out;
  out.size = zsize;
  out.topologies.push_back(base.space);
  int nx = p.topologies[0].size();
  int blocks = static_cast<int>(base.isoPoints.size());
  uint64_t dyMask = 0;
  for (int pnt : base.limitPoints) dyMask |= bit(pnt);
  for (size_t i = 1; i < p.topologies.size(); ++i) {
    // sum of the tau_i copies and of sigma_i restricted to dY
    FiniteSpace sigmaOnDy = q.topologies[i].subspace(dyMask);
    std::vector<uint64_t> opens;
    uint64_t subsets = uint64_t{1} << zsize;
    uint64_t xfull = nx == 0 ? 0 : ((uint64_t{1} << nx) - 1);
    for (uint64_t w = 0; w < subsets; ++w) {
      bool ok = true;
      for (int b = 0; b < blocks && ok; ++b) {
        uint64_t tr = (w >> (b * nx)) & xfull;
        if (!p.topologies[i].isOpen(tr)) ok = false;
      }
      if (ok) {
        uint64_t tr = w >> (blocks * nx);
        if (!sigmaOnDy.isOpen(tr)) ok = false;
      }
      if (ok) opens.push_back(w);
    }
    out.topologies.push_back(FiniteSpace(zsize, std::move(opens)));
  }
  return out;
}

PolySpace treeAsPolySpace(const JTree& t) {
  PolySpace p;
  p.size = t.size();
  uint64_t subsets = uint64_t{1} << t.size();
  for (int k = 0; k <= t.n; ++k) {
    std::vector<uint64_t> opens;
    for (uint64_t u = 0; u < subsets; ++u) {
      bool upset = true;
      for (int x : bitsOf(u))
        if (t.rel[k][x] & ~u) {
          upset = false;
          break;
        }
      if (upset) opens.push_back(u);
    }
    p.topologies.push_back(FiniteSpace(t.size(), std::move(opens)));
  }
  return p;
}

namespace {

uint64_t preimage(const std::vector<int>& f, int xsize, uint64_t targetMask) {
  uint64_t pre = 0;
  for (int p = 0; p < xsize; ++p)
    if (targetMask & bit(f[p])) pre |= bit(p);
  return pre;
}

}  // namespace

bool jMorphismConditions34(const PolySpace& p, const JTree& t, const std::vector<int>& f) {
  int n = t.n;
  for (int k = 0; k < n; ++k) {
    for (int w : hereditaryRoots(t, k + 1)) {
      uint64_t star = unionStar(t, k, w);
      uint64_t pre = preimage(f, p.size, star);
      uint64_t preW = preimage(f, p.size, star | bit(w));
      if (!p.topologies[k].isOpen(pre)) return false;
      if (!p.topologies[k].isOpen(preW)) return false;
      uint64_t fiber = preimage(f, p.size, bit(w));
      for (int x : bitsOf(fiber))
        if ((p.topologies[k].minNbhd(x) & fiber) != bit(x)) return false;
    }
  }
  return true;
}

bool jMorphismStarCondition(const PolySpace& p, const JTree& t, const std::vector<int>& f) {
  int n = t.n;
  for (int k = 0; k < n; ++k) {
    for (int w : hereditaryRoots(t, k + 1)) {
      uint64_t star = unionStar(t, k, w);
      uint64_t pre = preimage(f, p.size, star);
      uint64_t preW = preimage(f, p.size, star | bit(w));
      if (preW & ~dTildeOp(p.topologies[k], pre)) return false;
    }
  }
  return true;
}

bool isJnMorphism(const PolySpace& p, const JTree& t, const std::vector<int>& f) {
  if (static_cast<int>(f.size()) != p.size) throw std::invalid_argument("map arity mismatch");
  if (p.topologies.size() != static_cast<size_t>(t.n + 1))
    throw std::invalid_argument("polyspace arity must match the frame");
  PolySpace sigma = treeAsPolySpace(t);
  // (j1)
  if (!isDMap(p.topologies[t.n], sigma.topologies[t.n], f)) return false;
  // (j2)
  for (int k = 0; k <= t.n; ++k)
    for (uint64_t u : p.topologies[k].opens()) {
      uint64_t img = 0;
      for (int q : bitsOf(u)) img |= bit(f[q]);
      if (!sigma.topologies[k].isOpen(img)) return false;
    }
  // (j3), (j4)
  return jMorphismConditions34(p, t, f);
}

std::optional<PolySpace> neighborhoodToGLPSpace(const std::vector<DeltaOperator>& deltas) {
  if (deltas.empty()) return std::nullopt;
  int size = deltas[0].size();
  for (const auto& d : deltas)
    if (d.size() != size) throw std::invalid_argument("operator carrier mismatch");
  uint64_t subsets = uint64_t{1} << size;
  uint64_t fullMask = size == 0 ? 0 : ((uint64_t{1} << size) - 1);
  auto tilde = [&](const DeltaOperator& d, uint64_t a) { return fullMask & ~d.apply(fullMask & ~a); };
  // GL axioms per operator
  for (const auto& d : deltas)
    if (!isMagari(d)) return std::nullopt;
  // axiom (iv): [m]A implies [n]A, and (v): <m>A implies [n]<m>A, for m < n
  for (size_t m = 0; m < deltas.size(); ++m)
    for (size_t n = m + 1; n < deltas.size(); ++n)
      for (uint64_t a = 0; a < subsets; ++a) {
        if (tilde(deltas[m], a) & ~tilde(deltas[n], a)) return std::nullopt;
        if (deltas[m].apply(a) & ~tilde(deltas[n], deltas[m].apply(a))) return std::nullopt;
      }
  PolySpace p;
  p.size = size;
  for (const auto& d : deltas) p.topologies.push_back(magariToSpace(d));
  if (!isGLPSpace(p)) return std::nullopt;        // holds by construction; cheap cross-check
  for (size_t i = 0; i < deltas.size(); ++i)
    if (!(spaceToDelta(p.topologies[i]) == deltas[i])) return std::nullopt;
  return p;
}

}  // namespace glpwb
