#include "htlab/dynamics.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "htlab/error.hpp"

namespace htlab::vd {

using cantor::Antichain;

// ---------------------------------------------------------------------------
// Brin decomposition

namespace {

std::vector<Pair> restrict_to(int d, const PrefixMap& g, const ClopenSet& y) {
  std::vector<Pair> id;
  for (const Word& w : y.cells())
    id.push_back({w, w});
  return reduce_pairs(d, compose_pairs(g.pairs(), id));
}

std::vector<Pair> partial_power(int d, std::vector<Pair> base, long n) {
  std::vector<Pair> acc;
  bool have = false;
  while (n > 0) {
    if (n & 1L) {
      acc = have ? reduce_pairs(d, compose_pairs(acc, base)) : base;
      have = true;
    }
    n >>= 1;
    if (n)
      base = reduce_pairs(d, compose_pairs(base, base));
  }
  return acc;
}

bool is_identity_table(const std::vector<Pair>& t) {
  return std::all_of(t.begin(), t.end(), [](const Pair& p) { return p.domain == p.range; });
}

}  // namespace

BrinDecomposition brin_decomposition(const PrefixMap& g, const BrinOptions& opts) {
  const int d = g.arity();
  const PrefixMap ginv = invert(g);
  BrinDecomposition out;

  std::vector<ClopenSet> fix_by_power;  // index n-1 -> fixed_interior(g^n)
  ClopenSet y_acc(d);
  std::set<EvPeriodicPoint> seen;
  std::vector<Word> u_cells, v_cells;

  bool done = false;
  PrefixMap gn = PrefixMap::identity(d);
  for (long n = 1; n <= opts.max_power; ++n) {
    gn = compose(g, gn);
    out.powers_examined = n;
    ClopenSet fi = fixed_interior(gn);
    fix_by_power.push_back(fi);
    y_acc = cantor::set_union(y_acc, fi);

    for (const Pair& p : gn.pairs()) {
      if (p.domain == p.range || !p.domain.comparable(p.range))
        continue;
      const bool attracting = p.domain.size() < p.range.size();
      const Word& shorter = attracting ? p.domain : p.range;
      const Word& longer = attracting ? p.range : p.domain;
      // The fixed point of w.xi -> ws.xi (or ws.xi -> w.xi) is w.s^infinity.
      EvPeriodicPoint pt(shorter, longer.drop(shorter.size()));
      if (!seen.insert(pt).second)
        continue;
      out.certificate.push_back({p.domain, p.range, n, attracting, pt});
      (attracting ? out.att : out.rep).push_back(pt);
      (attracting ? u_cells : v_cells).push_back(p.domain);
    }

    ClopenSet z = cantor::complement(y_acc);
    if (z.empty()) {
      out.Y = y_acc;
      out.Z = z;
      done = true;
      break;
    }
    if (u_cells.empty() || v_cells.empty())
      continue;

    // Every point of Z must reach U u V in finitely many steps; then every
    // periodic point of Z is one of the certified ones and Y is maximal.
    ClopenSet w = cantor::set_union(ClopenSet(d, u_cells), ClopenSet(d, v_cells));
    bool certified = false;
    for (long k = 0; k <= opts.max_settle; ++k) {
      if (cantor::is_subset(z, w)) {
        certified = true;
        out.settle_steps = k;
        break;
      }
      ClopenSet next = cantor::set_union(w, evaluate(ginv, w));
      if (next == w)
        break;
      w = std::move(next);
    }
    if (certified) {
      out.Y = y_acc;
      out.Z = z;
      done = true;
      break;
    }
  }
  if (!done)
    throw BudgetExceeded("Brin decomposition not certified within power budget", out.powers_examined);

  std::sort(out.att.begin(), out.att.end());
  std::sort(out.rep.begin(), out.rep.end());

  if (!out.Y.empty()) {
    long order = 1;
    for (std::size_t m = 0; m < fix_by_power.size(); ++m) {
      ClopenSet fresh = fix_by_power[m];
      for (std::size_t j = 0; j < m; ++j)
        if ((m + 1) % (j + 1) == 0)
          fresh = cantor::set_difference(fresh, fix_by_power[j]);
      if (!fresh.empty()) {
        out.y_periods.push_back(static_cast<long>(m + 1));
        order = std::lcm(order, static_cast<long>(m + 1));
      }
    }
    if (!is_identity_table(partial_power(d, restrict_to(d, g, out.Y), order)))
      throw DomainError("internal: computed order does not trivialize g on Y");
    out.order_on_y = order;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Orbits and witnesses

std::optional<std::pair<std::size_t, std::size_t>> same_orbit(const EvPeriodicPoint& x,
                                                              const EvPeriodicPoint& y) {
  cantor::require_same_arity(x.arity(), y.arity());
  const std::size_t mx = x.preperiod().size() + x.period().size();
  const std::size_t my = y.preperiod().size() + y.period().size();
  std::optional<std::pair<std::size_t, std::size_t>> best;
  for (std::size_t m = 0; m < mx; ++m) {
    const EvPeriodicPoint xs = x.shift(m);
    for (std::size_t n = 0; n < my; ++n) {
      if (best && m + n >= best->first + best->second)
        break;
      if (xs == y.shift(n))
        best = {m, n};
    }
  }
  return best;
}

namespace {

bool pairwise_incomparable(const std::vector<Word>& cells) {
  std::vector<Word> s = cells;
  std::sort(s.begin(), s.end());
  for (std::size_t i = 1; i < s.size(); ++i)
    if (s[i - 1].is_prefix_of(s[i]))
      return false;
  return true;
}

bool completable(int d, const std::vector<Word>& dom, const std::vector<Word>& ran) {
  return cantor::ClopenSet(d, dom).is_full() == cantor::ClopenSet(d, ran).is_full();
}

void require_distinct(const std::vector<EvPeriodicPoint>& pts, const char* what) {
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (pts[i] == pts[j])
        throw DomainError(std::string("duplicate ") + what + " point at indices " + std::to_string(i) +
                          " and " + std::to_string(j));
}

constexpr std::size_t kMaxRefinement = 4096;

}  // namespace

PrefixMap transitivity_witness(const std::vector<EvPeriodicPoint>& src,
                               const std::vector<EvPeriodicPoint>& dst) {
  if (src.size() != dst.size())
    throw DomainError("source and target lists differ in length");
  if (src.empty())
    throw DomainError("empty point lists");
  const int d = src.front().arity();
  for (const auto& p : src)
    cantor::require_same_arity(d, p.arity());
  for (const auto& p : dst)
    cantor::require_same_arity(d, p.arity());
  require_distinct(src, "source");
  require_distinct(dst, "target");

  std::vector<std::pair<std::size_t, std::size_t>> shifts;
  for (std::size_t i = 0; i < src.size(); ++i) {
    auto s = same_orbit(src[i], dst[i]);
    if (!s)
      throw DomainError("points at index " + std::to_string(i) + " are not in the same orbit");
    shifts.push_back(*s);
  }
  for (std::size_t t = 0; t < kMaxRefinement; ++t) {
    std::vector<Word> dom, ran;
    for (std::size_t i = 0; i < src.size(); ++i) {
      dom.push_back(src[i].prefix(shifts[i].first + t));
      ran.push_back(dst[i].prefix(shifts[i].second + t));
    }
    if (!pairwise_incomparable(dom) || !pairwise_incomparable(ran) || !completable(d, dom, ran))
      continue;
    std::vector<Pair> partial;
    for (std::size_t i = 0; i < dom.size(); ++i)
      partial.push_back({dom[i], ran[i]});
    return complete_partial(d, std::move(partial));
  }
  throw BudgetExceeded("transitivity witness refinement", static_cast<long>(kMaxRefinement));
}

namespace {

PrefixMap compress_cells(const std::vector<Word>& cells, const ClopenSet& u) {
  const int d = u.arity();
  if (u.empty())
    throw DomainError("compress: target neighbourhood U is empty");
  if (cells.empty())
    return PrefixMap::identity(d);
  if (cantor::ClopenSet(d, cells).is_full())
    throw DomainError("compress: target is all of X_d, not a proper closed subset");
  const Word v = u.cells().front();
  const std::size_t k = cells.size();
  const std::size_t step = static_cast<std::size_t>(d - 1);
  std::size_t kk = k;
  while ((kk - 1) % step != 0 || (v.empty() && kk == k))
    ++kk;
  auto slots = cantor::pad_antichain(Antichain(d, {v}), kk).cells();
  std::vector<Pair> partial;
  for (std::size_t i = 0; i < k; ++i)
    partial.push_back({cells[i], slots[i]});
  return complete_partial(d, std::move(partial));
}

}  // namespace

PrefixMap compress(const ClopenSet& target, const ClopenSet& u) {
  cantor::require_same_arity(target.arity(), u.arity());
  if (target.is_full())
    throw DomainError("compress: target is all of X_d, not a proper closed subset");
  return compress_cells(target.cells(), u);
}

PrefixMap compress(const std::vector<EvPeriodicPoint>& target, const ClopenSet& u) {
  const int d = u.arity();
  for (const auto& p : target)
    cantor::require_same_arity(d, p.arity());
  require_distinct(target, "target");
  if (u.empty())
    throw DomainError("compress: target neighbourhood U is empty");
  if (target.empty())
    return PrefixMap::identity(d);
  for (std::size_t t = 1; t < kMaxRefinement; ++t) {
    std::vector<Word> cells;
    for (const auto& p : target)
      cells.push_back(p.prefix(t));
    if (!pairwise_incomparable(cells) || cantor::ClopenSet(d, cells).is_full())
      continue;
    return compress_cells(cells, u);
  }
  throw BudgetExceeded("compress point separation", static_cast<long>(kMaxRefinement));
}

PrefixMap match_germs(const PrefixMap& g, const std::vector<EvPeriodicPoint>& points) {
  const int d = g.arity();
  for (const auto& p : points)
    cantor::require_same_arity(d, p.arity());
  require_distinct(points, "germ");
  if (points.empty())
    return PrefixMap::identity(d);
  for (std::size_t t = 0; t < kMaxRefinement; ++t) {
    std::vector<Pair> partial;
    std::vector<Word> dom;
    for (const auto& p : points) {
      const Pair* pr = g.pair_for(p);
      Word w = p.prefix(pr->domain.size() + t);
      partial.push_back({w, pr->range + w.drop(pr->domain.size())});
      dom.push_back(w);
    }
    if (!pairwise_incomparable(dom))
      continue;
    return complete_partial(d, std::move(partial));
  }
  throw BudgetExceeded("germ separation", static_cast<long>(kMaxRefinement));
}

namespace generators {

PrefixMap A() { return PrefixMap::make(2, {{"0", "00"}, {"10", "01"}, {"11", "1"}}); }
PrefixMap B() { return PrefixMap::make(2, {{"0", "0"}, {"10", "100"}, {"110", "101"}, {"111", "11"}}); }
PrefixMap C() { return PrefixMap::make(2, {{"0", "11"}, {"10", "0"}, {"11", "10"}}); }
PrefixMap pi0() { return PrefixMap::make(2, {{"0", "10"}, {"10", "0"}, {"11", "11"}}); }
PrefixMap pi1() { return PrefixMap::make(2, {{"0", "0"}, {"10", "110"}, {"110", "10"}, {"111", "111"}}); }
std::vector<PrefixMap> standard() { return {A(), B(), C(), pi0(), pi1()}; }

}  // namespace generators

}  // namespace htlab::vd
