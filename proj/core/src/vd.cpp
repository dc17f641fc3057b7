#include "htlab/vd.hpp"

#include <algorithm>

#include "htlab/error.hpp"

namespace htlab::vd {

using cantor::Antichain;
using cantor::require_same_arity;

namespace {

bool is_sibling_block(int d, const std::vector<Pair>& out) {
  const std::size_t n = out.size();
  const std::size_t k = static_cast<std::size_t>(d);
  if (n < k)
    return false;
  const Pair& last = out.back();
  if (last.domain.empty() || last.range.empty())
    return false;
  if (last.domain[last.domain.size() - 1] != d - 1 || last.range[last.range.size() - 1] != d - 1)
    return false;
  const Word dp = last.domain.parent();
  const Word rp = last.range.parent();
  for (std::size_t c = 0; c < k; ++c) {
    const Pair& p = out[n - k + c];
    if (p.domain.size() != last.domain.size() || p.range.size() != last.range.size())
      return false;
    if (p.domain[p.domain.size() - 1] != static_cast<int>(c) ||
        p.range[p.range.size() - 1] != static_cast<int>(c))
      return false;
    if (!dp.is_prefix_of(p.domain) || !rp.is_prefix_of(p.range))
      return false;
  }
  return true;
}

void check_table_side(int d, std::vector<Word> cells, const char* side) {
  std::sort(cells.begin(), cells.end());
  if (auto it = std::adjacent_find(cells.begin(), cells.end()); it != cells.end())
    throw DomainError(std::string("duplicate ") + side + " cell \"" + it->str() + "\"");
  for (std::size_t i = 1; i < cells.size(); ++i)
    if (cells[i - 1].is_prefix_of(cells[i]))
      throw DomainError(std::string(side) + " cells not an antichain: \"" + cells[i - 1].str() +
                        "\" is a prefix of \"" + cells[i].str() + "\"");
  for (const Word& w : cells)
    require_same_arity(d, w.arity());
}

}  // namespace

std::vector<Pair> reduce_pairs(int d, std::vector<Pair> pairs) {
  std::sort(pairs.begin(), pairs.end());
  std::vector<Pair> out;
  out.reserve(pairs.size());
  for (Pair& p : pairs) {
    out.push_back(std::move(p));
    while (is_sibling_block(d, out)) {
      Pair merged{out.back().domain.parent(), out.back().range.parent()};
      out.resize(out.size() - static_cast<std::size_t>(d));
      out.push_back(std::move(merged));
    }
  }
  return out;
}

PrefixMap from_reduced(int d, std::vector<Pair> pairs) { return PrefixMap(d, std::move(pairs)); }

PrefixMap PrefixMap::identity(int d) {
  cantor::check_arity(d);
  return PrefixMap(d, {Pair{Word(d), Word(d)}});
}

PrefixMap PrefixMap::make(int d, std::vector<Pair> pairs) {
  cantor::check_arity(d);
  std::vector<Word> dom, ran;
  for (const Pair& p : pairs) {
    require_same_arity(d, p.domain.arity());
    require_same_arity(d, p.range.arity());
    dom.push_back(p.domain);
    ran.push_back(p.range);
  }
  check_table_side(d, dom, "domain");
  check_table_side(d, ran, "range");
  if (!cantor::is_complete_antichain(d, dom))
    throw DomainError("domain cells do not form a complete antichain");
  if (!cantor::is_complete_antichain(d, ran))
    throw DomainError("range cells do not form a complete antichain");
  return PrefixMap(d, reduce_pairs(d, std::move(pairs)));
}

PrefixMap PrefixMap::make(int d, const std::vector<std::pair<std::string, std::string>>& digits) {
  std::vector<Pair> pairs;
  pairs.reserve(digits.size());
  for (const auto& [w, u] : digits)
    pairs.push_back({Word::parse(d, w), Word::parse(d, u)});
  return make(d, std::move(pairs));
}

PrefixMap make_element(int d, std::vector<Pair> pairs) { return PrefixMap::make(d, std::move(pairs)); }

const Pair* PrefixMap::pair_for(const EvPeriodicPoint& p) const {
  for (const Pair& pr : pairs_)
    if (p.has_prefix(pr.domain))
      return &pr;
  return nullptr;
}

std::vector<Pair> compose_pairs(const std::vector<Pair>& g, const std::vector<Pair>& h) {
  // g must be sorted by domain.
  std::vector<Pair> out;
  for (const Pair& hp : h) {
    const Word& u = hp.range;
    auto it = std::upper_bound(g.begin(), g.end(), u,
                               [](const Word& w, const Pair& p) { return w < p.domain; });
    if (it != g.begin() && std::prev(it)->domain.is_prefix_of(u)) {
      const Pair& gp = *std::prev(it);
      out.push_back({hp.domain, gp.range + u.drop(gp.domain.size())});
      continue;
    }
    auto lo = std::lower_bound(g.begin(), g.end(), u,
                               [](const Pair& p, const Word& w) { return p.domain < w; });
    for (; lo != g.end() && u.is_prefix_of(lo->domain); ++lo)
      out.push_back({hp.domain + lo->domain.drop(u.size()), lo->range});
  }
  return out;
}

PrefixMap compose(const PrefixMap& g, const PrefixMap& h) {
  require_same_arity(g.arity(), h.arity());
  return from_reduced(g.arity(), reduce_pairs(g.arity(), compose_pairs(g.pairs(), h.pairs())));
}

PrefixMap invert(const PrefixMap& g) {
  std::vector<Pair> swapped;
  swapped.reserve(g.size());
  for (const Pair& p : g.pairs())
    swapped.push_back({p.range, p.domain});
  return from_reduced(g.arity(), reduce_pairs(g.arity(), std::move(swapped)));
}

PrefixMap power(const PrefixMap& g, long n) {
  PrefixMap base = n < 0 ? invert(g) : g;
  unsigned long e = n < 0 ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
  PrefixMap acc = PrefixMap::identity(g.arity());
  while (e) {
    if (e & 1UL)
      acc = compose(acc, base);
    e >>= 1;
    if (e)
      base = compose(base, base);
  }
  return acc;
}

bool commute(const PrefixMap& g, const PrefixMap& h) { return compose(g, h) == compose(h, g); }

EvPeriodicPoint evaluate(const PrefixMap& g, const EvPeriodicPoint& x) {
  require_same_arity(g.arity(), x.arity());
  const Pair* p = g.pair_for(x);
  return x.shift(p->domain.size()).prepend(p->range);
}

ClopenSet evaluate_partial(int d, const std::vector<Pair>& table, const ClopenSet& c) {
  require_same_arity(d, c.arity());
  std::vector<Word> out;
  for (const Word& cell : c.cells())
    for (const Pair& p : table) {
      if (p.domain.is_prefix_of(cell))
        out.push_back(p.range + cell.drop(p.domain.size()));
      else if (cell.is_prefix_of(p.domain))
        out.push_back(p.range);
    }
  return ClopenSet(d, std::move(out));
}

ClopenSet evaluate(const PrefixMap& g, const ClopenSet& c) {
  return evaluate_partial(g.arity(), g.pairs(), c);
}

ClopenSet fixed_interior(const PrefixMap& g) {
  // A pair w -> u with w != u fixes no open set: disjoint cylinders carry no
  // fixed points and a strict prefix shift has a single one.
  std::vector<Word> cells;
  for (const Pair& p : g.pairs())
    if (p.domain == p.range)
      cells.push_back(p.domain);
  return ClopenSet(g.arity(), std::move(cells));
}

ClopenSet support_closure(const PrefixMap& g) { return cantor::complement(fixed_interior(g)); }

Germ germ_at(const PrefixMap& g, const EvPeriodicPoint& x) {
  require_same_arity(g.arity(), x.arity());
  return Germ{x, *g.pair_for(x)};
}

bool germ_equal(const PrefixMap& g, const PrefixMap& h, const EvPeriodicPoint& x) {
  require_same_arity(g.arity(), h.arity());
  return fixed_interior(compose(g, invert(h))).contains(evaluate(h, x));
}

PrefixMap complete_partial(int d, std::vector<Pair> partial) {
  cantor::check_arity(d);
  std::vector<Word> dom, ran;
  for (const Pair& p : partial) {
    require_same_arity(d, p.domain.arity());
    require_same_arity(d, p.range.arity());
    dom.push_back(p.domain);
    ran.push_back(p.range);
  }
  check_table_side(d, dom, "partial domain");
  check_table_side(d, ran, "partial range");

  std::vector<Word> dc = cantor::complement(ClopenSet(d, dom)).cells();
  std::vector<Word> rc = cantor::complement(ClopenSet(d, ran)).cells();
  if (dc.empty() != rc.empty())
    throw DomainError("partial map covers X_d on one side only; no completion exists");
  if (dc.size() < rc.size())
    dc = cantor::pad_antichain(Antichain(d, dc), rc.size()).cells();
  else if (rc.size() < dc.size())
    rc = cantor::pad_antichain(Antichain(d, rc), dc.size()).cells();
  for (std::size_t i = 0; i < dc.size(); ++i)
    partial.push_back({dc[i], rc[i]});
  return PrefixMap::make(d, std::move(partial));
}

}  // namespace htlab::vd
