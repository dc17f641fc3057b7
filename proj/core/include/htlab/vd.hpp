#pragma once

#include <utility>
#include <vector>

#include "htlab/cantor.hpp"

namespace htlab::vd {

using cantor::ClopenSet;
using cantor::EvPeriodicPoint;
using cantor::Word;

struct Pair {
  Word domain;
  Word range;
  friend bool operator==(const Pair&, const Pair&) = default;
  friend auto operator<=>(const Pair&, const Pair&) = default;
};

// An element of V_d: a bijection between two complete antichains, acting by
// prefix replacement w.xi -> u.xi. Always stored in reduced form, sorted by
// domain cell.
class PrefixMap {
public:
  PrefixMap() : PrefixMap(identity(2)) {}

  static PrefixMap make(int d, std::vector<Pair> pairs);
  static PrefixMap make(int d, const std::vector<std::pair<std::string, std::string>>& digits);
  static PrefixMap identity(int d);

  int arity() const { return d_; }
  const std::vector<Pair>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  bool is_identity() const { return pairs_.size() == 1 && pairs_[0].domain.empty(); }

  // The pair whose domain cell contains a point with this prefix, if the
  // prefix is long enough to decide.
  const Pair* pair_for(const EvPeriodicPoint& p) const;

  friend bool operator==(const PrefixMap&, const PrefixMap&) = default;

private:
  PrefixMap(int d, std::vector<Pair> pairs) : d_(d), pairs_(std::move(pairs)) {}
  friend PrefixMap from_reduced(int d, std::vector<Pair> pairs);

  int d_;
  std::vector<Pair> pairs_;
};

// Merges complete sibling blocks (same parent on both sides, letters matched)
// to a fixpoint. Works for partial tables too.
std::vector<Pair> reduce_pairs(int d, std::vector<Pair> pairs);

// x -> g(h(x)) on partial tables; the result's domain is h^-1(range(h) cap dom(g)).
std::vector<Pair> compose_pairs(const std::vector<Pair>& g, const std::vector<Pair>& h);

PrefixMap make_element(int d, std::vector<Pair> pairs);
PrefixMap compose(const PrefixMap& g, const PrefixMap& h);
PrefixMap invert(const PrefixMap& g);
PrefixMap power(const PrefixMap& g, long n);
bool commute(const PrefixMap& g, const PrefixMap& h);

EvPeriodicPoint evaluate(const PrefixMap& g, const EvPeriodicPoint& x);
ClopenSet evaluate(const PrefixMap& g, const ClopenSet& c);
// Image of a clopen set under a partial table; the set must lie in its domain.
ClopenSet evaluate_partial(int d, const std::vector<Pair>& table, const ClopenSet& c);

ClopenSet fixed_interior(const PrefixMap& g);
ClopenSet support_closure(const PrefixMap& g);

struct Germ {
  EvPeriodicPoint base;
  Pair local;
};
Germ germ_at(const PrefixMap& g, const EvPeriodicPoint& x);
bool germ_equal(const PrefixMap& g, const PrefixMap& h, const EvPeriodicPoint& x);

// Extends a partial prefix bijection to an element; leftover complement cells
// are padded to equal counts and matched in lexicographic order.
PrefixMap complete_partial(int d, std::vector<Pair> partial);

}  // namespace htlab::vd
