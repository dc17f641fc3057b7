#pragma once

// Checks a Brin decomposition by set identities and by iterating finite
// truncations of sampled points with the table oracle.

#include <algorithm>
#include <optional>
#include <string>

#include "htlab/dynamics.hpp"
#include "htlab/random.hpp"
#include "oracles/words.hpp"

namespace oracle {

struct BrinAuditParams {
  std::size_t samples = 30;
  std::size_t sample_depth = 15;
  std::size_t neighbourhood = 10;
  std::size_t steps = 50;
};

inline bool near(const std::string& w, const std::vector<htlab::cantor::EvPeriodicPoint>& pts, std::size_t depth) {
  for (const auto& p : pts)
    if (w.compare(0, depth, unroll(p, depth)) == 0)
      return true;
  return false;
}

// Iterates the table on a long truncation; returns the step at which the
// prefix enters the neighbourhood, or nullopt.
inline std::optional<std::size_t> steps_to_enter(const Table& t, std::string w,
                                                 const std::vector<htlab::cantor::EvPeriodicPoint>& target,
                                                 std::size_t depth, std::size_t steps) {
  for (std::size_t s = 0; s <= steps; ++s) {
    if (near(w, target, depth))
      return s;
    w = oracle::apply(t, w);
    if (w.size() < depth || w == "?")
      return std::nullopt;
  }
  return std::nullopt;
}

// Empty string on success, else a description of the first failure.
inline std::string audit_brin(const htlab::vd::PrefixMap& g, const htlab::vd::BrinDecomposition& b,
                              htlab::random::Rng& rng, const BrinAuditParams& prm = {}) {
  using namespace htlab;
  const int d = g.arity();
  if (!cantor::disjoint(b.Y, b.Z) || !cantor::set_union(b.Y, b.Z).is_full())
    return "Y and Z do not partition X_d";
  if (vd::evaluate(g, b.Y) != b.Y || vd::evaluate(g, b.Z) != b.Z)
    return "Y or Z not invariant";
  if (b.Y.empty() != !b.order_on_y.has_value())
    return "order present iff Y non-empty violated";
  if (b.order_on_y) {
    const auto table = table_of(vd::power(g, *b.order_on_y));
    for (const auto& w : members(b.Y, b.Y.max_depth())) {
      const std::string tail(40, static_cast<char>('0' + (d - 1)));
      if (oracle::apply(table, w + tail).compare(0, w.size(), w) != 0)
        return "g^order moves cell " + w;
    }
    const auto fix = vd::fixed_interior(vd::power(g, *b.order_on_y));
    if (!cantor::is_subset(b.Y, fix))
      return "g^order not the identity on Y";
  }
  if (b.Z.empty())
    return b.att.empty() && b.rep.empty() ? "" : "att/rep outside empty Z";
  if (b.att.empty() || b.rep.empty())
    return "infinite order but att or rep empty";
  for (const auto& p : b.att)
    for (const auto& q : b.rep)
      if (p == q)
        return "att and rep intersect";
  for (const auto* set : {&b.att, &b.rep})
    for (const auto& p : *set)
      if (!cantor::contains_point(b.Z, p))
        return "periodic point " + p.str() + " outside Z";
  for (const auto& c : b.certificate) {
    if (!(c.domain.is_prefix_of(c.range) || c.range.is_prefix_of(c.domain)) || c.domain == c.range)
      return "certificate cell without strict prefix relation";
    if (!c.point.has_prefix(c.domain) || vd::evaluate(vd::power(g, c.power), c.point) != c.point)
      return "certificate point " + c.point.str() + " not fixed by its power";
    const auto& list = c.attracting ? b.att : b.rep;
    if (std::find(list.begin(), list.end(), c.point) == list.end())
      return "certificate point " + c.point.str() + " not listed";
  }

  const auto fwd = table_of(g), bwd = table_of(vd::invert(g));
  std::size_t found = 0;
  for (std::size_t attempt = 0; attempt < prm.samples * 200 && found < prm.samples; ++attempt) {
    const auto pre = random::random_word(rng, d, prm.sample_depth);
    const auto tail = random::random_word(rng, d, random::uniform(rng, 1, 3));
    const htlab::cantor::EvPeriodicPoint x(pre, tail);
    if (!cantor::contains_point(b.Z, x))
      continue;
    ++found;
    const std::string w = unroll(x, prm.sample_depth + 40 * prm.steps);
    if (!near(w, b.rep, prm.neighbourhood) &&
        !steps_to_enter(fwd, w, b.att, prm.neighbourhood, prm.steps))
      return "forward orbit of " + x.str() + " misses the attractor neighbourhood";
    if (!near(w, b.att, prm.neighbourhood) &&
        !steps_to_enter(bwd, w, b.rep, prm.neighbourhood, prm.steps))
      return "backward orbit of " + x.str() + " misses the repeller neighbourhood";
  }
  return "";
}

}  // namespace oracle
