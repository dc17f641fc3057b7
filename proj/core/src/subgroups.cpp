#include <algorithm>
#include <map>
#include <unordered_set>

#include "htlab/error.hpp"
#include "htlab/perm.hpp"
#include "perm_internal.hpp"

namespace htlab::perm {

namespace {

using Bits = std::vector<std::uint64_t>;

struct Candidate {
  std::vector<Perm> gens;
  Bits members;  // over Lehmer ranks of S_n
  std::uint64_t order = 0;
  std::vector<std::vector<int>> cycle_types;  // sorted multiset
  std::vector<int> orbit_sizes;
};

Bits closure_bits(int n, const std::vector<Perm>& gens, std::uint64_t nfact, std::uint64_t& order) {
  Bits bits((nfact + 63) / 64, 0);
  auto mark = [&](const Perm& p) {
    std::uint64_t r = lehmer_rank(p);
    std::uint64_t& w = bits[r / 64];
    const std::uint64_t m = 1ULL << (r % 64);
    if (w & m)
      return false;
    w |= m;
    return true;
  };
  std::vector<Perm> elems{Perm::identity(n)};
  mark(elems.front());
  for (std::size_t i = 0; i < elems.size(); ++i)
    for (const Perm& g : gens) {
      Perm p = g * elems[i];
      if (mark(p))
        elems.push_back(p);
    }
  order = elems.size();
  return bits;
}

bool test_bit(const Bits& b, std::uint64_t r) { return (b[r / 64] >> (r % 64)) & 1ULL; }

Candidate describe(int n, std::vector<Perm> gens, std::uint64_t nfact) {
  Candidate c;
  c.gens = std::move(gens);
  c.members = closure_bits(n, c.gens, nfact, c.order);
  PermGroup g(n, c.gens);
  for (const Perm& p : g.elements())
    c.cycle_types.push_back(p.cycle_type());
  std::sort(c.cycle_types.begin(), c.cycle_types.end());
  for (const auto& o : orbit_profile(g).orbits)
    c.orbit_sizes.push_back(static_cast<int>(o.size()));
  std::sort(c.orbit_sizes.begin(), c.orbit_sizes.end());
  return c;
}

bool conjugate_into(const Candidate& k, const Candidate& r, const std::vector<Perm>& sym) {
  for (const Perm& c : sym) {
    const Perm ci = c.inverse();
    bool ok = true;
    for (const Perm& g : k.gens)
      if (!test_bit(r.members, lehmer_rank(c * g * ci))) {
        ok = false;
        break;
      }
    if (ok)
      return true;
  }
  return false;
}

}  // namespace

std::vector<PermGroup> subgroup_classes(int n) {
  check_degree(n, 7);
  const std::uint64_t nfact = factorial(n);
  const std::vector<Perm> sym = PermGroup::symmetric(n).elements();

  std::vector<Candidate> reps;
  std::unordered_set<std::string> seen;
  auto key_of = [](const Bits& b) {
    return std::string(reinterpret_cast<const char*>(b.data()), b.size() * sizeof(std::uint64_t));
  };
  reps.push_back(describe(n, {}, nfact));
  seen.insert(key_of(reps.front().members));

  for (std::size_t ri = 0; ri < reps.size(); ++ri) {
    for (const Perm& x : sym) {
      if (test_bit(reps[ri].members, lehmer_rank(x)))
        continue;
      std::vector<Perm> gens = reps[ri].gens;
      gens.push_back(x);
      std::uint64_t order = 0;
      Bits bits = closure_bits(n, gens, nfact, order);
      if (!seen.insert(key_of(bits)).second)
        continue;
      Candidate k = describe(n, std::move(gens), nfact);
      bool known = false;
      for (const Candidate& r : reps)
        if (r.order == k.order && r.orbit_sizes == k.orbit_sizes && r.cycle_types == k.cycle_types &&
            conjugate_into(k, r, sym)) {
          known = true;
          break;
        }
      if (!known)
        reps.push_back(std::move(k));
    }
  }

  std::vector<PermGroup> out;
  std::vector<std::pair<std::pair<std::uint64_t, std::vector<Perm>>, std::size_t>> order_key;
  for (std::size_t i = 0; i < reps.size(); ++i)
    order_key.push_back({{reps[i].order, PermGroup(n, reps[i].gens).elements()}, i});
  std::sort(order_key.begin(), order_key.end());
  for (const auto& ok : order_key) {
    PermGroup g(n, reps[ok.second].gens);
    g.elements();
    out.push_back(g);
  }
  return out;
}

std::vector<FixboundRow> audit_fixbound(int n) {
  const auto classes = subgroup_classes(n);
  const PermGroup G = PermGroup::symmetric(n);
  const auto& gel = G.elements();
  const std::size_t words = (gel.size() + 63) / 64;
  std::map<std::uint64_t, std::size_t> index;
  for (std::size_t i = 0; i < gel.size(); ++i)
    index[gel[i].key()] = i;

  std::vector<FixboundRow> rows;
  for (std::size_t id = 0; id < classes.size(); ++id) {
    const PermGroup& H = classes[id];
    FixboundRow row;
    row.id = id;
    row.order = H.elements().size();
    row.fixed = orbit_profile(H).fixed_points.size();
    row.generators = H.generators();

    // Coverage of each non-trivial p: the conjugators g with g^-1 p g in H.
    std::map<std::uint64_t, std::pair<Perm, Bits>> cov;
    for (std::size_t gi = 0; gi < gel.size(); ++gi) {
      const Perm& g = gel[gi];
      const Perm gi_inv = g.inverse();
      for (const Perm& h : H.elements()) {
        if (h.is_identity())
          continue;
        Perm p = g * h * gi_inv;
        auto [it, fresh] = cov.try_emplace(p.key(), p, Bits(words, 0));
        it->second.second[gi / 64] |= 1ULL << (gi % 64);
      }
    }
    std::vector<std::pair<Perm, Bits>> cand;
    for (auto& [k, v] : cov)
      cand.push_back(std::move(v));
    auto is_full = [&](const Bits& b) {
      for (std::size_t i = 0; i < gel.size(); ++i)
        if (!((b[i / 64] >> (i % 64)) & 1ULL))
          return false;
      return true;
    };
    std::optional<std::vector<Perm>> best;
    for (const auto& c : cand)
      if (is_full(c.second)) {
        ++row.confining_singletons;
        if (!best)
          best = std::vector<Perm>{c.first};
      }
    // Pairs: any non-trivial partner works once one element already confines.
    const std::uint64_t nontrivial = gel.size() - 1;
    std::uint64_t pairs_with_singleton = 0;
    if (row.confining_singletons) {
      const std::uint64_t s = row.confining_singletons;
      pairs_with_singleton = s * (nontrivial - s) + s * (s - 1) / 2;
    }
    std::uint64_t other_pairs = 0;
    for (std::size_t a = 0; a < cand.size(); ++a) {
      if (is_full(cand[a].second))
        continue;
      for (std::size_t b = a + 1; b < cand.size(); ++b) {
        if (is_full(cand[b].second))
          continue;
        Bits u = cand[a].second;
        for (std::size_t w = 0; w < words; ++w)
          u[w] |= cand[b].second[w];
        if (is_full(u)) {
          ++other_pairs;
          if (!best)
            best = std::vector<Perm>{cand[a].first, cand[b].first};
        }
      }
    }
    row.confining_pairs = pairs_with_singleton + other_pairs;
    row.smallest = best;
    const bool single_violation = row.confining_singletons > 0 && row.fixed > 0;
    const bool pair_violation = row.confining_pairs > 0 && row.fixed > 1;
    row.violation = single_violation || pair_violation;
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace htlab::perm
