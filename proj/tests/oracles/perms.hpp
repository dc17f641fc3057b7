#pragma once

// Naive permutation group computations on image vectors.

#include <algorithm>
#include <numeric>
#include <set>
#include <vector>

namespace oracle {

using P = std::vector<int>;

inline P mul(const P& p, const P& q) {  // p after q
  P r(q.size());
  for (std::size_t i = 0; i < q.size(); ++i)
    r[i] = p[static_cast<std::size_t>(q[i])];
  return r;
}

inline P inv(const P& p) {
  P r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i)
    r[static_cast<std::size_t>(p[i])] = static_cast<int>(i);
  return r;
}

inline P id(int n) {
  P r(static_cast<std::size_t>(n));
  std::iota(r.begin(), r.end(), 0);
  return r;
}

inline std::set<P> closure(int n, const std::vector<P>& gens) {
  std::set<P> seen{id(n)};
  std::vector<P> frontier{id(n)};
  while (!frontier.empty()) {
    std::vector<P> next;
    for (const auto& x : frontier)
      for (const auto& g : gens) {
        P y = mul(g, x);
        if (seen.insert(y).second)
          next.push_back(y);
      }
    frontier.swap(next);
  }
  return seen;
}

inline std::vector<P> all_perms(int n) {
  std::vector<P> out;
  P p = id(n);
  do
    out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

inline std::set<P> conjugate_set(const P& g, const std::set<P>& H) {
  std::set<P> out;
  const P gi = inv(g);
  for (const auto& h : H)
    out.insert(mul(g, mul(h, gi)));
  return out;
}

// Counts conjugacy classes of subgroups of S_n generated by at most two elements.
inline std::size_t two_generated_subgroup_classes(int n) {
  const auto G = all_perms(n);
  std::set<std::set<P>> subgroups;
  for (std::size_t i = 0; i < G.size(); ++i)
    for (std::size_t j = i; j < G.size(); ++j)
      subgroups.insert(closure(n, {G[i], G[j]}));
  std::set<std::set<P>> reps;
  for (const auto& H : subgroups) {
    std::set<P> best = H;
    for (const auto& g : G)
      best = std::min(best, conjugate_set(g, H));
    reps.insert(best);
  }
  return reps.size();
}

// For every g in G, g H g^-1 meets P.
inline bool naive_confining(const std::vector<P>& Pset, const std::set<P>& H, const std::vector<P>& G) {
  for (const auto& g : G) {
    bool hit = false;
    const P gi = inv(g);
    for (const auto& p : Pset)
      if (H.count(mul(gi, mul(p, g)))) {  // p in gHg^-1 iff g^-1 p g in H
        hit = true;
        break;
      }
    if (!hit)
      return false;
  }
  return true;
}

}  // namespace oracle
