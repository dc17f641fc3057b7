#include <algorithm>

#include "perm_internal.hpp"

namespace htlab::perm::detail {

namespace {

bool fixes_prefix(const Perm& p, const std::vector<int>& base, std::size_t level) {
  for (std::size_t i = 0; i < level; ++i)
    if (p(base[i]) != base[i])
      return false;
  return true;
}

std::vector<std::optional<Perm>> orbit_transversal(int n, int point, const std::vector<Perm>& gens) {
  std::vector<std::optional<Perm>> t(static_cast<std::size_t>(n));
  t[static_cast<std::size_t>(point)] = Perm::identity(n);
  std::vector<int> queue{point};
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    int x = queue[qi];
    for (const Perm& s : gens) {
      int y = s(x);
      if (!t[static_cast<std::size_t>(y)]) {
        t[static_cast<std::size_t>(y)] = s * *t[static_cast<std::size_t>(x)];
        queue.push_back(y);
      }
    }
  }
  return t;
}

// Sifts g through levels [from, base.size()); returns the residue and the
// level at which sifting stopped (base.size() if it went all the way).
std::pair<Perm, std::size_t> strip(const Bsgs& b, Perm g, std::size_t from) {
  for (std::size_t l = from; l < b.base.size(); ++l) {
    int beta = g(b.base[l]);
    const auto& u = b.transversal[l][static_cast<std::size_t>(beta)];
    if (!u)
      return {g, l};
    g = u->inverse() * g;
  }
  return {g, b.base.size()};
}

}  // namespace

std::uint64_t Bsgs::order() const {
  std::uint64_t o = 1;
  for (const auto& level : transversal)
    o *= static_cast<std::uint64_t>(std::count_if(level.begin(), level.end(), [](const auto& u) { return u.has_value(); }));
  return o;
}

bool Bsgs::contains(const Perm& p) const {
  if (p.degree() != n)
    return false;
  auto [res, level] = strip(*this, p, 0);
  return level == base.size() && res.is_identity();
}

Bsgs schreier_sims(int n, const std::vector<Perm>& gens) {
  Bsgs b;
  b.n = n;
  for (const Perm& g : gens)
    if (!g.is_identity())
      b.strong.push_back(g);
  for (const Perm& g : b.strong)
    if (fixes_prefix(g, b.base, b.base.size()))
      b.base.push_back(g.support().front());

  auto level_gens = [&](std::size_t l) {
    std::vector<Perm> s;
    for (const Perm& g : b.strong)
      if (fixes_prefix(g, b.base, l))
        s.push_back(g);
    return s;
  };
  b.transversal.resize(b.base.size());
  for (std::size_t l = 0; l < b.base.size(); ++l)
    b.transversal[l] = orbit_transversal(n, b.base[l], level_gens(l));

  std::ptrdiff_t i = static_cast<std::ptrdiff_t>(b.base.size()) - 1;
  while (i >= 0) {
    const std::size_t li = static_cast<std::size_t>(i);
    const auto gens_i = level_gens(li);
    b.transversal[li] = orbit_transversal(n, b.base[li], gens_i);
    bool extended = false;
    for (int beta = 0; beta < n && !extended; ++beta) {
      const auto& ub = b.transversal[li][static_cast<std::size_t>(beta)];
      if (!ub)
        continue;
      for (const Perm& s : gens_i) {
        const Perm& usb = *b.transversal[li][static_cast<std::size_t>(s(beta))];
        Perm schreier = usb.inverse() * s * *ub;
        auto [h, j] = strip(b, schreier, li + 1);
        if (j == b.base.size() && h.is_identity())
          continue;
        b.strong.push_back(h);
        if (j == b.base.size()) {
          b.base.push_back(h.support().front());
          b.transversal.emplace_back();
        }
        for (std::size_t l = li + 1; l <= j; ++l)
          b.transversal[l] = orbit_transversal(n, b.base[l], level_gens(l));
        i = static_cast<std::ptrdiff_t>(j);
        extended = true;
        break;
      }
    }
    if (!extended)
      --i;
  }
  return b;
}

std::vector<Perm> enumerate(int n, const std::vector<Perm>& gens) {
  check_degree(n, kMaxEnumDegree);
  std::vector<Perm> elems{Perm::identity(n)};
  std::vector<std::uint64_t> keys{elems.front().key()};
  std::vector<Perm> nontrivial;
  for (const Perm& g : gens)
    if (!g.is_identity())
      nontrivial.push_back(g);
  // Open addressing on keys keeps S_10 enumeration within a few hundred MB.
  std::size_t cap = 64;
  std::vector<std::uint64_t> table(cap, ~0ULL);
  auto insert = [&](std::uint64_t k) {
    if (keys.size() * 2 >= cap) {
      cap *= 2;
      std::vector<std::uint64_t> t2(cap, ~0ULL);
      for (std::uint64_t x : table)
        if (x != ~0ULL) {
          std::size_t h = (x * 0x9E3779B97F4A7C15ULL) & (cap - 1);
          while (t2[h] != ~0ULL)
            h = (h + 1) & (cap - 1);
          t2[h] = x;
        }
      table.swap(t2);
    }
    std::size_t h = (k * 0x9E3779B97F4A7C15ULL) & (cap - 1);
    while (table[h] != ~0ULL) {
      if (table[h] == k)
        return false;
      h = (h + 1) & (cap - 1);
    }
    table[h] = k;
    return true;
  };
  insert(keys.front());
  for (std::size_t qi = 0; qi < elems.size(); ++qi)
    for (const Perm& s : nontrivial) {
      Perm p = s * elems[qi];
      if (insert(p.key())) {
        keys.push_back(p.key());
        elems.push_back(p);
      }
    }
  std::sort(elems.begin(), elems.end());
  return elems;
}

}  // namespace htlab::perm::detail
