#include "htlab/perm.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "htlab/error.hpp"
#include "perm_internal.hpp"

namespace htlab::perm {

void check_degree(int n, int limit) {
  if (n < 1 || n > limit)
    throw DomainError("degree " + std::to_string(n) + " outside supported range [1," + std::to_string(limit) + "]");
}

// ---------------------------------------------------------------------------
// Perm

Perm Perm::identity(int n) {
  check_degree(n);
  Perm p;
  p.n_ = static_cast<std::uint8_t>(n);
  for (int i = 0; i < n; ++i)
    p.img_[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i);
  return p;
}

Perm Perm::from_images(const std::vector<int>& images) {
  const int n = static_cast<int>(images.size());
  check_degree(n);
  Perm p;
  p.n_ = static_cast<std::uint8_t>(n);
  std::vector<bool> seen(images.size(), false);
  for (int i = 0; i < n; ++i) {
    int y = images[static_cast<std::size_t>(i)];
    if (y < 0 || y >= n || seen[static_cast<std::size_t>(y)])
      throw DomainError("image array is not a permutation of 0.." + std::to_string(n - 1));
    seen[static_cast<std::size_t>(y)] = true;
    p.img_[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(y);
  }
  return p;
}

Perm Perm::from_cycles(int n, const std::vector<std::vector<int>>& cycles) {
  Perm p = identity(n);
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  for (const auto& c : cycles) {
    for (int x : c) {
      if (x < 0 || x >= n)
        throw DomainError("cycle point " + std::to_string(x) + " outside degree " + std::to_string(n));
      if (used[static_cast<std::size_t>(x)])
        throw DomainError("point " + std::to_string(x) + " repeated in cycle notation");
      used[static_cast<std::size_t>(x)] = true;
    }
    for (std::size_t i = 0; i < c.size(); ++i)
      p.img_[static_cast<std::size_t>(c[i])] = static_cast<std::uint8_t>(c[(i + 1) % c.size()]);
  }
  return p;
}

Perm Perm::parse(int n, std::string_view text) {
  std::vector<std::vector<int>> cycles;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && (text[i] == ' ' || text[i] == ','))
      ++i;
  };
  skip_ws();
  while (i < text.size()) {
    if (text[i] != '(')
      throw DomainError("malformed cycle notation \"" + std::string(text) + "\"");
    ++i;
    std::vector<int> cyc;
    while (true) {
      skip_ws();
      if (i >= text.size())
        throw DomainError("unterminated cycle in \"" + std::string(text) + "\"");
      if (text[i] == ')') {
        ++i;
        break;
      }
      if (text[i] < '0' || text[i] > '9')
        throw DomainError("malformed cycle notation \"" + std::string(text) + "\"");
      int v = 0;
      while (i < text.size() && text[i] >= '0' && text[i] <= '9')
        v = v * 10 + (text[i++] - '0');
      cyc.push_back(v);
    }
    if (!cyc.empty())
      cycles.push_back(std::move(cyc));
    skip_ws();
  }
  return from_cycles(n, cycles);
}

Perm Perm::inverse() const {
  Perm q = *this;
  for (int i = 0; i < n_; ++i)
    q.img_[img_[static_cast<std::size_t>(i)]] = static_cast<std::uint8_t>(i);
  return q;
}

bool Perm::is_identity() const {
  for (int i = 0; i < n_; ++i)
    if (img_[static_cast<std::size_t>(i)] != i)
      return false;
  return true;
}

std::vector<int> Perm::images() const {
  return std::vector<int>(img_.begin(), img_.begin() + n_);
}

std::vector<std::vector<int>> Perm::cycles() const {
  std::vector<std::vector<int>> out;
  std::vector<bool> seen(n_, false);
  for (int i = 0; i < n_; ++i) {
    if (seen[static_cast<std::size_t>(i)] || (*this)(i) == i)
      continue;
    std::vector<int> c;
    for (int x = i; !seen[static_cast<std::size_t>(x)]; x = (*this)(x)) {
      seen[static_cast<std::size_t>(x)] = true;
      c.push_back(x);
    }
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<int> Perm::support() const {
  std::vector<int> s;
  for (int i = 0; i < n_; ++i)
    if ((*this)(i) != i)
      s.push_back(i);
  return s;
}

std::vector<int> Perm::cycle_type() const {
  std::vector<int> t;
  std::vector<bool> seen(n_, false);
  for (int i = 0; i < n_; ++i) {
    if (seen[static_cast<std::size_t>(i)])
      continue;
    int len = 0;
    for (int x = i; !seen[static_cast<std::size_t>(x)]; x = (*this)(x)) {
      seen[static_cast<std::size_t>(x)] = true;
      ++len;
    }
    t.push_back(len);
  }
  std::sort(t.begin(), t.end());
  return t;
}

long Perm::order() const {
  long o = 1;
  for (int len : cycle_type())
    o = std::lcm(o, static_cast<long>(len));
  return o;
}

std::string Perm::str() const {
  auto cs = cycles();
  if (cs.empty())
    return "()";
  std::string s;
  for (const auto& c : cs) {
    s += '(';
    for (std::size_t i = 0; i < c.size(); ++i) {
      if (i)
        s += ' ';
      s += std::to_string(c[i]);
    }
    s += ')';
  }
  return s;
}

std::uint64_t Perm::key() const {
  std::uint64_t k = 0;
  for (int i = 0; i < n_; ++i)
    k |= static_cast<std::uint64_t>(img_[static_cast<std::size_t>(i)]) << (4 * i);
  return k;
}

Perm operator*(const Perm& p, const Perm& q) {
  if (p.n_ != q.n_)
    throw DomainError("degree mismatch in permutation product");
  Perm r = p;
  for (int i = 0; i < p.n_; ++i)
    r.img_[static_cast<std::size_t>(i)] = p.img_[q.img_[static_cast<std::size_t>(i)]];
  return r;
}

Perm conjugate(const Perm& g, const Perm& h) { return g * h * g.inverse(); }

std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int i = 2; i <= n; ++i)
    f *= static_cast<std::uint64_t>(i);
  return f;
}

std::uint64_t lehmer_rank(const Perm& p) {
  const int n = p.degree();
  std::uint64_t r = 0;
  for (int i = 0; i < n; ++i) {
    int smaller = 0;
    for (int j = i + 1; j < n; ++j)
      if (p(j) < p(i))
        ++smaller;
    r = r * static_cast<std::uint64_t>(n - i) + static_cast<std::uint64_t>(smaller);
  }
  return r;
}

// ---------------------------------------------------------------------------
// PermGroup

struct GroupCache {
  std::once_flag elements_once;
  std::vector<Perm> elements;
  std::unordered_set<std::uint64_t> keys;
  std::once_flag bsgs_once;
  detail::Bsgs bsgs;
};

PermGroup::PermGroup(int n, std::vector<Perm> generators)
    : n_(n), gens_(std::move(generators)), cache_(std::make_shared<GroupCache>()) {
  check_degree(n);
  for (const Perm& g : gens_)
    if (g.degree() != n)
      throw DomainError("generator degree " + std::to_string(g.degree()) + " differs from group degree " +
                        std::to_string(n));
}

PermGroup PermGroup::symmetric(int n) {
  if (n == 1)
    return trivial(1);
  std::vector<int> cyc(static_cast<std::size_t>(n));
  std::iota(cyc.begin(), cyc.end(), 0);
  std::vector<Perm> gens{Perm::from_cycles(n, {{0, 1}})};
  if (n > 2)
    gens.push_back(Perm::from_cycles(n, {cyc}));
  return PermGroup(n, gens);
}

PermGroup PermGroup::alternating(int n) {
  std::vector<Perm> gens;
  for (int k = 2; k < n; ++k)
    gens.push_back(Perm::from_cycles(n, {{0, 1, k}}));
  return PermGroup(n, gens);
}

const std::vector<Perm>& PermGroup::elements() const {
  std::call_once(cache_->elements_once, [&] {
    cache_->elements = detail::enumerate(n_, gens_);
    cache_->keys.reserve(cache_->elements.size());
    for (const Perm& p : cache_->elements)
      cache_->keys.insert(p.key());
  });
  return cache_->elements;
}

bool PermGroup::contains(const Perm& p) const {
  if (p.degree() != n_)
    return false;
  if (n_ <= kMaxEnumDegree && order() <= 5040) {
    elements();
    return cache_->keys.count(p.key()) != 0;
  }
  std::call_once(cache_->bsgs_once, [&] { cache_->bsgs = detail::schreier_sims(n_, gens_); });
  return cache_->bsgs.contains(p);
}

std::uint64_t PermGroup::order() const {
  std::call_once(cache_->bsgs_once, [&] { cache_->bsgs = detail::schreier_sims(n_, gens_); });
  return cache_->bsgs.order();
}

// ---------------------------------------------------------------------------
// Confining subsets

namespace {

void require_nontrivial(const std::vector<Perm>& P, int n) {
  for (std::size_t i = 0; i < P.size(); ++i) {
    if (P[i].degree() != n)
      throw DomainError("element " + std::to_string(i) + " of P has the wrong degree");
    if (P[i].is_identity())
      throw DomainError("element " + std::to_string(i) + " of P is the identity");
  }
}

using Bits = std::vector<std::uint64_t>;

bool full(const Bits& b, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i)
    if (!((b[i / 64] >> (i % 64)) & 1ULL))
      return false;
  return true;
}

// For every non-trivial p in G meeting some conjugate of H: the set of g in G
// with g^-1 p g in H, as a bitset over G's element list.
std::vector<std::pair<Perm, Bits>> coverage(const PermGroup& H, const PermGroup& G) {
  const auto& gel = G.elements();
  const auto& hel = H.elements();
  const std::size_t words = (gel.size() + 63) / 64;
  std::unordered_map<std::uint64_t, std::size_t> slot;
  std::vector<std::pair<Perm, Bits>> out;
  for (std::size_t gi = 0; gi < gel.size(); ++gi) {
    const Perm& g = gel[gi];
    const Perm ginv = g.inverse();
    for (const Perm& h : hel) {
      if (h.is_identity())
        continue;
      Perm p = g * h * ginv;
      auto [it, fresh] = slot.emplace(p.key(), out.size());
      if (fresh)
        out.push_back({p, Bits(words, 0)});
      out[it->second].second[gi / 64] |= 1ULL << (gi % 64);
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

void require_same_degree(const PermGroup& H, const PermGroup& G) {
  if (H.degree() != G.degree())
    throw DomainError("H and G have different degrees");
}

}  // namespace

ConfiningResult is_confining(const std::vector<Perm>& P, const PermGroup& H, const PermGroup& G) {
  require_same_degree(H, G);
  require_nontrivial(P, H.degree());
  H.elements();
  for (const Perm& g : G.elements()) {
    const Perm ginv = g.inverse();
    bool hit = false;
    for (const Perm& p : P)
      if (H.contains(ginv * p * g)) {
        hit = true;
        break;
      }
    if (!hit)
      return {false, g};
  }
  return {true, std::nullopt};
}

std::optional<std::vector<Perm>> find_confining(const PermGroup& H, const PermGroup& G, int max_size) {
  require_same_degree(H, G);
  const std::size_t count = G.elements().size();
  auto cov = coverage(H, G);
  // Keep one candidate per distinct coverage set.
  std::vector<std::pair<Perm, Bits>> cand;
  {
    std::unordered_set<std::string> seen;
    for (auto& c : cov) {
      std::string k(reinterpret_cast<const char*>(c.second.data()), c.second.size() * sizeof(std::uint64_t));
      if (seen.insert(k).second)
        cand.push_back(std::move(c));
    }
  }
  const std::size_t words = (count + 63) / 64;
  std::vector<std::size_t> chosen;
  std::function<bool(std::size_t, const Bits&, int)> dfs = [&](std::size_t from, const Bits& acc, int left) {
    if (full(acc, count))
      return true;
    if (left == 0)
      return false;
    for (std::size_t i = from; i < cand.size(); ++i) {
      Bits next = acc;
      for (std::size_t w = 0; w < words; ++w)
        next[w] |= cand[i].second[w];
      chosen.push_back(i);
      if (dfs(i + 1, next, left - 1))
        return true;
      chosen.pop_back();
    }
    return false;
  };
  for (int size = 1; size <= max_size; ++size) {
    chosen.clear();
    if (dfs(0, Bits(words, 0), size) && !chosen.empty()) {
      std::vector<Perm> P;
      for (std::size_t i : chosen)
        P.push_back(cand[i].first);
      std::sort(P.begin(), P.end());
      return P;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Orbits and blocks

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b)
      return false;
    if (b < a)
      std::swap(a, b);
    parent[static_cast<std::size_t>(b)] = a;
    return true;
  }
  std::vector<std::vector<int>> classes(int n) {
    std::vector<std::vector<int>> by_root(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
      by_root[static_cast<std::size_t>(find(i))].push_back(i);
    std::vector<std::vector<int>> out;
    for (auto& c : by_root)
      if (!c.empty())
        out.push_back(std::move(c));
    return out;
  }
};

}  // namespace

OrbitProfile orbit_profile(const PermGroup& H) {
  const int n = H.degree();
  UnionFind uf(n);
  for (const Perm& g : H.generators())
    for (int x = 0; x < n; ++x)
      uf.unite(x, g(x));
  OrbitProfile out;
  out.orbits = uf.classes(n);
  for (const auto& o : out.orbits)
    if (o.size() == 1)
      out.fixed_points.push_back(o.front());
  return out;
}

bool is_invariant(const BlockSystem& b, const PermGroup& H) {
  const int n = H.degree();
  std::vector<int> which(static_cast<std::size_t>(n), -1);
  for (std::size_t i = 0; i < b.blocks.size(); ++i)
    for (int x : b.blocks[i]) {
      if (x < 0 || x >= n || which[static_cast<std::size_t>(x)] != -1)
        return false;
      which[static_cast<std::size_t>(x)] = static_cast<int>(i);
    }
  if (std::count(which.begin(), which.end(), -1) != 0)
    return false;
  for (const Perm& g : H.generators())
    for (const auto& blk : b.blocks) {
      int target = which[static_cast<std::size_t>(g(blk.front()))];
      for (int x : blk)
        if (which[static_cast<std::size_t>(g(x))] != target)
          return false;
    }
  return true;
}

BlockReport block_systems(const PermGroup& H) {
  const int n = H.degree();
  BlockReport rep;
  rep.transitive = orbit_profile(H).orbits.size() == 1;
  std::vector<BlockSystem> found;
  for (int beta = 1; beta < n; ++beta) {
    UnionFind uf(n);
    std::vector<std::pair<int, int>> queue;
    uf.unite(0, beta);
    queue.emplace_back(0, beta);
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      auto [a, b] = queue[qi];
      for (const Perm& g : H.generators()) {
        int x = uf.find(g(a)), y = uf.find(g(b));
        if (uf.unite(x, y))
          queue.emplace_back(x, y);
      }
    }
    BlockSystem bs{uf.classes(n)};
    if (bs.blocks.size() > 1 && std::find(found.begin(), found.end(), bs) == found.end())
      found.push_back(std::move(bs));
  }
  // Minimal systems: the block of 0 contains no smaller block of 0 found.
  for (const auto& bs : found) {
    const auto& b0 = bs.blocks.front();
    bool minimal = true;
    for (const auto& other : found) {
      const auto& o0 = other.blocks.front();
      if (o0.size() < b0.size() && std::includes(b0.begin(), b0.end(), o0.begin(), o0.end())) {
        minimal = false;
        break;
      }
    }
    if (minimal)
      rep.systems.push_back(bs);
  }
  rep.primitive = rep.transitive && rep.systems.empty();
  return rep;
}

PermGroup rigid_stabilizer(const PermGroup& H, const std::vector<int>& delta) {
  const int n = H.degree();
  std::vector<bool> in(static_cast<std::size_t>(n), false);
  for (int x : delta) {
    if (x < 0 || x >= n)
      throw DomainError("point " + std::to_string(x) + " outside degree " + std::to_string(n));
    in[static_cast<std::size_t>(x)] = true;
  }
  std::vector<Perm> gens;
  for (const Perm& h : H.elements()) {
    if (h.is_identity())
      continue;
    auto s = h.support();
    if (std::all_of(s.begin(), s.end(), [&](int x) { return in[static_cast<std::size_t>(x)]; }))
      gens.push_back(h);
  }
  return PermGroup(n, std::move(gens));
}

bool contains_alt(const PermGroup& H) {
  const int n = H.degree();
  if (n <= 2)
    return true;
  return H.order() >= factorial(n) / 2;
}

// ---------------------------------------------------------------------------
// Displacement configurations

DisplacementCheck check_displacement_config(const std::vector<Perm>& P, const DisplacementConfig& cfg) {
  if (P.empty())
    throw DomainError("empty element set");
  const int n = P.front().degree();
  if (cfg.sets.size() != P.size())
    throw DomainError("configuration has " + std::to_string(cfg.sets.size()) + " sets for " +
                      std::to_string(P.size()) + " elements");
  std::vector<std::vector<bool>> mem(P.size(), std::vector<bool>(static_cast<std::size_t>(n), false));
  std::vector<bool> uni(static_cast<std::size_t>(n), false);
  for (std::size_t i = 0; i < P.size(); ++i) {
    if (P[i].degree() != n)
      throw DomainError("element " + std::to_string(i) + " has the wrong degree");
    if (cfg.sets[i].empty())
      throw DomainError("set for element " + std::to_string(i) + " is empty");
    for (int x : cfg.sets[i]) {
      if (x < 0 || x >= n)
        throw DomainError("point " + std::to_string(x) + " outside degree " + std::to_string(n));
      mem[i][static_cast<std::size_t>(x)] = true;
      uni[static_cast<std::size_t>(x)] = true;
    }
  }
  auto fail = [](int cond, std::size_t a, std::size_t b, std::string detail) {
    return DisplacementCheck{false, cond, static_cast<int>(a), static_cast<int>(b), std::move(detail)};
  };
  // i) equal or disjoint
  for (std::size_t a = 0; a < P.size(); ++a)
    for (std::size_t b = a + 1; b < P.size(); ++b) {
      if (mem[a] == mem[b])
        continue;
      for (int x = 0; x < n; ++x)
        if (mem[a][static_cast<std::size_t>(x)] && mem[b][static_cast<std::size_t>(x)])
          return fail(1, a, b, "sets overlap at " + std::to_string(x) + " without being equal");
    }
  // ii) sigma fixes Omega_rho pointwise or moves it off the union
  for (std::size_t s = 0; s < P.size(); ++s)
    for (std::size_t r = 0; r < P.size(); ++r) {
      bool fixes = true, off = true;
      for (int x : cfg.sets[r]) {
        int y = P[s](x);
        fixes = fixes && y == x;
        off = off && !uni[static_cast<std::size_t>(y)];
      }
      if (!fixes && !off)
        return fail(2, s, r, "element " + std::to_string(s) + " neither fixes nor clears set " + std::to_string(r));
    }
  // iii) sigma(Omega_sigma) avoids the union and all sigma^-1(Omega_alpha)
  for (std::size_t s = 0; s < P.size(); ++s) {
    const Perm inv = P[s].inverse();
    std::vector<bool> pre(static_cast<std::size_t>(n), false);
    for (int x = 0; x < n; ++x)
      if (uni[static_cast<std::size_t>(x)])
        pre[static_cast<std::size_t>(inv(x))] = true;
    for (int x : cfg.sets[s]) {
      int y = P[s](x);
      if (uni[static_cast<std::size_t>(y)])
        return fail(3, s, s, "image " + std::to_string(y) + " of set " + std::to_string(s) + " meets the union");
      if (pre[static_cast<std::size_t>(y)])
        return fail(3, s, s, "image " + std::to_string(y) + " of set " + std::to_string(s) +
                                 " meets a preimage set (order-two obstruction)");
    }
  }
  return {true, 0, -1, -1, {}};
}

std::optional<DisplacementConfig> find_displacement_config(const std::vector<Perm>& P) {
  if (P.empty())
    throw DomainError("empty element set");
  const int n = P.front().degree();
  std::string bad;
  for (std::size_t i = 0; i < P.size(); ++i) {
    if (P[i].degree() != n)
      throw DomainError("element " + std::to_string(i) + " has the wrong degree");
    if ((P[i] * P[i]).is_identity())
      bad += (bad.empty() ? "" : ", ") + std::to_string(i);
  }
  if (!bad.empty())
    throw DomainError("sigma^2 is the identity for element(s) " + bad);

  DisplacementConfig cfg;
  std::function<bool(std::size_t)> place = [&](std::size_t i) {
    if (i == P.size())
      return true;
    for (int x = 0; x < n; ++x) {
      if (P[i](x) == x || P[i](P[i](x)) == x)
        continue;
      cfg.sets.push_back({x});
      std::vector<Perm> prefix(P.begin(), P.begin() + static_cast<std::ptrdiff_t>(i + 1));
      if (check_displacement_config(prefix, cfg).ok && place(i + 1))
        return true;
      cfg.sets.pop_back();
    }
    return false;
  };
  if (place(0))
    return cfg;
  return std::nullopt;
}

}  // namespace htlab::perm
