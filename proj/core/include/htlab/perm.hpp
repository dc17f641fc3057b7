#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace htlab::perm {

constexpr int kMaxDegree = 16;      // generator-only operations
constexpr int kMaxEnumDegree = 10;  // full element enumeration

void check_degree(int n, int limit = kMaxDegree);

class Perm {
public:
  Perm() = default;
  static Perm identity(int n);
  static Perm from_images(const std::vector<int>& images);
  static Perm from_cycles(int n, const std::vector<std::vector<int>>& cycles);
  // Cycle notation, e.g. "(0 1 2)(3 4)"; "()" or "" is the identity.
  static Perm parse(int n, std::string_view text);

  int degree() const { return n_; }
  int operator()(int x) const { return img_[static_cast<std::size_t>(x)]; }

  Perm inverse() const;
  bool is_identity() const;
  std::vector<int> images() const;
  std::vector<std::vector<int>> cycles() const;  // non-trivial cycles, each starting at its minimum
  std::vector<int> support() const;
  std::vector<int> cycle_type() const;  // sorted lengths of all cycles, fixed points included
  long order() const;
  std::string str() const;
  std::uint64_t key() const;

  // (p * q)(x) = p(q(x))
  friend Perm operator*(const Perm& p, const Perm& q);
  friend bool operator==(const Perm& a, const Perm& b) { return a.n_ == b.n_ && a.img_ == b.img_; }
  friend std::strong_ordering operator<=>(const Perm& a, const Perm& b) {
    if (auto c = a.n_ <=> b.n_; c != 0)
      return c;
    return a.img_ <=> b.img_;
  }

private:
  std::array<std::uint8_t, kMaxDegree> img_{};
  std::uint8_t n_ = 0;
};

// g h g^-1
Perm conjugate(const Perm& g, const Perm& h);

// Rank of p among the n! permutations of its degree, in lexicographic order of images.
std::uint64_t lehmer_rank(const Perm& p);
std::uint64_t factorial(int n);

struct GroupCache;

class PermGroup {
public:
  PermGroup() : PermGroup(1, {}) {}
  PermGroup(int n, std::vector<Perm> generators);

  static PermGroup symmetric(int n);
  static PermGroup alternating(int n);
  static PermGroup trivial(int n) { return PermGroup(n, {}); }

  int degree() const { return n_; }
  const std::vector<Perm>& generators() const { return gens_; }

  // Sorted list of all elements; built once per group value (n <= 10).
  const std::vector<Perm>& elements() const;
  bool contains(const Perm& p) const;
  std::uint64_t order() const;

private:
  int n_;
  std::vector<Perm> gens_;
  std::shared_ptr<GroupCache> cache_;
};

struct ConfiningResult {
  bool confining = false;
  std::optional<Perm> witness;  // g with g H g^-1 disjoint from P
};

ConfiningResult is_confining(const std::vector<Perm>& P, const PermGroup& H, const PermGroup& G);
std::optional<std::vector<Perm>> find_confining(const PermGroup& H, const PermGroup& G, int max_size);

struct BlockSystem {
  std::vector<std::vector<int>> blocks;  // sorted blocks, sorted by minimum
  friend bool operator==(const BlockSystem&, const BlockSystem&) = default;
};

struct BlockReport {
  bool transitive = false;
  bool primitive = false;  // meaningful only when transitive
  std::vector<BlockSystem> systems;
};

BlockReport block_systems(const PermGroup& H);
bool is_invariant(const BlockSystem& b, const PermGroup& H);

struct OrbitProfile {
  std::vector<int> fixed_points;
  std::vector<std::vector<int>> orbits;
};
OrbitProfile orbit_profile(const PermGroup& H);

PermGroup rigid_stabilizer(const PermGroup& H, const std::vector<int>& delta);

bool contains_alt(const PermGroup& H);

// Sets assigned to the elements of P, by position.
struct DisplacementConfig {
  std::vector<std::vector<int>> sets;
};

struct DisplacementCheck {
  bool ok = false;
  int condition = 0;  // 1, 2 or 3 when violated
  int first = -1;     // indices into P
  int second = -1;
  std::string detail;
};

DisplacementCheck check_displacement_config(const std::vector<Perm>& P, const DisplacementConfig& cfg);
std::optional<DisplacementConfig> find_displacement_config(const std::vector<Perm>& P);

// Representatives of the conjugacy classes of subgroups of S_n, each with its
// elements enumerated. Sorted by order, then by element list.
std::vector<PermGroup> subgroup_classes(int n);

struct FixboundRow {
  std::size_t id = 0;
  std::uint64_t order = 0;
  std::size_t fixed = 0;
  std::vector<Perm> generators;
  std::optional<std::vector<Perm>> smallest;  // a minimal confining set of size <= 2
  std::uint64_t confining_singletons = 0;
  std::uint64_t confining_pairs = 0;
  bool violation = false;
};

// Over all subgroup classes of S_n, every confining P (|P| <= 2) for (H, S_n)
// is compared against |fix(H)| <= |P| - 1.
std::vector<FixboundRow> audit_fixbound(int n);

}  // namespace htlab::perm
