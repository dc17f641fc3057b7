#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "htlab/perm.hpp"

namespace htlab::perm::detail {

// Base and strong generating set with explicit transversals.
struct Bsgs {
  int n = 0;
  std::vector<int> base;
  std::vector<Perm> strong;
  std::vector<std::vector<std::optional<Perm>>> transversal;  // [level][point]

  std::uint64_t order() const;
  bool contains(const Perm& p) const;
};

Bsgs schreier_sims(int n, const std::vector<Perm>& gens);

std::vector<Perm> enumerate(int n, const std::vector<Perm>& gens);

}  // namespace htlab::perm::detail
