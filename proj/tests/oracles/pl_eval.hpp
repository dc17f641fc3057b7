#pragma once

// Linear interpolation through graph vertices, with translation tails on the line.

#include <gmpxx.h>

#include <stdexcept>
#include <utility>
#include <vector>

namespace oracle {

using Q = mpq_class;
using Graph = std::vector<std::pair<Q, Q>>;

inline Q interpolate(const Graph& v, bool line, const Q& x) {
  if (x <= v.front().first) {
    if (!line && x < v.front().first)
      throw std::out_of_range("outside domain");
    return Q(x + (v.front().second - v.front().first));
  }
  if (x >= v.back().first) {
    if (!line && x > v.back().first)
      throw std::out_of_range("outside domain");
    return Q(x + (v.back().second - v.back().first));
  }
  for (std::size_t i = 0; i + 1 < v.size(); ++i)
    if (x <= v[i + 1].first) {
      const auto& [x0, y0] = v[i];
      const auto& [x1, y1] = v[i + 1];
      return Q(y0 + (y1 - y0) * (x - x0) / (x1 - x0));
    }
  return x;
}

}  // namespace oracle
