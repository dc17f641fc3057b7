#pragma once

// Counts how many charts contain a point of a leaf, by direct search over visits.

#include <gmpxx.h>

#include <string>
#include <vector>

namespace oracle {

struct Box {
  std::string word;  // cylinder at position 0
  mpq_class lo, hi;
  bool lo_closed, hi_closed;
};

// Leaf of a bi-infinite word given on indices [first, first + text.size());
// leaf coordinate s at [x, s] equals [phi^n x, s - n].
inline int cover_count(const std::string& text, long first, const std::vector<Box>& boxes, const mpq_class& s) {
  int count = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const long n = first + static_cast<long>(i);
    const mpq_class u = s - n;
    for (const auto& b : boxes) {
      if (i + b.word.size() > text.size() || text.compare(i, b.word.size(), b.word) != 0)
        continue;
      const bool left = b.lo_closed ? u >= b.lo : u > b.lo;
      const bool right = b.hi_closed ? u <= b.hi : u < b.hi;
      if (left && right)
        ++count;
    }
  }
  return count;
}

}  // namespace oracle
