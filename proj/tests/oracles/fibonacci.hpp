#pragma once

// Legal words of a primitive substitution read off a long prefix of a fixed point.

#include <map>
#include <set>
#include <string>

namespace oracle {

inline std::string fixed_prefix(const std::map<char, std::string>& rules, char seed, std::size_t len) {
  std::string s(1, seed);
  while (s.size() < len) {
    std::string t;
    for (char c : s)
      t += rules.at(c);
    s.swap(t);
  }
  return s;
}

inline std::set<std::string> factors(const std::string& text, std::size_t n) {
  std::set<std::string> out;
  for (std::size_t i = 0; i + n <= text.size(); ++i)
    out.insert(text.substr(i, n));
  return out;
}

// Distances between consecutive occurrences of w in text.
inline std::set<long> gaps(const std::string& text, const std::string& w) {
  std::set<long> out;
  long last = -1;
  for (std::size_t i = 0; i + w.size() <= text.size(); ++i)
    if (text.compare(i, w.size(), w) == 0) {
      if (last >= 0)
        out.insert(static_cast<long>(i) - last);
      last = static_cast<long>(i);
    }
  return out;
}

inline std::map<char, std::string> fibonacci_rules() { return {{'a', "ab"}, {'b', "a"}}; }

}  // namespace oracle
