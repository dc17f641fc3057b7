#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

#include "htlab/dynamics.hpp"

// Seeded generators for randomized audits, benchmarks and the CLI.
namespace htlab::random {

using Rng = std::mt19937_64;

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// A random complete antichain with exactly `cells` cells (cells = 1 mod d-1).
inline std::vector<cantor::Word> random_complete_antichain(Rng& rng, int d, std::size_t cells) {
  std::vector<cantor::Word> out{cantor::Word(d)};
  while (out.size() < cells) {
    std::size_t i = uniform(rng, 0, out.size() - 1);
    cantor::Word w = out[i];
    out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
    for (int c = 0; c < d; ++c)
      out.push_back(w.child(c));
  }
  return out;
}

inline vd::PrefixMap random_element(Rng& rng, int d, std::size_t max_cells) {
  const std::size_t step = static_cast<std::size_t>(d - 1);
  std::size_t expansions = uniform(rng, 0, (max_cells - 1) / step);
  std::size_t cells = 1 + expansions * step;
  auto dom = random_complete_antichain(rng, d, cells);
  auto ran = random_complete_antichain(rng, d, cells);
  std::shuffle(ran.begin(), ran.end(), rng);
  std::vector<vd::Pair> pairs;
  for (std::size_t i = 0; i < cells; ++i)
    pairs.push_back({dom[i], ran[i]});
  return vd::PrefixMap::make(d, std::move(pairs));
}

// Product of up to `max_len` standard generators of V_2 and their inverses.
inline vd::PrefixMap random_generator_word(Rng& rng, std::size_t max_len) {
  static const std::vector<vd::PrefixMap> gens = [] {
    auto g = vd::generators::standard();
    std::vector<vd::PrefixMap> all = g;
    for (const auto& x : g)
      all.push_back(vd::invert(x));
    return all;
  }();
  std::size_t len = uniform(rng, 1, max_len);
  vd::PrefixMap acc = vd::PrefixMap::identity(2);
  for (std::size_t i = 0; i < len; ++i)
    acc = vd::compose(acc, gens[uniform(rng, 0, gens.size() - 1)]);
  return acc;
}

inline cantor::Word random_word(Rng& rng, int d, std::size_t len) {
  std::string s(len, '\0');
  for (auto& c : s)
    c = static_cast<char>(uniform(rng, 0, static_cast<std::size_t>(d - 1)));
  return cantor::Word(d, std::move(s));
}

inline cantor::EvPeriodicPoint random_point(Rng& rng, int d, std::size_t max_pre = 4,
                                            std::size_t max_per = 3) {
  return cantor::EvPeriodicPoint(random_word(rng, d, uniform(rng, 0, max_pre)),
                                 random_word(rng, d, uniform(rng, 1, max_per)));
}

inline cantor::ClopenSet random_clopen(Rng& rng, int d, std::size_t max_cells, std::size_t max_depth) {
  std::vector<cantor::Word> cells;
  std::size_t n = uniform(rng, 0, max_cells);
  for (std::size_t i = 0; i < n; ++i)
    cells.push_back(random_word(rng, d, uniform(rng, 0, max_depth)));
  return cantor::ClopenSet(d, std::move(cells));
}

}  // namespace htlab::random
