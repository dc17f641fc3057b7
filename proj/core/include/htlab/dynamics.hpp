#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "htlab/vd.hpp"

namespace htlab::vd {

// A pair w -> u of some power g^n with one word a strict prefix of the
// other; its unique fixed point is `point`.
struct HyperbolicCell {
  Word domain;
  Word range;
  long power = 1;
  bool attracting = false;
  EvPeriodicPoint point;
};

struct BrinOptions {
  long max_power = 64;   // highest power g^n examined
  long max_settle = 64;  // preimage steps allowed to sweep Z into U u V
};

struct BrinDecomposition {
  ClopenSet Y;
  ClopenSet Z;
  std::optional<long> order_on_y;
  std::vector<EvPeriodicPoint> att;
  std::vector<EvPeriodicPoint> rep;
  std::vector<HyperbolicCell> certificate;
  std::vector<long> y_periods;  // minimal periods occurring on Y
  long powers_examined = 0;
  long settle_steps = 0;
};

BrinDecomposition brin_decomposition(const PrefixMap& g, const BrinOptions& opts = {});

// Least (m, n), ordered by m + n then m, with shift^m(x) = shift^n(y).
std::optional<std::pair<std::size_t, std::size_t>> same_orbit(const EvPeriodicPoint& x,
                                                              const EvPeriodicPoint& y);

PrefixMap transitivity_witness(const std::vector<EvPeriodicPoint>& src,
                               const std::vector<EvPeriodicPoint>& dst);

PrefixMap compress(const ClopenSet& target, const ClopenSet& u);
PrefixMap compress(const std::vector<EvPeriodicPoint>& target, const ClopenSet& u);

PrefixMap match_germs(const PrefixMap& g, const std::vector<EvPeriodicPoint>& points);

// Generators A, B, C, pi0, pi1 of V_2.
namespace generators {
PrefixMap A();
PrefixMap B();
PrefixMap C();
PrefixMap pi0();
PrefixMap pi1();
std::vector<PrefixMap> standard();
}  // namespace generators

}  // namespace htlab::vd
