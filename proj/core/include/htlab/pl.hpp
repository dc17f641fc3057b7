#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "htlab/rational.hpp"

namespace htlab::pl {

// f(x) = slope * x + offset from `start` up to the next piece's start.
struct Piece {
  std::optional<Rational> start;  // absent: from -infinity
  Rational slope;
  Rational offset;
  friend bool operator==(const Piece&, const Piece&) = default;
};

using Vertex = std::pair<Rational, Rational>;

// Increasing piecewise-linear homeomorphism, stored by its graph vertices.
// On a compact domain the map runs from [x_0, x_m] onto [y_0, y_m]; on the
// line it continues as a translation beyond the extreme vertices.
class PLMap {
public:
  PLMap() : PLMap(identity_line()) {}

  static PLMap on_interval(std::vector<Vertex> vertices);
  static PLMap on_line(std::vector<Vertex> vertices);
  static PLMap identity(const Rational& lo, const Rational& hi);
  static PLMap identity_line();
  static PLMap translation(const Rational& c);
  // Pieces must be continuous; for an interval map the first piece starts at
  // the domain's left end and `hi` closes the domain.
  static PLMap from_pieces(std::vector<Piece> pieces, std::optional<Rational> hi);

  bool on_line() const { return line_; }
  const Rational& lo() const { return xs_.front(); }
  const Rational& hi() const { return xs_.back(); }
  const Rational& image_lo() const { return ys_.front(); }
  const Rational& image_hi() const { return ys_.back(); }
  bool fixes_endpoints() const { return !line_ && xs_.front() == ys_.front() && xs_.back() == ys_.back(); }

  const std::vector<Rational>& xs() const { return xs_; }
  const std::vector<Rational>& ys() const { return ys_; }
  std::vector<Vertex> vertices() const;

  Rational operator()(const Rational& x) const;
  bool in_domain(const Rational& x) const;

  std::vector<Piece> pieces() const;
  // Points where the slope changes (domain endpoints excluded).
  std::vector<Rational> breakpoints() const;
  bool is_identity() const;

  friend bool operator==(const PLMap&, const PLMap&) = default;

private:
  PLMap(bool line, std::vector<Rational> xs, std::vector<Rational> ys);
  void normalize();

  bool line_ = true;
  std::vector<Rational> xs_;
  std::vector<Rational> ys_;
};

PLMap pl_compose(const PLMap& f, const PLMap& g);  // f after g
PLMap inverse(const PLMap& f);
PLMap conjugate(const PLMap& g, const PLMap& h);  // g h g^-1
PLMap power(const PLMap& f, long n);
bool commute(const PLMap& f, const PLMap& g);

// Open interval; absent ends are infinite.
struct Interval {
  std::optional<Rational> lo;
  std::optional<Rational> hi;
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Sign of f(t) - t on a maximal interval: zero pieces are closed (possibly a
// single point), signed pieces open.
struct SignInterval {
  Interval span;
  int sign = 0;
  friend bool operator==(const SignInterval&, const SignInterval&) = default;
};

std::vector<Interval> support_components(const PLMap& f);
std::vector<SignInterval> crossing_profile(const PLMap& f, const Rational& lo, const Rational& hi);
bool is_dyadic(const PLMap& f);

struct ConjugateWitness {
  bool ok = false;
  Rational x, y, gx;
  std::vector<PLMap> conjugates;
  std::optional<std::pair<std::size_t, std::size_t>> blocking;  // hs giving x and y
};

ConjugateWitness disjoint_conjugate_witness(const std::vector<PLMap>& hs, const PLMap& g);

struct MixedIdentityReport {
  PLMap h;
  std::vector<Rational> t;
  std::vector<Rational> g_of_t;
  std::vector<Rational> p;
  Rational value;  // w(h)(t_1)
  bool certified = false;
};

// w(h) = h^{n_k} g_k ... h^{n_1} g_1.
Rational evaluate_word(const std::vector<long>& exponents, const std::vector<PLMap>& gs, const PLMap& h,
                       const Rational& t);

MixedIdentityReport mixed_identity_witness(const std::vector<long>& exponents, const std::vector<PLMap>& gs,
                                           const Rational& window_lo, const Rational& window_hi);

}  // namespace htlab::pl
