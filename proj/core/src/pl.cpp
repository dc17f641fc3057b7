#include "htlab/pl.hpp"

#include <algorithm>

#include "htlab/error.hpp"

namespace htlab::pl {

namespace {

Rational slope_of(const Rational& x0, const Rational& y0, const Rational& x1, const Rational& y1) {
  Rational s = (y1 - y0) / (x1 - x0);
  s.canonicalize();
  return s;
}

int sgn(const Rational& q) { return mpq_sgn(q.get_mpq_t()); }

}  // namespace

PLMap::PLMap(bool line, std::vector<Rational> xs, std::vector<Rational> ys)
    : line_(line), xs_(std::move(xs)), ys_(std::move(ys)) {
  if (xs_.size() != ys_.size() || xs_.empty())
    throw DomainError("PL map needs at least one vertex");
  if (!line_ && xs_.size() < 2)
    throw DomainError("interval PL map needs two vertices");
  for (auto& q : xs_)
    q.canonicalize();
  for (auto& q : ys_)
    q.canonicalize();
  for (std::size_t i = 1; i < xs_.size(); ++i) {
    if (!(xs_[i - 1] < xs_[i]))
      throw DomainError("PL vertices not strictly increasing in x at index " + std::to_string(i));
    if (!(ys_[i - 1] < ys_[i]))
      throw DomainError("PL map not strictly increasing at vertex " + std::to_string(i));
  }
  normalize();
}

void PLMap::normalize() {
  std::vector<Rational> x2, y2;
  const std::size_t m = xs_.size();
  for (std::size_t i = 0; i < m; ++i) {
    bool keep;
    if (!line_ && (i == 0 || i + 1 == m)) {
      keep = true;
    } else {
      Rational left = i == 0 ? Rational(1) : slope_of(xs_[i - 1], ys_[i - 1], xs_[i], ys_[i]);
      Rational right = i + 1 == m ? Rational(1) : slope_of(xs_[i], ys_[i], xs_[i + 1], ys_[i + 1]);
      keep = left != right;
    }
    if (keep) {
      x2.push_back(xs_[i]);
      y2.push_back(ys_[i]);
    }
  }
  if (x2.empty()) {
    // A translation: one canonical vertex at 0.
    Rational c = ys_.front() - xs_.front();
    x2 = {Rational(0)};
    y2 = {c};
  }
  xs_ = std::move(x2);
  ys_ = std::move(y2);
}

PLMap PLMap::on_interval(std::vector<Vertex> vertices) {
  std::vector<Rational> xs, ys;
  for (auto& [x, y] : vertices) {
    xs.push_back(x);
    ys.push_back(y);
  }
  return PLMap(false, std::move(xs), std::move(ys));
}

PLMap PLMap::on_line(std::vector<Vertex> vertices) {
  std::vector<Rational> xs, ys;
  for (auto& [x, y] : vertices) {
    xs.push_back(x);
    ys.push_back(y);
  }
  return PLMap(true, std::move(xs), std::move(ys));
}

PLMap PLMap::identity(const Rational& lo, const Rational& hi) { return on_interval({{lo, lo}, {hi, hi}}); }
PLMap PLMap::identity_line() { return on_line({{Rational(0), Rational(0)}}); }
PLMap PLMap::translation(const Rational& c) { return on_line({{Rational(0), c}}); }

PLMap PLMap::from_pieces(std::vector<Piece> pieces, std::optional<Rational> hi) {
  if (pieces.empty())
    throw DomainError("PL map without pieces");
  const bool line = !hi.has_value();
  for (const Piece& p : pieces)
    if (p.slope <= 0)
      throw DomainError("non-positive slope in PL piece");
  if (line != !pieces.front().start.has_value())
    throw DomainError(line ? "line map must start at -inf" : "interval map needs a finite start");
  for (std::size_t i = 1; i < pieces.size(); ++i)
    if (!pieces[i].start)
      throw DomainError("only the first piece may start at -inf");
  auto value = [](const Piece& p, const Rational& x) { return Rational(p.slope * x + p.offset); };
  std::vector<Vertex> v;
  if (!line)
    v.push_back({*pieces.front().start, value(pieces.front(), *pieces.front().start)});
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    const Rational& x = *pieces[i].start;
    Rational a = value(pieces[i - 1], x), b = value(pieces[i], x);
    if (a != b)
      throw DomainError("PL pieces discontinuous at " + to_string(x));
    v.push_back({x, a});
  }
  if (line) {
    if (pieces.front().slope != 1 || pieces.back().slope != 1)
      throw DomainError("line map tails must have slope 1");
    if (v.empty())
      v.push_back({Rational(0), pieces.front().offset});
  } else {
    if (!(*hi > v.back().first))
      throw DomainError("domain end precedes last piece start");
    v.push_back({*hi, value(pieces.back(), *hi)});
  }
  return line ? on_line(std::move(v)) : on_interval(std::move(v));
}

std::vector<Vertex> PLMap::vertices() const {
  std::vector<Vertex> v;
  for (std::size_t i = 0; i < xs_.size(); ++i)
    v.push_back({xs_[i], ys_[i]});
  return v;
}

bool PLMap::in_domain(const Rational& x) const { return line_ || (xs_.front() <= x && x <= xs_.back()); }

Rational PLMap::operator()(const Rational& x) const {
  if (!in_domain(x))
    throw DomainError("point " + to_string(x) + " outside PL domain");
  if (x <= xs_.front())
    return x + (ys_.front() - xs_.front());
  if (x >= xs_.back())
    return x + (ys_.back() - xs_.back());
  auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
  std::size_t i = static_cast<std::size_t>(it - xs_.begin());
  Rational r = ys_[i - 1] + (x - xs_[i - 1]) * (ys_[i] - ys_[i - 1]) / (xs_[i] - xs_[i - 1]);
  r.canonicalize();
  return r;
}

std::vector<Piece> PLMap::pieces() const {
  std::vector<Piece> out;
  auto piece = [](std::optional<Rational> start, const Rational& x0, const Rational& y0, const Rational& s) {
    Rational off = y0 - s * x0;
    off.canonicalize();
    return Piece{std::move(start), s, off};
  };
  if (line_)
    out.push_back(piece(std::nullopt, xs_.front(), ys_.front(), Rational(1)));
  for (std::size_t i = 0; i + 1 < xs_.size(); ++i)
    out.push_back(piece(xs_[i], xs_[i], ys_[i], slope_of(xs_[i], ys_[i], xs_[i + 1], ys_[i + 1])));
  // A single vertex on the line is a pure translation: one piece.
  if (line_ && xs_.size() > 1)
    out.push_back(piece(xs_.back(), xs_.back(), ys_.back(), Rational(1)));
  return out;
}

std::vector<Rational> PLMap::breakpoints() const {
  if (line_)
    return xs_.size() == 1 ? std::vector<Rational>{} : xs_;
  return std::vector<Rational>(xs_.begin() + 1, xs_.end() - 1);
}

bool PLMap::is_identity() const {
  for (std::size_t i = 0; i < xs_.size(); ++i)
    if (xs_[i] != ys_[i])
      return false;
  return true;
}

PLMap pl_compose(const PLMap& f, const PLMap& g) {
  if (!g.on_line() && !f.on_line() && (g.image_lo() < f.lo() || g.image_hi() > f.hi()))
    throw DomainError("range of inner map [" + to_string(g.image_lo()) + "," + to_string(g.image_hi()) +
                      "] not inside domain [" + to_string(f.lo()) + "," + to_string(f.hi()) + "]");
  if (g.on_line() && !f.on_line())
    throw DomainError("cannot compose an interval map after a line map");
  const PLMap ginv = inverse(g);
  std::vector<Rational> knots = g.xs();
  for (const Rational& y : f.xs())
    if (ginv.in_domain(y))
      knots.push_back(ginv(y));
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
  std::vector<Vertex> v;
  for (const Rational& x : knots)
    v.push_back({x, f(g(x))});
  return g.on_line() ? PLMap::on_line(std::move(v)) : PLMap::on_interval(std::move(v));
}

PLMap inverse(const PLMap& f) {
  std::vector<Vertex> v;
  for (std::size_t i = 0; i < f.xs().size(); ++i)
    v.push_back({f.ys()[i], f.xs()[i]});
  return f.on_line() ? PLMap::on_line(std::move(v)) : PLMap::on_interval(std::move(v));
}

PLMap conjugate(const PLMap& g, const PLMap& h) { return pl_compose(g, pl_compose(h, inverse(g))); }

PLMap power(const PLMap& f, long n) {
  PLMap base = n < 0 ? inverse(f) : f;
  PLMap acc = f.on_line() ? PLMap::identity_line() : PLMap::identity(f.lo(), f.hi());
  for (long i = 0; i < (n < 0 ? -n : n); ++i)
    acc = pl_compose(base, acc);
  return acc;
}

bool commute(const PLMap& f, const PLMap& g) { return pl_compose(f, g) == pl_compose(g, f); }

// ---------------------------------------------------------------------------
// Sign structure of f(t) - t

namespace {

struct Item {
  std::optional<Rational> lo, hi;
  int sign;
};

void push(std::vector<Item>& items, Item it) {
  if (!items.empty()) {
    Item& last = items.back();
    if (last.sign == it.sign && last.hi && it.lo && *last.hi == *it.lo) {
      last.hi = it.hi;
      return;
    }
  }
  items.push_back(std::move(it));
}

// Profile over [lo, hi]; absent ends mean the corresponding infinite tail.
std::vector<Item> profile(const PLMap& f, const std::optional<Rational>& lo, const std::optional<Rational>& hi) {
  std::vector<Rational> pts;
  if (lo)
    pts.push_back(*lo);
  for (const Rational& x : f.xs())
    if ((!lo || x > *lo) && (!hi || x < *hi))
      pts.push_back(x);
  if (hi)
    pts.push_back(*hi);
  std::vector<Item> items;
  auto d = [&](const Rational& x) { return Rational(f(x) - x); };
  if (!lo) {
    // Left tail: f(t) - t is constant before the first vertex.
    const Rational& x0 = pts.front();
    int s = sgn(d(x0 - 1));
    push(items, {std::nullopt, x0, s});
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Rational& p = pts[i];
    Rational dp = d(p);
    if (sgn(dp) == 0)
      push(items, {p, p, 0});
    if (i + 1 == pts.size())
      break;
    const Rational& q = pts[i + 1];
    Rational dq = d(q);
    int sp = sgn(dp), sq = sgn(dq);
    if (sp == 0 && sq == 0) {
      push(items, {p, q, 0});
    } else if (sp * sq < 0) {
      Rational r = p + (q - p) * dp / (dp - dq);
      r.canonicalize();
      push(items, {p, r, sp});
      push(items, {r, r, 0});
      push(items, {r, q, sq});
    } else {
      push(items, {p, q, sp != 0 ? sp : sq});
    }
  }
  if (!hi) {
    const Rational& xm = pts.back();
    int s = sgn(d(xm + 1));
    push(items, {xm, std::nullopt, s});
  }
  return items;
}

}  // namespace

std::vector<SignInterval> crossing_profile(const PLMap& f, const Rational& lo, const Rational& hi) {
  if (!(lo < hi))
    throw DomainError("empty window");
  if (!f.in_domain(lo) || !f.in_domain(hi))
    throw DomainError("window not inside the map's domain");
  std::vector<SignInterval> out;
  for (const Item& it : profile(f, lo, hi))
    out.push_back({{it.lo, it.hi}, it.sign});
  return out;
}

std::vector<Interval> support_components(const PLMap& f) {
  std::optional<Rational> lo, hi;
  if (!f.on_line()) {
    lo = f.lo();
    hi = f.hi();
  }
  std::vector<Interval> out;
  for (const Item& it : profile(f, lo, hi))
    if (it.sign != 0)
      out.push_back({it.lo, it.hi});
  return out;
}

bool is_dyadic(const PLMap& f) {
  for (const Rational& x : f.breakpoints())
    if (!htlab::is_dyadic(x))
      return false;
  if (!f.on_line() && (!htlab::is_dyadic(f.lo()) || !htlab::is_dyadic(f.hi())))
    return false;
  for (const Piece& p : f.pieces())
    if (!is_power_of_two(p.slope) || !htlab::is_dyadic(p.offset))
      return false;
  return true;
}

// ---------------------------------------------------------------------------
// Disjoint conjugates

ConjugateWitness disjoint_conjugate_witness(const std::vector<PLMap>& hs, const PLMap& g) {
  if (hs.empty())
    throw DomainError("disjoint_conjugate_witness needs at least one map");
  for (std::size_t i = 0; i < hs.size(); ++i)
    if (hs[i].on_line() || g.on_line() || hs[i].lo() != g.lo() || hs[i].hi() != g.hi() || !hs[i].fixes_endpoints())
      throw DomainError("map " + std::to_string(i) + " does not share the compact domain of g");
  if (!g.fixes_endpoints())
    throw DomainError("g does not fix the domain endpoints");
  ConjugateWitness w;
  std::optional<std::size_t> left_i, right_i;
  for (std::size_t i = 0; i < hs.size(); ++i)
    for (const Interval& c : support_components(hs[i])) {
      if (!left_i || *c.lo < w.x) {
        w.x = *c.lo;
        left_i = i;
      }
      if (!right_i || *c.hi > w.y) {
        w.y = *c.hi;
        right_i = i;
      }
    }
  if (!left_i) {
    w.ok = true;
    w.x = w.y = g.lo();
    w.gx = g(w.x);
    w.conjugates = hs;
    return w;
  }
  w.gx = g(w.x);
  if (w.gx < w.y) {
    w.blocking = std::make_pair(*left_i, *right_i);
    return w;
  }
  for (const PLMap& h : hs)
    w.conjugates.push_back(conjugate(g, h));
  w.ok = true;
  for (const PLMap& c : w.conjugates)
    for (const PLMap& h : hs)
      if (!commute(c, h))
        w.ok = false;
  return w;
}

// ---------------------------------------------------------------------------
// Mixed identities

Rational evaluate_word(const std::vector<long>& exponents, const std::vector<PLMap>& gs, const PLMap& h,
                       const Rational& t) {
  const PLMap hinv = inverse(h);
  Rational v = t;
  for (std::size_t i = 0; i < gs.size(); ++i) {
    v = gs[i](v);
    const PLMap& step = exponents[i] > 0 ? h : hinv;
    for (long r = 0; r < (exponents[i] > 0 ? exponents[i] : -exponents[i]); ++r)
      v = step(v);
  }
  return v;
}

MixedIdentityReport mixed_identity_witness(const std::vector<long>& exponents, const std::vector<PLMap>& gs,
                                           const Rational& window_lo, const Rational& window_hi) {
  const std::size_t k = exponents.size();
  if (k == 0 || gs.size() != k)
    throw DomainError("need k >= 1 exponents and as many maps");
  for (std::size_t i = 0; i < k; ++i) {
    if (exponents[i] == 0)
      throw DomainError("exponent " + std::to_string(i + 1) + " is zero");
    if (!gs[i].on_line())
      throw DomainError("map " + std::to_string(i + 1) + " is not a line homeomorphism");
  }
  MixedIdentityReport rep;
  Rational floor = window_lo;
  for (std::size_t i = 0; i < k; ++i) {
    std::optional<Rational> ti;
    for (const SignInterval& s : crossing_profile(gs[i], window_lo, window_hi)) {
      if (s.sign <= 0 || !(*s.span.hi > floor))
        continue;
      Rational a = std::max(*s.span.lo, floor);
      Rational b = std::min(*s.span.hi, Rational(a + 1));
      ti = midpoint(a, b);
      break;
    }
    if (!ti)
      throw DomainError("no positive crossing of g_" + std::to_string(i + 1) + " in window [" +
                        to_string(window_lo) + "," + to_string(window_hi) + "] beyond " + to_string(floor));
    rep.t.push_back(*ti);
    rep.g_of_t.push_back(gs[i](*ti));
    rep.p.push_back(midpoint(*ti, rep.g_of_t.back()));
    floor = rep.g_of_t.back();
  }
  if (k == 1) {
    rep.h = PLMap::identity_line();
  } else {
    std::vector<Vertex> v;
    for (std::size_t i = 0; i + 1 < k; ++i) {
      const Rational& a = rep.p[i];
      const Rational& b = rep.p[i + 1];
      const Rational& s = rep.g_of_t[i];
      const Rational& next = rep.t[i + 1];
      v.push_back({a, a});
      if (exponents[i] > 0)
        v.push_back({s, midpoint(next, b)});
      else
        v.push_back({next, midpoint(a, s)});
    }
    v.push_back({rep.p.back(), rep.p.back()});
    rep.h = PLMap::on_line(std::move(v));
  }
  rep.value = evaluate_word(exponents, gs, rep.h, rep.t.front());
  rep.certified = rep.value > rep.t.front() && rep.value >= rep.t.back();
  return rep;
}

}  // namespace htlab::pl
