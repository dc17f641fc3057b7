#include <algorithm>
#include <cstdlib>
#include <set>

#include "htlab/error.hpp"
#include "htlab/suspension.hpp"

namespace htlab::flow {

namespace {

long floor_q(const Rational& q) {
  mpz_class z;
  mpz_fdiv_q(z.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return z.get_si();
}

long ceil_q(const Rational& q) {
  mpz_class z;
  mpz_cdiv_q(z.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return z.get_si();
}

std::pair<std::vector<std::string>::const_iterator, std::vector<std::string>::const_iterator> with_prefix(
    const std::vector<std::string>& words, const std::string& prefix) {
  auto lo = std::lower_bound(words.begin(), words.end(), prefix);
  auto hi = lo;
  while (hi != words.end() && hi->compare(0, prefix.size(), prefix) == 0) ++hi;
  return {lo, hi};
}

// Whether some legal word carries every given pattern (start, letters).
bool patterns_compatible(const StoneSystem& X, const std::vector<std::pair<long, std::string>>& patterns) {
  long lo = 0, hi = 0;
  bool first = true;
  for (const auto& [s, w] : patterns) {
    if (w.empty()) continue;
    const long e = s + static_cast<long>(w.size());
    lo = first ? s : std::min(lo, s);
    hi = first ? e : std::max(hi, e);
    first = false;
  }
  if (first) return true;
  std::string tmpl(static_cast<std::size_t>(hi - lo), '\0');
  for (const auto& [s, w] : patterns)
    for (std::size_t i = 0; i < w.size(); ++i) {
      char& slot = tmpl[static_cast<std::size_t>(s - lo) + i];
      if (slot && slot != w[i]) return false;
      slot = w[i];
    }
  const std::size_t known = std::find(tmpl.begin(), tmpl.end(), '\0') - tmpl.begin();
  const auto& words = X.legal_words(tmpl.size());
  auto [b, e] = with_prefix(words, tmpl.substr(0, known));
  for (auto it = b; it != e; ++it) {
    bool ok = true;
    for (std::size_t i = known; i < tmpl.size() && ok; ++i) ok = !tmpl[i] || tmpl[i] == (*it)[i];
    if (ok) return true;
  }
  return false;
}

}  // namespace

bool Segment::contains(const Rational& t) const {
  if (t < lo || t > hi) return false;
  if (t == lo && !lo_closed) return false;
  if (t == hi && !hi_closed) return false;
  return true;
}

std::string Segment::str() const {
  return std::string(lo_closed ? "[" : "(") + to_string(lo) + ", " + to_string(hi) + (hi_closed ? "]" : ")");
}

TilingReport check_tiling(const std::vector<Segment>& segments, const Rational& lo, const Rational& hi) {
  struct Item {
    Segment s;
    std::size_t index;
  };
  std::vector<Item> items;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    Segment s = segments[i];
    if (s.lo < lo) s.lo = lo, s.lo_closed = true;
    if (s.hi > hi) s.hi = hi, s.hi_closed = true;
    if (!s.empty()) items.push_back({s, i});
  }
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    if (a.s.lo != b.s.lo) return a.s.lo < b.s.lo;
    return a.s.lo_closed > b.s.lo_closed;
  });
  TilingReport r;
  auto fail = [&](std::string detail, std::vector<std::size_t> which) {
    r.ok = false;
    r.detail = std::move(detail);
    r.offending = std::move(which);
    return r;
  };
  Rational cursor = lo;
  bool covered = false;
  std::size_t previous = segments.size();
  for (const auto& it : items) {
    const std::vector<std::size_t> pair =
        previous < segments.size() ? std::vector<std::size_t>{previous, it.index} : std::vector<std::size_t>{it.index};
    if (it.s.lo > cursor) return fail("gap " + Segment{cursor, it.s.lo, !covered, !it.s.lo_closed}.str(), pair);
    if (it.s.lo < cursor) return fail("overlap on " + Segment::open(it.s.lo, cursor).str(), pair);
    if (covered && it.s.lo_closed) return fail("overlap at " + to_string(cursor), pair);
    if (!covered && !it.s.lo_closed) return fail("gap at " + to_string(cursor), pair);
    cursor = it.s.hi;
    covered = it.s.hi_closed;
    previous = it.index;
  }
  const std::vector<std::size_t> last =
      previous < segments.size() ? std::vector<std::size_t>{previous} : std::vector<std::size_t>{};
  if (cursor < hi) return fail("gap " + Segment{cursor, hi, !covered, true}.str(), last);
  if (!covered) return fail("gap at " + to_string(hi), last);
  return r;
}

std::vector<ReturnChart> chart_decomposition(const StoneSystem& X, const CylinderX& C, const Rational& a,
                                             const Rational& b, long bound) {
  if (!(a < b)) throw DomainError("chart interval is empty");
  if (b - a >= 1) throw DomainError("chart interval has length at least 1");
  const long tau = smallest_return_time(X, C, bound);
  if (b - a >= tau) throw DomainError("chart is not admissible: length " + to_string(b - a) + " >= " + std::to_string(tau));
  std::vector<ReturnChart> out;
  for (const auto& rc : first_return_partition(X, C, bound))
    out.push_back({{rc.cell, Segment::open(b, rc.time + a)}, rc.time});
  return out;
}

TilingReport certify_leaf_segment(const Window& x, const CylinderX& C, const Rational& a, const Rational& b,
                                  const std::vector<ReturnChart>& charts) {
  std::vector<long> visits;
  for (long n = x.first - C.position; n + C.position + static_cast<long>(C.word.size()) <= x.last(); ++n)
    if (x.shifted_in(C, n).value_or(false)) visits.push_back(n);
  TilingReport r;
  if (visits.size() < 2) {
    r.ok = false;
    r.detail = "window meets the chart fewer than twice";
    return r;
  }
  const long n0 = visits.front();
  const long n1 = visits.back();
  std::vector<Segment> segs;
  for (long n : visits) segs.push_back(Segment::closed(a + n, b + n));
  for (long n = n0; n < n1; ++n)
    for (const auto& rc : charts) {
      auto in = x.shifted_in(rc.chart.cell, n);
      if (!in) {
        r.ok = false;
        r.detail = "window does not determine chart " + rc.chart.cell.word + " at shift " + std::to_string(n);
        return r;
      }
      if (*in) segs.push_back(rc.chart.span.shifted(n));
    }
  return check_tiling(segs, a + n0, b + n1);
}

char DInftySystem::tau(char c) const {
  auto it = spec_.letters.find(c);
  return it == spec_.letters.end() ? c : it->second;
}

std::string DInftySystem::reflect_word(std::string_view w) const {
  std::string out(w.rbegin(), w.rend());
  for (char& c : out) c = tau(c);
  return out;
}

namespace {

struct Pattern {
  std::string word;
  long start;
  friend bool operator==(const Pattern&, const Pattern&) = default;
};

char apply_tau(const InvolutionSpec& spec, char c) {
  auto it = spec.letters.find(c);
  return it == spec.letters.end() ? c : it->second;
}

Pattern sigma(const InvolutionSpec& spec, const Pattern& p) {
  std::string w = p.word;
  for (char& c : w) c = apply_tau(spec, c);
  const long len = static_cast<long>(w.size());
  if (!spec.reflect) return {w, p.start - spec.offset};
  std::reverse(w.begin(), w.end());
  return {w, spec.offset - (p.start + len - 1)};
}

Pattern phi(const Pattern& p, long n) { return {p.word, p.start - n}; }

}  // namespace

DInftyReport check_dinfty(const StoneSystem& X, const InvolutionSpec& spec, long depth) {
  if (depth < 1) throw DomainError("depth must be positive");
  DInftyReport r;
  r.depth = depth;
  const std::string& alphabet = X.alphabet();
  auto relation_failure = [&](std::string detail) {
    r.relations_ok = false;
    r.relation_detail = std::move(detail);
  };
  if (!spec.reflect) relation_failure("without reflection sigma phi sigma = phi");
  for (const auto& [c, image] : spec.letters)
    if (r.relations_ok && (alphabet.find(c) == std::string::npos || alphabet.find(image) == std::string::npos))
      relation_failure(std::string("letter map ") + c + "->" + image + " leaves the alphabet");
  for (char c : alphabet)
    if (r.relations_ok && apply_tau(spec, apply_tau(spec, c)) != c)
      relation_failure(std::string("letter map is not an involution at ") + c);
  for (long n = 1; n <= depth && r.relations_ok; ++n)
    for (const auto& w : X.legal_words(static_cast<std::size_t>(n))) {
      for (long start : {0L, 3L}) {
        const Pattern p{w, start};
        if (sigma(spec, sigma(spec, p)) != p)
          relation_failure("sigma^2 moves pattern " + w);
        else if (sigma(spec, phi(sigma(spec, p), 1)) != phi(p, -1))
          relation_failure("sigma phi sigma differs from phi^-1 on pattern " + w);
        if (!r.relations_ok) break;
      }
      if (!r.relations_ok) break;
    }
  if (!r.relations_ok) return r;

  auto reflect = [&](const std::string& w) { return sigma(spec, Pattern{w, 0}).word; };
  for (long n = 1; n <= depth + 1 && r.legality_ok; ++n)
    for (const auto& w : X.legal_words(static_cast<std::size_t>(n)))
      if (!X.is_legal(reflect(w))) {
        r.legality_ok = false;
        r.legality_witness = w;
        break;
      }
  if (!r.legality_ok) return r;

  for (long n : {depth, depth + 1}) {
    for (const auto& w : X.legal_words(static_cast<std::size_t>(n)))
      if (reflect(w) == w) {
        r.free = false;
        r.freeness_witness = w;
        r.witness_kind = "skew-palindrome";
        break;
      }
    if (!r.free) break;
  }
  r.max_translation = depth / 4;
  if (r.free)
    for (const auto& w : X.legal_words(static_cast<std::size_t>(depth))) {
      for (std::size_t p = 1; p <= static_cast<std::size_t>(r.max_translation) && r.free; ++p) {
        bool periodic = true;
        for (std::size_t i = 0; i + p < w.size() && periodic; ++i) periodic = w[i] == w[i + p];
        if (periodic) {
          r.free = false;
          r.freeness_witness = w;
          r.witness_kind = "periodic";
        }
      }
      if (!r.free) break;
    }
  return r;
}

DInftySystem build_dinfty(const StoneSystem& X, const InvolutionSpec& spec, long depth, bool require_free) {
  DInftyReport r = check_dinfty(X, spec, depth);
  if (!r.relations_ok) throw DomainError("relation failure: " + r.relation_detail);
  if (!r.legality_ok)
    throw DomainError("involution does not preserve legality: " + r.legality_witness + " -> " +
                      sigma(spec, Pattern{r.legality_witness, 0}).word);
  if (!r.free && require_free)
    throw DomainError("freeness violation: " + r.witness_kind + " pattern " + r.freeness_witness);
  return DInftySystem(X, spec, std::move(r));
}

Window evaluate_point(const DInftySystem& S, const PointSpec& x, long lo, long hi) {
  return evaluate_point(S.base(), &S.involution(), x, lo, hi);
}

std::vector<DElement> overlapping_elements(const Rational& lo, const Rational& hi) {
  if (!(lo < hi)) throw DomainError("interval is empty");
  std::vector<DElement> out;
  const long m = ceil_q(hi - lo) - 1;
  for (long n = -m; n <= m; ++n)
    if (n != 0) out.push_back({n, 0});
  for (long n = floor_q(-2 * hi) + 1; n <= ceil_q(-2 * lo) - 1; ++n) out.push_back({n, 1});
  std::sort(out.begin(), out.end());
  return out;
}

bool translate_meets(const DInftySystem& S, const CylinderX& C, const DElement& g) {
  const long len = static_cast<long>(C.word.size());
  std::pair<long, std::string> image;
  if (g.j == 0)
    image = {C.position - g.n, C.word};
  else
    image = {S.offset() - C.position - len + 1 - g.n, S.reflect_word(C.word)};
  return patterns_compatible(S.base(), {{C.position, C.word}, image});
}

bool is_admissible(const DInftySystem& S, const CylinderX& C, const Rational& lo, const Rational& hi) {
  if (!S.base().is_legal(C.word)) return false;
  for (const auto& g : overlapping_elements(lo, hi))
    if (translate_meets(S, C, g)) return false;
  return true;
}

bool is_admissible(const StoneSystem& X, const CylinderX& C, const Rational& lo, const Rational& hi) {
  if (!(lo < hi) || !X.is_legal(C.word)) return false;
  return hi - lo < smallest_return_time(X, C);
}

namespace {

void require_not_sigma_fixed(const DInftySystem& S, const PointSpec& x, long radius) {
  const Window w = evaluate_point(S, x, -radius, radius + 1);
  for (long m = -radius; m <= radius; ++m) {
    const long k = S.offset() - m;
    if (k < -radius || k > radius) continue;
    if (w.at(m) != S.tau(w.at(k))) return;
  }
  throw DomainError("point is fixed by sigma up to radius " + std::to_string(radius));
}

}  // namespace

CylinderX admissible_chart_around(const DInftySystem& S, const PointSpec& x, const Rational& t,
                                  const Rational& lo, const Rational& hi, long max_depth) {
  if (!(lo < t && t < hi)) throw DomainError("t lies outside the interval");
  const auto F = overlapping_elements(lo, hi);
  require_not_sigma_fixed(S, x, std::max<long>(64, S.certificate().depth));
  if (F.empty()) return {};
  const Window w = evaluate_point(S, x, -max_depth, max_depth + 1);
  DElement blocking;
  for (long k = 0; k <= max_depth; ++k) {
    CylinderX C{w.letters.substr(static_cast<std::size_t>(max_depth - k), static_cast<std::size_t>(2 * k + 1)), -k};
    bool ok = true;
    for (const auto& g : F)
      if (translate_meets(S, C, g)) {
        ok = false;
        blocking = g;
        break;
      }
    if (ok) return C;
  }
  throw BudgetExceeded("no separating cylinder; blocked by (" + std::to_string(blocking.n) + ", " +
                           std::to_string(blocking.j) + ")",
                       max_depth);
}

std::vector<LeafCrossing> leaf_itinerary(const DInftySystem& S, const PointSpec& x, const Rational& window_lo,
                                         const Rational& window_hi, const CylinderX& C, const Rational& lo,
                                         const Rational& hi, long max_depth) {
  if (!(window_lo <= window_hi)) throw DomainError("window is empty");
  if (!is_admissible(S, C, lo, hi)) throw DomainError("chart is not admissible");
  require_not_sigma_fixed(S, x, std::max<long>(64, S.certificate().depth));
  const long p = C.position;
  const long len = static_cast<long>(C.word.size());
  const long plus_lo = floor_q(window_lo - hi) + 1, plus_hi = ceil_q(window_hi - lo) - 1;
  const long minus_lo = floor_q(-hi - window_hi) + 1, minus_hi = ceil_q(-lo - window_lo) - 1;
  const long off = S.offset();
  const long need_lo = std::min(plus_lo + p, off - minus_hi - p - len + 1);
  const long need_hi = std::max(plus_hi + p + len, off - minus_lo - p + 1);
  if (std::max(std::abs(need_lo), std::abs(need_hi)) > max_depth)
    throw BudgetExceeded("window too large for the point oracle depth", max_depth);
  const Window w = evaluate_point(S, x, need_lo, need_hi);

  std::vector<LeafCrossing> out;
  for (long n = plus_lo; n <= plus_hi; ++n)
    if (*w.shifted_in(C, n)) out.push_back({Segment::open(lo + n, hi + n), 1, n});
  for (long n = minus_lo; n <= minus_hi; ++n) {
    bool in = true;
    for (long i = 0; i < len && in; ++i) in = S.tau(w.at(off - (p + i) - n)) == C.word[static_cast<std::size_t>(i)];
    if (in) out.push_back({Segment::open(-hi - n, -lo - n), -1, n});
  }
  std::sort(out.begin(), out.end(), [](const LeafCrossing& a, const LeafCrossing& b) { return a.span.lo < b.span.lo; });
  return out;
}

pl::PLMap leaf_action(const DInftySystem& S, const PointSpec& x, const ChartElement& g, const Rational& window_lo,
                      const Rational& window_hi, long max_depth) {
  if (g.f.on_line() || !g.f.fixes_endpoints()) throw DomainError("chart map must fix the ends of its interval");
  const auto crossings = leaf_itinerary(S, x, window_lo, window_hi, g.cell, g.f.lo(), g.f.hi(), max_depth);
  if (crossings.empty()) return pl::PLMap::identity_line();
  std::vector<pl::Vertex> vs;
  auto push = [&](Rational a, Rational b) {
    if (!vs.empty() && vs.back().first == a) return;
    vs.emplace_back(std::move(a), std::move(b));
  };
  const auto fv = g.f.vertices();
  for (const auto& c : crossings) {
    if (c.sign > 0) {
      for (const auto& [s, fs] : fv) push(s + c.n, fs + c.n);
    } else {
      for (auto it = fv.rbegin(); it != fv.rend(); ++it) push(-it->first - c.n, -it->second - c.n);
    }
  }
  return pl::PLMap::on_line(std::move(vs));
}

namespace {

struct Span {
  long n_lo;
  long n_hi;
};

// Shifts n with [lo + n, hi + n) meeting [0, 1].
Span unit_shifts(const Rational& lo, const Rational& hi) { return {floor_q(-hi) + 1, floor_q(1 - lo)}; }

void tile_unit(const StoneSystem& X, const FlowElement& g, bool images, const char* what, FlowValidation& v) {
  long wlo = 0, whi = 0;
  bool first = true;
  for (const auto& pc : g.pieces) {
    const Rational lo = images ? pc.f.image_lo() : pc.lo;
    const Rational hi = images ? pc.f.image_hi() : pc.hi;
    const Span s = unit_shifts(lo, hi);
    const long a = s.n_lo + pc.cell.position;
    const long b = s.n_hi + pc.cell.position + static_cast<long>(pc.cell.word.size());
    wlo = first ? a : std::min(wlo, a);
    whi = first ? b : std::max(whi, b);
    first = false;
  }
  if (whi - wlo > 4096) throw BudgetExceeded("flow validation window too long", whi - wlo);
  for (const auto& word : X.legal_words(static_cast<std::size_t>(whi - wlo))) {
    const Window w{wlo, word};
    std::vector<Segment> segs;
    std::vector<std::size_t> owner;
    for (std::size_t i = 0; i < g.pieces.size(); ++i) {
      const auto& pc = g.pieces[i];
      const Rational lo = images ? pc.f.image_lo() : pc.lo;
      const Rational hi = images ? pc.f.image_hi() : pc.hi;
      const Span s = unit_shifts(lo, hi);
      for (long n = s.n_lo; n <= s.n_hi; ++n)
        if (*w.shifted_in(pc.cell, n)) {
          segs.push_back(Segment::half_open(lo + n, hi + n));
          owner.push_back(i);
        }
    }
    auto r = check_tiling(segs, 0, 1);
    if (r.ok) continue;
    std::string pieces;
    for (auto k : r.offending) pieces += (pieces.empty() ? "" : ",") + std::to_string(owner[k]);
    v.ok = false;
    v.issues.push_back({r.offending.empty() ? 0 : owner[r.offending.front()],
                        std::string(what) + " charts: " + r.detail + " on pattern " + word + " at " +
                            std::to_string(wlo) + " (pieces " + pieces + ")"});
    return;
  }
}

}  // namespace

FlowValidation validate_flow(const StoneSystem& X, const FlowElement& g) {
  FlowValidation v;
  if (g.pieces.empty()) {
    v.ok = false;
    v.issues.push_back({0, "no pieces"});
    return v;
  }
  for (std::size_t i = 0; i < g.pieces.size(); ++i) {
    const auto& pc = g.pieces[i];
    auto issue = [&](std::string m) {
      v.ok = false;
      v.issues.push_back({i, std::move(m)});
    };
    if (!X.is_legal(pc.cell.word)) {
      issue("cell " + pc.cell.word + " is not legal");
      continue;
    }
    if (!(pc.lo < pc.hi)) {
      issue("empty interval");
      continue;
    }
    if (pc.f.on_line() || pc.f.lo() != pc.lo || pc.f.hi() != pc.hi) {
      issue("map domain differs from " + Segment::half_open(pc.lo, pc.hi).str());
      continue;
    }
    const long tau = smallest_return_time(X, pc.cell);
    if (pc.hi - pc.lo > tau) issue("domain chart is not admissible");
    if (pc.f.image_hi() - pc.f.image_lo() > tau) issue("image chart is not admissible");
  }
  if (!v.ok) return v;
  tile_unit(X, g, false, "domain", v);
  tile_unit(X, g, true, "image", v);
  return v;
}

bool is_dyadic(const FlowElement& g) {
  for (const auto& pc : g.pieces)
    if (!htlab::is_dyadic(pc.lo) || !htlab::is_dyadic(pc.hi) || !pl::is_dyadic(pc.f)) return false;
  return true;
}

FlowElement flow_identity(const StoneSystem& X) {
  (void)X;
  return {{{CylinderX{}, 0, 1, pl::PLMap::identity(0, 1)}}};
}

FlowElement chart_supported(const StoneSystem& X, const CylinderX& C, const pl::PLMap& f, long bound) {
  if (f.on_line() || !f.fixes_endpoints()) throw DomainError("chart map must fix the ends of its interval");
  const Rational lo = f.lo(), hi = f.hi();
  FlowElement g;
  g.pieces.push_back({C, lo, hi, f});
  for (const auto& rc : first_return_partition(X, C, bound)) {
    const Rational end = rc.time + lo;
    if (hi < end) g.pieces.push_back({rc.cell, hi, end, pl::PLMap::identity(hi, end)});
  }
  return g;
}

FlowElement compose_flow(const FlowElement& g, const FlowElement& h) {
  FlowElement out;
  for (std::size_t i = 0; i < h.pieces.size(); ++i) {
    const auto& hp = h.pieces[i];
    auto it = std::find_if(g.pieces.begin(), g.pieces.end(), [&](const FlowPiece& gp) {
      return gp.cell == hp.cell && gp.lo == hp.f.image_lo() && gp.hi == hp.f.image_hi();
    });
    if (it == g.pieces.end())
      throw DomainError("no common chart refinement for piece " + std::to_string(i));
    out.pieces.push_back({hp.cell, hp.lo, hp.hi, pl::pl_compose(it->f, hp.f)});
  }
  return out;
}

FlowPoint normalize(const FlowPoint& p) {
  const long k = floor_q(p.t);
  FlowPoint out = p;
  out.x.shift += k;
  out.t -= k;
  return out;
}

FlowPoint flow_eval(const StoneSystem& X, const FlowElement& g, const FlowPoint& p) {
  const auto v = validate_flow(X, g);
  if (!v.ok) {
    std::string m;
    for (const auto& is : v.issues) m += (m.empty() ? "" : "; ") + ("piece " + std::to_string(is.piece) + ": " + is.message);
    throw DomainError("invalid flow element: " + m);
  }
  for (const auto& pc : g.pieces) {
    const long n_lo = floor_q(p.t - pc.hi) + 1;
    const long n_hi = floor_q(p.t - pc.lo);
    const long len = static_cast<long>(pc.cell.word.size());
    const Window w = evaluate_point(X, p.x, n_lo + pc.cell.position, n_hi + pc.cell.position + len);
    for (long n = n_lo; n <= n_hi; ++n)
      if (*w.shifted_in(pc.cell, n)) return normalize({p.x, pc.f(p.t - n) + n});
  }
  throw DomainError("point lies in no piece");
}

}  // namespace htlab::flow
