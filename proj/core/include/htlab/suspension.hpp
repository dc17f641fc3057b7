#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "htlab/pl.hpp"
#include "htlab/rational.hpp"

namespace htlab::flow {

constexpr long kDefaultReturnBound = 512;
constexpr std::size_t kMaxLegalWords = 2'000'000;
constexpr long kMaxPointRadius = 1L << 20;

// Two-sided subshift given by a substitution, a single periodic orbit or the
// full shift. phi is the left shift: (phi x)_n = x_{n+1}.
class StoneSystem {
public:
  enum class Kind { Substitution, Periodic, FullShift };

  static StoneSystem substitution(std::map<char, std::string> rules);
  static StoneSystem periodic(std::string word);
  static StoneSystem full_shift(std::string alphabet);

  Kind kind() const { return kind_; }
  const std::string& alphabet() const { return alphabet_; }
  const std::map<char, std::string>& rules() const { return rules_; }
  const std::string& period() const { return period_; }
  bool minimal() const { return minimal_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  std::string substitute(std::string_view w) const;

  // Sorted; safe to call from several threads.
  const std::vector<std::string>& legal_words(std::size_t n) const;
  bool is_legal(std::string_view w) const;

  friend bool operator==(const StoneSystem& a, const StoneSystem& b) {
    return a.kind_ == b.kind_ && a.alphabet_ == b.alphabet_ && a.rules_ == b.rules_ && a.period_ == b.period_;
  }

private:
  struct Cache;
  StoneSystem();
  void compute_levels(std::size_t n) const;

  Kind kind_ = Kind::FullShift;
  std::string alphabet_;
  std::map<char, std::string> rules_;
  std::string period_;
  bool minimal_ = false;
  std::vector<std::string> warnings_;
  std::shared_ptr<Cache> cache_;
};

// The set of x with x_{position} ... x_{position+|word|-1} = word.
struct CylinderX {
  std::string word;
  long position = 0;
  friend bool operator==(const CylinderX&, const CylinderX&) = default;
  friend auto operator<=>(const CylinderX&, const CylinderX&) = default;
};

struct ReturnCell {
  CylinderX cell;
  long time = 0;
  friend bool operator==(const ReturnCell&, const ReturnCell&) = default;
};

long smallest_return_time(const StoneSystem& X, const CylinderX& C, long bound = kDefaultReturnBound);
std::vector<ReturnCell> first_return_partition(const StoneSystem& X, const CylinderX& C,
                                               long bound = kDefaultReturnBound);

// An interval with independently open or closed ends.
struct Segment {
  Rational lo;
  Rational hi;
  bool lo_closed = false;
  bool hi_closed = false;

  static Segment open(Rational lo, Rational hi) { return {std::move(lo), std::move(hi), false, false}; }
  static Segment closed(Rational lo, Rational hi) { return {std::move(lo), std::move(hi), true, true}; }
  static Segment half_open(Rational lo, Rational hi) { return {std::move(lo), std::move(hi), true, false}; }

  bool contains(const Rational& t) const;
  bool empty() const { return lo > hi || (lo == hi && !(lo_closed && hi_closed)); }
  Rational length() const { return hi - lo; }
  Segment shifted(const Rational& n) const { return {lo + n, hi + n, lo_closed, hi_closed}; }
  std::string str() const;
  friend bool operator==(const Segment&, const Segment&) = default;
};

struct TilingReport {
  bool ok = true;
  std::string detail;
  std::vector<std::size_t> offending;  // indices into the input
};

// Every point of the closed range [lo, hi] lies in exactly one segment.
TilingReport check_tiling(const std::vector<Segment>& segments, const Rational& lo, const Rational& hi);

struct Chart {
  CylinderX cell;
  Segment span;
  friend bool operator==(const Chart&, const Chart&) = default;
};

struct ReturnChart {
  Chart chart;
  long time = 0;
};

// Charts (C_i, (b, t_i + a)) filling the complement of the closed chart C x [a, b].
std::vector<ReturnChart> chart_decomposition(const StoneSystem& X, const CylinderX& C, const Rational& a,
                                             const Rational& b, long bound = kDefaultReturnBound);

// Known letters x_first ... x_{first+|letters|-1} of a point.
struct Window {
  long first = 0;
  std::string letters;

  long last() const { return first + static_cast<long>(letters.size()); }  // exclusive
  bool covers(long lo, long hi) const { return lo >= first && hi <= last(); }
  char at(long i) const;
  // Whether phi^n(x) lies in C; empty when the window does not decide it.
  std::optional<bool> shifted_in(const CylinderX& C, long n) const;
};

// Leaf of the window's point, cut at the first and last visit to C that the
// window fully determines, tiled by C x [a, b] and the decomposition charts.
TilingReport certify_leaf_segment(const Window& x, const CylinderX& C, const Rational& a, const Rational& b,
                                  const std::vector<ReturnChart>& charts);

struct InvolutionSpec {
  std::map<char, char> letters;  // tau; missing letters are fixed
  bool reflect = true;
  long offset = -1;  // sigma(x)_n = tau(x_{offset - n})
  friend bool operator==(const InvolutionSpec&, const InvolutionSpec&) = default;
};

struct DInftyReport {
  bool relations_ok = true;
  std::string relation_detail;
  bool legality_ok = true;
  std::string legality_witness;
  bool free = true;
  std::string freeness_witness;
  std::string witness_kind;  // "skew-palindrome" or "periodic"
  long depth = 0;
  long max_translation = 0;  // translations certified fixed-point free up to this
};

DInftyReport check_dinfty(const StoneSystem& X, const InvolutionSpec& spec, long depth);

class DInftySystem {
public:
  const StoneSystem& base() const { return base_; }
  const InvolutionSpec& involution() const { return spec_; }
  const DInftyReport& certificate() const { return report_; }
  char tau(char c) const;
  std::string reflect_word(std::string_view w) const;  // tau applied to the reversal
  long offset() const { return spec_.offset; }

private:
  friend DInftySystem build_dinfty(const StoneSystem&, const InvolutionSpec&, long, bool);
  DInftySystem(StoneSystem base, InvolutionSpec spec, DInftyReport report)
      : base_(std::move(base)), spec_(std::move(spec)), report_(std::move(report)) {}

  StoneSystem base_;
  InvolutionSpec spec_;
  DInftyReport report_;
};

// Throws on relation or legality failure, and on a freeness violation unless
// require_free is false (the certificate then records the witness).
DInftySystem build_dinfty(const StoneSystem& X, const InvolutionSpec& spec, long depth = 16,
                          bool require_free = true);

// phi^shift sigma^reflected applied to a periodic point or to a two-sided
// fixed point of a power of the substitution seeded at left.right.
struct PointSpec {
  enum class Kind { Periodic, FixedPoint };
  Kind kind = Kind::Periodic;
  std::string word;  // periodic block
  char left = 0;
  char right = 0;
  long power = 0;  // 0: least working power
  long shift = 0;
  bool reflected = false;
  friend bool operator==(const PointSpec&, const PointSpec&) = default;
};

PointSpec find_fixed_point(const StoneSystem& X);

// Letters x_lo ... x_{hi-1}. Reflected points need the involution.
Window evaluate_point(const StoneSystem& X, const InvolutionSpec* inv, const PointSpec& x, long lo, long hi);
Window evaluate_point(const StoneSystem& X, const PointSpec& x, long lo, long hi);
Window evaluate_point(const DInftySystem& S, const PointSpec& x, long lo, long hi);

// Non-trivial (n, j) in D_infinity with (n, j).I meeting I, where
// (n, j).t = (-1)^j t - n.
struct DElement {
  long n = 0;
  int j = 0;
  friend bool operator==(const DElement&, const DElement&) = default;
  friend auto operator<=>(const DElement&, const DElement&) = default;
};

std::vector<DElement> overlapping_elements(const Rational& lo, const Rational& hi);

// g(C) meets C.
bool translate_meets(const DInftySystem& S, const CylinderX& C, const DElement& g);
bool is_admissible(const DInftySystem& S, const CylinderX& C, const Rational& lo, const Rational& hi);
bool is_admissible(const StoneSystem& X, const CylinderX& C, const Rational& lo, const Rational& hi);

CylinderX admissible_chart_around(const DInftySystem& S, const PointSpec& x, const Rational& t,
                                  const Rational& lo, const Rational& hi, long max_depth = 32);

// A traversal of the chart by the leaf through x: leaf coordinate s in `span`
// is chart coordinate s - n (sign +) or -s - n (sign -).
struct LeafCrossing {
  Segment span;
  int sign = 1;
  long n = 0;

  Rational to_chart(const Rational& s) const { return sign > 0 ? Rational(s - n) : Rational(-s - n); }
  Rational to_leaf(const Rational& u) const { return sign > 0 ? Rational(u + n) : Rational(-u - n); }
  friend bool operator==(const LeafCrossing&, const LeafCrossing&) = default;
};

std::vector<LeafCrossing> leaf_itinerary(const DInftySystem& S, const PointSpec& x, const Rational& window_lo,
                                         const Rational& window_hi, const CylinderX& C, const Rational& lo,
                                         const Rational& hi, long max_depth = 1L << 16);

// Acts by f on the chart C x (lo, hi) and trivially elsewhere; f fixes lo and hi.
struct ChartElement {
  CylinderX cell;
  pl::PLMap f;
};

// The action on the leaf through x restricted to the window, extended by the identity.
pl::PLMap leaf_action(const DInftySystem& S, const PointSpec& x, const ChartElement& g, const Rational& window_lo,
                      const Rational& window_hi, long max_depth = 1L << 16);

// Piece C x [lo, hi) -> C x [f(lo), f(hi)) acting by f.
struct FlowPiece {
  CylinderX cell;
  Rational lo;
  Rational hi;
  pl::PLMap f;
};

struct FlowElement {
  std::vector<FlowPiece> pieces;
};

struct FlowIssue {
  std::size_t piece = 0;
  std::string message;
};

struct FlowValidation {
  bool ok = true;
  std::vector<FlowIssue> issues;
};

FlowValidation validate_flow(const StoneSystem& X, const FlowElement& g);
bool is_dyadic(const FlowElement& g);

FlowElement flow_identity(const StoneSystem& X);
// f on C x [lo, hi), identity on the first-return charts of the complement.
FlowElement chart_supported(const StoneSystem& X, const CylinderX& C, const pl::PLMap& f,
                            long bound = kDefaultReturnBound);
// g after h, when the image charts of h are domain charts of g.
FlowElement compose_flow(const FlowElement& g, const FlowElement& h);

struct FlowPoint {
  PointSpec x;
  Rational t;
  friend bool operator==(const FlowPoint&, const FlowPoint&) = default;
};

// Result normalized to t in [0, 1).
FlowPoint normalize(const FlowPoint& p);
FlowPoint flow_eval(const StoneSystem& X, const FlowElement& g, const FlowPoint& p);

}  // namespace htlab::flow
