#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace htlab::cantor {

constexpr int kMinArity = 2;
constexpr int kMaxArity = 10;

void check_arity(int d);

// A finite word over {0,...,d-1}; letters are stored as raw values, not digits.
class Word {
public:
  Word() = default;
  explicit Word(int d);
  Word(int d, std::string letters);

  // Parses a digit string such as "0110".
  static Word parse(int d, std::string_view digits);

  int arity() const { return d_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  int operator[](std::size_t i) const { return static_cast<unsigned char>(letters_[i]); }
  const std::string& letters() const { return letters_; }

  std::string str() const;

  Word prefix(std::size_t n) const;
  Word drop(std::size_t n) const;
  Word child(int letter) const;
  Word parent() const;
  Word operator+(const Word& rhs) const;
  Word& operator+=(const Word& rhs);

  bool is_prefix_of(const Word& other) const;
  bool comparable(const Word& other) const { return is_prefix_of(other) || other.is_prefix_of(*this); }

  friend bool operator==(const Word&, const Word&) = default;
  friend std::strong_ordering operator<=>(const Word& a, const Word& b);

private:
  int d_ = 2;
  std::string letters_;
};

void require_same_arity(int d1, int d2);

// A finite set of pairwise prefix-incomparable words, kept sorted.
class Antichain {
public:
  Antichain() = default;
  explicit Antichain(int d) : d_(d) { check_arity(d); }
  Antichain(int d, std::vector<Word> cells);

  int arity() const { return d_; }
  const std::vector<Word>& cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }

  // True iff every infinite sequence has a prefix among the cells.
  bool is_complete() const;

  friend bool operator==(const Antichain&, const Antichain&) = default;

private:
  int d_ = 2;
  std::vector<Word> cells_;
};

bool is_antichain(const std::vector<Word>& sorted_cells);
bool is_complete_antichain(int d, const std::vector<Word>& cells);

class EvPeriodicPoint;

// Finite union of cylinders, stored as a sorted antichain with no complete
// sibling group. Equality of sets is equality of representations.
class ClopenSet {
public:
  ClopenSet() = default;
  explicit ClopenSet(int d) : d_(d) { check_arity(d); }
  ClopenSet(int d, std::vector<Word> cells);

  static ClopenSet full(int d);
  static ClopenSet empty_set(int d) { return ClopenSet(d); }
  static ClopenSet cylinder(const Word& w);

  int arity() const { return d_; }
  const std::vector<Word>& cells() const { return cells_; }
  bool empty() const { return cells_.empty(); }
  bool is_full() const { return cells_.size() == 1 && cells_.front().empty(); }
  std::size_t max_depth() const;

  bool contains(const EvPeriodicPoint& p) const;
  bool contains_cell(const Word& w) const;

  friend bool operator==(const ClopenSet&, const ClopenSet&) = default;

private:
  int d_ = 2;
  std::vector<Word> cells_;
};

// Sorts, removes covered cells and merges sibling groups to a fixpoint.
std::vector<Word> canonical_cells(int d, std::vector<Word> cells);

ClopenSet set_union(const ClopenSet& a, const ClopenSet& b);
ClopenSet set_intersection(const ClopenSet& a, const ClopenSet& b);
ClopenSet set_difference(const ClopenSet& a, const ClopenSet& b);
ClopenSet complement(const ClopenSet& a);
bool is_subset(const ClopenSet& a, const ClopenSet& b);
bool disjoint(const ClopenSet& a, const ClopenSet& b);

enum class ClopenOp { Union, Intersect, Complement, Difference };
ClopenSet clopen_algebra(const ClopenSet& a, const ClopenSet& b, ClopenOp op);

// Coarsest complete antichain refining both inputs.
Antichain common_refinement(const Antichain& a, const Antichain& b);

// Expands cells (shortest first, lexicographically greatest among ties)
// until exactly `target` cells remain.
Antichain pad_antichain(const Antichain& a, std::size_t target);

// The sequence pre . per . per . ...; canonical when per is primitive and
// pre is as short as possible.
class EvPeriodicPoint {
public:
  EvPeriodicPoint() = default;
  EvPeriodicPoint(Word preperiod, Word period);

  // Accepts "pre(per)", e.g. "1(0)"; "(01)" for a purely periodic point.
  static EvPeriodicPoint parse(int d, std::string_view text);
  static EvPeriodicPoint constant(int d, int letter);

  int arity() const { return pre_.arity(); }
  const Word& preperiod() const { return pre_; }
  const Word& period() const { return per_; }

  int letter(std::size_t i) const;
  Word prefix(std::size_t n) const;
  EvPeriodicPoint shift(std::size_t n) const;
  EvPeriodicPoint prepend(const Word& w) const;
  bool has_prefix(const Word& w) const;

  std::string str() const;

  friend bool operator==(const EvPeriodicPoint&, const EvPeriodicPoint&) = default;
  friend std::strong_ordering operator<=>(const EvPeriodicPoint& a, const EvPeriodicPoint& b);

private:
  Word pre_;
  Word per_;
};

bool contains_point(const ClopenSet& c, const EvPeriodicPoint& p);

}  // namespace htlab::cantor
