#include "htlab/cantor.hpp"

#include <algorithm>
#include <numeric>

#include "htlab/error.hpp"

namespace htlab::cantor {

void check_arity(int d) {
  if (d < kMinArity || d > kMaxArity)
    throw DomainError("alphabet size " + std::to_string(d) + " outside [2,10]");
}

void require_same_arity(int d1, int d2) {
  if (d1 != d2)
    throw DomainError("alphabet size mismatch: " + std::to_string(d1) + " vs " + std::to_string(d2));
}

// ---------------------------------------------------------------------------
// Word

Word::Word(int d) : d_(d) { check_arity(d); }

Word::Word(int d, std::string letters) : d_(d), letters_(std::move(letters)) {
  check_arity(d);
  for (char c : letters_)
    if (static_cast<unsigned char>(c) >= static_cast<unsigned>(d))
      throw DomainError("letter " + std::to_string(static_cast<unsigned char>(c)) +
                        " out of range for d=" + std::to_string(d));
}

Word Word::parse(int d, std::string_view digits) {
  std::string letters;
  letters.reserve(digits.size());
  for (char c : digits) {
    if (c < '0' || c > '9')
      throw DomainError("invalid letter '" + std::string(1, c) + "' in word \"" + std::string(digits) + "\"");
    letters.push_back(static_cast<char>(c - '0'));
  }
  return Word(d, std::move(letters));
}

std::string Word::str() const {
  std::string out(letters_.size(), '0');
  for (std::size_t i = 0; i < letters_.size(); ++i)
    out[i] = static_cast<char>('0' + letters_[i]);
  return out;
}

Word Word::prefix(std::size_t n) const {
  Word w = *this;
  w.letters_.resize(std::min(n, letters_.size()));
  return w;
}

Word Word::drop(std::size_t n) const {
  Word w(d_);
  if (n < letters_.size())
    w.letters_ = letters_.substr(n);
  return w;
}

Word Word::child(int letter) const {
  if (letter < 0 || letter >= d_)
    throw DomainError("child letter out of range");
  Word w = *this;
  w.letters_.push_back(static_cast<char>(letter));
  return w;
}

Word Word::parent() const {
  if (letters_.empty())
    throw DomainError("the empty word has no parent");
  Word w = *this;
  w.letters_.pop_back();
  return w;
}

Word Word::operator+(const Word& rhs) const {
  Word w = *this;
  w += rhs;
  return w;
}

Word& Word::operator+=(const Word& rhs) {
  require_same_arity(d_, rhs.d_);
  letters_ += rhs.letters_;
  return *this;
}

bool Word::is_prefix_of(const Word& other) const {
  return letters_.size() <= other.letters_.size() &&
         other.letters_.compare(0, letters_.size(), letters_) == 0;
}

std::strong_ordering operator<=>(const Word& a, const Word& b) {
  if (auto c = a.d_ <=> b.d_; c != 0)
    return c;
  int r = a.letters_.compare(b.letters_);
  return r < 0 ? std::strong_ordering::less
               : (r > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

// ---------------------------------------------------------------------------
// Antichains

bool is_antichain(const std::vector<Word>& sorted_cells) {
  for (std::size_t i = 1; i < sorted_cells.size(); ++i)
    if (sorted_cells[i - 1].is_prefix_of(sorted_cells[i]))
      return false;
  return true;
}

namespace {

// Cells in [first, last) all extend `root` and are sorted.
bool covers(int d, const Word& root, std::vector<Word>::const_iterator first,
            std::vector<Word>::const_iterator last) {
  if (first == last)
    return false;
  if (*first == root)
    return true;
  auto it = first;
  for (int c = 0; c < d; ++c) {
    Word child = root.child(c);
    auto stop = std::find_if(it, last, [&](const Word& w) { return !child.is_prefix_of(w); });
    if (!covers(d, child, it, stop))
      return false;
    it = stop;
  }
  return true;
}

void complement_rec(int d, const Word& root, std::vector<Word>::const_iterator first,
                    std::vector<Word>::const_iterator last, std::vector<Word>& out) {
  if (first == last) {
    out.push_back(root);
    return;
  }
  if (*first == root)
    return;
  auto it = first;
  for (int c = 0; c < d; ++c) {
    Word child = root.child(c);
    auto stop = std::find_if(it, last, [&](const Word& w) { return !child.is_prefix_of(w); });
    complement_rec(d, child, it, stop, out);
    it = stop;
  }
}

}  // namespace

bool is_complete_antichain(int d, const std::vector<Word>& cells) {
  std::vector<Word> sorted = cells;
  std::sort(sorted.begin(), sorted.end());
  if (!is_antichain(sorted) || std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    return false;
  return covers(d, Word(d), sorted.begin(), sorted.end());
}

Antichain::Antichain(int d, std::vector<Word> cells) : d_(d), cells_(std::move(cells)) {
  check_arity(d);
  for (const Word& w : cells_)
    require_same_arity(d, w.arity());
  std::sort(cells_.begin(), cells_.end());
  if (std::adjacent_find(cells_.begin(), cells_.end()) != cells_.end())
    throw DomainError("duplicate cell in antichain");
  for (std::size_t i = 1; i < cells_.size(); ++i)
    if (cells_[i - 1].is_prefix_of(cells_[i]))
      throw DomainError("not an antichain: \"" + cells_[i - 1].str() + "\" is a prefix of \"" +
                        cells_[i].str() + "\"");
}

bool Antichain::is_complete() const {
  return covers(d_, Word(d_), cells_.begin(), cells_.end());
}

Antichain common_refinement(const Antichain& a, const Antichain& b) {
  require_same_arity(a.arity(), b.arity());
  if (!a.is_complete() || !b.is_complete())
    throw DomainError("common_refinement requires complete antichains");
  std::vector<Word> out;
  for (const Word& x : a.cells())
    for (const Word& y : b.cells()) {
      if (x.is_prefix_of(y))
        out.push_back(y);
      else if (y.is_prefix_of(x))
        out.push_back(x);
    }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return Antichain(a.arity(), std::move(out));
}

Antichain pad_antichain(const Antichain& a, std::size_t target) {
  const int d = a.arity();
  const std::size_t step = static_cast<std::size_t>(d - 1);
  if (target < a.size())
    throw DomainError("pad target " + std::to_string(target) + " smaller than antichain size " +
                      std::to_string(a.size()));
  if ((target - a.size()) % step != 0)
    throw DomainError("pad target " + std::to_string(target) + " unreachable from size " +
                      std::to_string(a.size()) + ": residue gap " +
                      std::to_string((target - a.size()) % step) + " mod " + std::to_string(step));
  if (a.empty() && target > 0)
    throw DomainError("cannot pad an empty antichain");
  std::vector<Word> cells = a.cells();
  while (cells.size() < target) {
    std::size_t pick = 0;
    for (std::size_t i = 1; i < cells.size(); ++i)
      if (cells[i].size() < cells[pick].size() ||
          (cells[i].size() == cells[pick].size() && cells[pick] < cells[i]))
        pick = i;
    Word w = cells[pick];
    cells.erase(cells.begin() + static_cast<std::ptrdiff_t>(pick));
    for (int c = 0; c < d; ++c)
      cells.push_back(w.child(c));
  }
  return Antichain(d, std::move(cells));
}

// ---------------------------------------------------------------------------
// Clopen sets

std::vector<Word> canonical_cells(int d, std::vector<Word> cells) {
  std::sort(cells.begin(), cells.end());
  std::vector<Word> out;
  out.reserve(cells.size());
  for (Word& w : cells) {
    if (!out.empty() && out.back().is_prefix_of(w))
      continue;
    out.push_back(std::move(w));
    // Merge complete sibling groups; the last sibling arrives last in sorted order.
    while (!out.empty()) {
      const Word& top = out.back();
      if (top.empty() || top[top.size() - 1] != d - 1 || out.size() < static_cast<std::size_t>(d))
        break;
      Word parent = top.parent();
      bool full = true;
      for (int c = 0; c < d && full; ++c) {
        const Word& w2 = out[out.size() - static_cast<std::size_t>(d) + static_cast<std::size_t>(c)];
        full = w2.size() == top.size() && parent.is_prefix_of(w2) && w2[w2.size() - 1] == c;
      }
      if (!full)
        break;
      out.resize(out.size() - static_cast<std::size_t>(d));
      out.push_back(std::move(parent));
    }
  }
  return out;
}

ClopenSet::ClopenSet(int d, std::vector<Word> cells) : d_(d) {
  check_arity(d);
  for (const Word& w : cells)
    require_same_arity(d, w.arity());
  cells_ = canonical_cells(d, std::move(cells));
}

ClopenSet ClopenSet::full(int d) { return ClopenSet(d, {Word(d)}); }

ClopenSet ClopenSet::cylinder(const Word& w) { return ClopenSet(w.arity(), {w}); }

std::size_t ClopenSet::max_depth() const {
  std::size_t m = 0;
  for (const Word& w : cells_)
    m = std::max(m, w.size());
  return m;
}

bool ClopenSet::contains_cell(const Word& w) const {
  require_same_arity(d_, w.arity());
  auto it = std::upper_bound(cells_.begin(), cells_.end(), w);
  if (it == cells_.begin())
    return false;
  return std::prev(it)->is_prefix_of(w);
}

bool ClopenSet::contains(const EvPeriodicPoint& p) const {
  require_same_arity(d_, p.arity());
  if (cells_.empty())
    return false;
  return contains_cell(p.prefix(max_depth()));
}

bool contains_point(const ClopenSet& c, const EvPeriodicPoint& p) { return c.contains(p); }

ClopenSet set_union(const ClopenSet& a, const ClopenSet& b) {
  require_same_arity(a.arity(), b.arity());
  std::vector<Word> cells = a.cells();
  cells.insert(cells.end(), b.cells().begin(), b.cells().end());
  return ClopenSet(a.arity(), std::move(cells));
}

ClopenSet set_intersection(const ClopenSet& a, const ClopenSet& b) {
  require_same_arity(a.arity(), b.arity());
  std::vector<Word> cells;
  for (const Word& x : a.cells()) {
    // Cells of b comparable with x: a prefix of x, or extensions of x (a contiguous run).
    if (b.contains_cell(x)) {
      cells.push_back(x);
      continue;
    }
    auto it = std::lower_bound(b.cells().begin(), b.cells().end(), x);
    for (; it != b.cells().end() && x.is_prefix_of(*it); ++it)
      cells.push_back(*it);
  }
  return ClopenSet(a.arity(), std::move(cells));
}

ClopenSet complement(const ClopenSet& a) {
  std::vector<Word> out;
  complement_rec(a.arity(), Word(a.arity()), a.cells().begin(), a.cells().end(), out);
  return ClopenSet(a.arity(), std::move(out));
}

ClopenSet set_difference(const ClopenSet& a, const ClopenSet& b) {
  return set_intersection(a, complement(b));
}

bool is_subset(const ClopenSet& a, const ClopenSet& b) {
  require_same_arity(a.arity(), b.arity());
  return std::all_of(a.cells().begin(), a.cells().end(),
                     [&](const Word& w) { return b.contains_cell(w); });
}

bool disjoint(const ClopenSet& a, const ClopenSet& b) { return set_intersection(a, b).empty(); }

ClopenSet clopen_algebra(const ClopenSet& a, const ClopenSet& b, ClopenOp op) {
  switch (op) {
    case ClopenOp::Union: return set_union(a, b);
    case ClopenOp::Intersect: return set_intersection(a, b);
    case ClopenOp::Complement: return complement(a);
    case ClopenOp::Difference: return set_difference(a, b);
  }
  return a;
}

// ---------------------------------------------------------------------------
// Eventually periodic points

namespace {

std::size_t primitive_root_length(const std::string& s) {
  const std::size_t n = s.size();
  for (std::size_t p = 1; p < n; ++p) {
    if (n % p != 0)
      continue;
    bool ok = true;
    for (std::size_t i = p; i < n && ok; ++i)
      ok = s[i] == s[i - p];
    if (ok)
      return p;
  }
  return n;
}

}  // namespace

EvPeriodicPoint::EvPeriodicPoint(Word preperiod, Word period) : pre_(std::move(preperiod)) {
  require_same_arity(pre_.arity(), period.arity());
  if (period.empty())
    throw DomainError("period must be non-empty");
  std::string per = period.letters();
  per.resize(primitive_root_length(per));
  std::string pre = pre_.letters();
  while (!pre.empty() && pre.back() == per.back()) {
    pre.pop_back();
    std::rotate(per.rbegin(), per.rbegin() + 1, per.rend());
  }
  pre_ = Word(period.arity(), std::move(pre));
  per_ = Word(period.arity(), std::move(per));
}

EvPeriodicPoint EvPeriodicPoint::parse(int d, std::string_view text) {
  auto open = text.find('(');
  if (open == std::string_view::npos || text.empty() || text.back() != ')' || open + 2 > text.size() - 1)
    throw DomainError("malformed point \"" + std::string(text) + "\", expected pre(per)");
  return EvPeriodicPoint(Word::parse(d, text.substr(0, open)),
                         Word::parse(d, text.substr(open + 1, text.size() - open - 2)));
}

EvPeriodicPoint EvPeriodicPoint::constant(int d, int letter) {
  return EvPeriodicPoint(Word(d), Word(d).child(letter));
}

int EvPeriodicPoint::letter(std::size_t i) const {
  if (i < pre_.size())
    return pre_[i];
  return per_[(i - pre_.size()) % per_.size()];
}

Word EvPeriodicPoint::prefix(std::size_t n) const {
  std::string s;
  s.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    s.push_back(static_cast<char>(letter(i)));
  return Word(arity(), std::move(s));
}

EvPeriodicPoint EvPeriodicPoint::shift(std::size_t n) const {
  if (n <= pre_.size())
    return EvPeriodicPoint(pre_.drop(n), per_);
  std::size_t r = (n - pre_.size()) % per_.size();
  return EvPeriodicPoint(Word(arity()), per_.drop(r) + per_.prefix(r));
}

EvPeriodicPoint EvPeriodicPoint::prepend(const Word& w) const { return EvPeriodicPoint(w + pre_, per_); }

bool EvPeriodicPoint::has_prefix(const Word& w) const {
  require_same_arity(arity(), w.arity());
  for (std::size_t i = 0; i < w.size(); ++i)
    if (letter(i) != w[i])
      return false;
  return true;
}

std::string EvPeriodicPoint::str() const { return pre_.str() + "(" + per_.str() + ")"; }

std::strong_ordering operator<=>(const EvPeriodicPoint& a, const EvPeriodicPoint& b) {
  if (auto c = a.pre_ <=> b.pre_; c != 0)
    return c;
  return a.per_ <=> b.per_;
}

}  // namespace htlab::cantor
