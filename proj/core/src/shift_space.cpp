#include <algorithm>
#include <cstdlib>
#include <mutex>
#include <numeric>
#include <set>
#include <shared_mutex>

#include "htlab/error.hpp"
#include "htlab/suspension.hpp"

namespace htlab::flow {

struct StoneSystem::Cache {
  std::shared_mutex mutex;
  std::map<std::size_t, std::vector<std::string>> levels;
};

StoneSystem::StoneSystem() : cache_(std::make_shared<Cache>()) {}

namespace {

bool primitive(const std::string& alphabet, const std::map<char, std::string>& rules) {
  const std::size_t k = alphabet.size();
  auto index = [&](char c) { return alphabet.find(c); };
  std::vector<std::vector<bool>> m(k, std::vector<bool>(k, false));
  for (std::size_t j = 0; j < k; ++j)
    for (char c : rules.at(alphabet[j])) m[index(c)][j] = true;
  auto p = m;
  for (std::size_t step = 1; step <= k * k; ++step) {
    bool positive = true;
    for (const auto& row : p)
      for (bool v : row) positive = positive && v;
    if (positive) return true;
    std::vector<std::vector<bool>> next(k, std::vector<bool>(k, false));
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t l = 0; l < k; ++l)
        if (p[i][l])
          for (std::size_t j = 0; j < k; ++j)
            if (m[l][j]) next[i][j] = true;
    p = std::move(next);
  }
  return false;
}

void add_factors(const std::string& s, std::size_t n, std::set<std::string>& out,
                 std::vector<std::string>* fresh) {
  if (s.size() < n) return;
  for (std::size_t i = 0; i + n <= s.size(); ++i) {
    auto [it, inserted] = out.insert(s.substr(i, n));
    if (inserted && fresh) fresh->push_back(*it);
  }
}

void check_budget(std::size_t count, std::size_t n) {
  if (count > kMaxLegalWords) throw BudgetExceeded("too many legal words", static_cast<long>(n));
}

}  // namespace

StoneSystem StoneSystem::substitution(std::map<char, std::string> rules) {
  if (rules.empty()) throw DomainError("substitution has an empty alphabet");
  StoneSystem s;
  s.kind_ = Kind::Substitution;
  for (const auto& [c, image] : rules) {
    if (image.empty()) throw DomainError(std::string("erasing rule for letter '") + c + "'");
    s.alphabet_.push_back(c);
  }
  for (const auto& [c, image] : rules)
    for (char x : image)
      if (!rules.count(x))
        throw DomainError(std::string("image of '") + c + "' uses letter '" + x + "' outside the alphabet");
  s.rules_ = std::move(rules);
  s.minimal_ = primitive(s.alphabet_, s.rules_);
  if (s.alphabet_.size() == 1) s.warnings_.push_back("degenerate single-point system");
  return s;
}

StoneSystem StoneSystem::periodic(std::string word) {
  if (word.empty()) throw DomainError("periodic word is empty");
  StoneSystem s;
  s.kind_ = Kind::Periodic;
  const std::size_t n = word.size();
  std::size_t p = n;
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d) continue;
    bool ok = true;
    for (std::size_t i = d; i < n && ok; ++i) ok = word[i] == word[i - d];
    if (ok) {
      p = d;
      break;
    }
  }
  s.period_ = word.substr(0, p);
  std::set<char> letters(s.period_.begin(), s.period_.end());
  s.alphabet_.assign(letters.begin(), letters.end());
  s.minimal_ = true;
  if (p == 1) s.warnings_.push_back("degenerate single-point system");
  return s;
}

StoneSystem StoneSystem::full_shift(std::string alphabet) {
  std::set<char> letters(alphabet.begin(), alphabet.end());
  if (letters.empty()) throw DomainError("full shift has an empty alphabet");
  StoneSystem s;
  s.kind_ = Kind::FullShift;
  s.alphabet_.assign(letters.begin(), letters.end());
  s.minimal_ = letters.size() == 1;
  if (letters.size() == 1) s.warnings_.push_back("degenerate single-point system");
  return s;
}

std::string StoneSystem::substitute(std::string_view w) const {
  if (kind_ != Kind::Substitution) throw DomainError("system is not given by a substitution");
  std::string out;
  for (char c : w) {
    auto it = rules_.find(c);
    if (it == rules_.end()) throw DomainError(std::string("letter '") + c + "' outside the alphabet");
    out += it->second;
  }
  return out;
}

void StoneSystem::compute_levels(std::size_t n) const {
  auto& levels = cache_->levels;
  for (std::size_t m = 0; m <= n; ++m) {
    if (levels.count(m)) continue;
    std::set<std::string> words;
    if (m == 0) {
      words.insert("");
    } else if (kind_ == Kind::Periodic) {
      std::string rep;
      while (rep.size() < m + period_.size()) rep += period_;
      for (std::size_t i = 0; i < period_.size(); ++i) words.insert(rep.substr(i, m));
    } else if (kind_ == Kind::FullShift) {
      double count = 1;
      for (std::size_t i = 0; i < m; ++i) count *= static_cast<double>(alphabet_.size());
      check_budget(static_cast<std::size_t>(std::min(count, 1e18)), m);
      for (const auto& w : levels.at(m - 1))
        for (char c : alphabet_) words.insert(w + c);
    } else if (m == 1) {
      for (char c : alphabet_) words.insert(std::string(1, c));
    } else if (minimal_ && m > 2 && alphabet_.size() > 1) {
      // Primitive: once every image of sigma^k has length >= m - 1, each legal
      // word of length m sits inside the image of a legal two-letter word.
      std::map<char, std::string> img;
      for (char c : alphabet_) img[c] = std::string(1, c);
      auto shortest = [&] {
        std::size_t s = m;
        for (const auto& [c, w] : img) s = std::min(s, w.size());
        return s;
      };
      while (shortest() < m - 1)
        for (auto& [c, w] : img) w = substitute(w);
      for (const auto& v : levels.at(2)) add_factors(img.at(v[0]) + img.at(v[1]), m, words, nullptr);
    } else {
      std::size_t shortest = m;
      for (const auto& [c, image] : rules_) shortest = std::min(shortest, image.size());
      const std::size_t cover = std::min(m, (m - 2) / shortest + 2);
      std::vector<std::string> fresh;
      for (std::size_t k = 1; k <= cover && k < m; ++k)
        for (const auto& u : levels.at(k)) add_factors(substitute(u), m, words, &fresh);
      while (!fresh.empty()) {
        check_budget(words.size(), m);
        std::vector<std::string> next;
        for (const auto& u : fresh) add_factors(substitute(u), m, words, &next);
        fresh = std::move(next);
      }
    }
    check_budget(words.size(), m);
    levels.emplace(m, std::vector<std::string>(words.begin(), words.end()));
  }
}

const std::vector<std::string>& StoneSystem::legal_words(std::size_t n) const {
  {
    std::shared_lock lock(cache_->mutex);
    auto it = cache_->levels.find(n);
    if (it != cache_->levels.end()) return it->second;
  }
  std::unique_lock lock(cache_->mutex);
  compute_levels(n);
  return cache_->levels.at(n);
}

bool StoneSystem::is_legal(std::string_view w) const {
  const auto& words = legal_words(w.size());
  return std::binary_search(words.begin(), words.end(), w, std::less<>());
}

namespace {

std::pair<std::vector<std::string>::const_iterator, std::vector<std::string>::const_iterator> with_prefix(
    const std::vector<std::string>& words, const std::string& prefix) {
  auto lo = std::lower_bound(words.begin(), words.end(), prefix);
  auto hi = lo;
  while (hi != words.end() && hi->compare(0, prefix.size(), prefix) == 0) ++hi;
  return {lo, hi};
}

bool occurs_at(const std::string& s, const std::string& w, std::size_t i) {
  return s.compare(i, w.size(), w) == 0;
}

// First n >= 1 with w at position n of s, or 0.
long first_return(const std::string& s, const std::string& w) {
  for (std::size_t n = 1; n + w.size() <= s.size(); ++n)
    if (occurs_at(s, w, n)) return static_cast<long>(n);
  return 0;
}

void require_legal(const StoneSystem& X, const CylinderX& C) {
  for (char c : C.word)
    if (X.alphabet().find(c) == std::string::npos)
      throw DomainError(std::string("letter '") + c + "' outside the alphabet");
  if (!X.is_legal(C.word)) throw DomainError("cylinder word '" + C.word + "' is not legal");
}

}  // namespace

long smallest_return_time(const StoneSystem& X, const CylinderX& C, long bound) {
  require_legal(X, C);
  const std::string& w = C.word;
  if (w.empty()) return 1;
  for (long n = 1; n <= bound; ++n) {
    const auto len = static_cast<std::size_t>(n) + w.size();
    const auto& words = X.legal_words(len);
    auto [lo, hi] = with_prefix(words, w);
    for (auto it = lo; it != hi; ++it)
      if (occurs_at(*it, w, static_cast<std::size_t>(n))) return n;
  }
  throw BudgetExceeded("no return to [" + w + "] within bound", bound);
}

std::vector<ReturnCell> first_return_partition(const StoneSystem& X, const CylinderX& C, long bound) {
  require_legal(X, C);
  const std::string& w = C.word;
  if (w.empty()) return {{C, 1}};
  long max_time = 0;
  for (long T = 1;; ++T) {
    if (T > bound) throw BudgetExceeded("first return time to [" + w + "] exceeds bound", bound);
    const auto& words = X.legal_words(static_cast<std::size_t>(T) + w.size());
    auto [lo, hi] = with_prefix(words, w);
    bool complete = true;
    for (auto it = lo; it != hi && complete; ++it) complete = first_return(*it, w) != 0;
    if (complete) {
      max_time = T;
      break;
    }
  }
  const auto& words = X.legal_words(static_cast<std::size_t>(max_time) + w.size());
  auto [lo, hi] = with_prefix(words, w);
  std::vector<std::pair<std::string, long>> full;
  for (auto it = lo; it != hi; ++it) full.emplace_back(*it, first_return(*it, w));

  std::set<std::pair<long, std::string>> cells;
  for (const auto& [u, T] : full) {
    for (std::size_t len = w.size(); len <= u.size(); ++len) {
      const std::string v = u.substr(0, len);
      bool uniform = true;
      for (const auto& [u2, T2] : full)
        if (u2.compare(0, len, v) == 0 && T2 != T) {
          uniform = false;
          break;
        }
      if (uniform) {
        cells.emplace(T, v);
        break;
      }
    }
  }
  std::vector<ReturnCell> out;
  for (const auto& [T, v] : cells) out.push_back({{v, C.position}, T});
  return out;
}

char Window::at(long i) const {
  if (i < first || i >= last()) throw DomainError("index " + std::to_string(i) + " outside the evaluated window");
  return letters[static_cast<std::size_t>(i - first)];
}

std::optional<bool> Window::shifted_in(const CylinderX& C, long n) const {
  const long lo = C.position + n;
  const long hi = lo + static_cast<long>(C.word.size());
  // A known mismatch decides the question even when the cylinder sticks out.
  for (long i = std::max(lo, first); i < std::min(hi, last()); ++i)
    if (at(i) != C.word[static_cast<std::size_t>(i - lo)]) return false;
  if (!covers(lo, hi)) return std::nullopt;
  return true;
}

namespace {

long least_period(const std::map<char, char>& f, char start) {
  char c = start;
  for (long k = 1; k <= static_cast<long>(f.size()); ++k) {
    c = f.at(c);
    if (c == start) return k;
  }
  return 0;
}

std::string power_image(const StoneSystem& X, std::string s, long p) {
  for (long i = 0; i < p; ++i) s = X.substitute(s);
  return s;
}

long seed_power(const StoneSystem& X, char left, char right) {
  std::map<char, char> last, first;
  for (const auto& [c, image] : X.rules()) {
    last[c] = image.back();
    first[c] = image.front();
  }
  if (!last.count(left) || !first.count(right)) throw DomainError("seed letters outside the alphabet");
  const long a = least_period(last, left);
  const long b = least_period(first, right);
  if (!a || !b) return 0;
  return std::lcm(a, b);
}

}  // namespace

PointSpec find_fixed_point(const StoneSystem& X) {
  if (X.kind() == StoneSystem::Kind::Periodic) return {PointSpec::Kind::Periodic, X.period()};
  if (X.kind() != StoneSystem::Kind::Substitution) throw DomainError("full shift has no distinguished point");
  for (const auto& lr : X.legal_words(2)) {
    const long p = seed_power(X, lr[0], lr[1]);
    if (!p) continue;
    const std::string l = power_image(X, std::string(1, lr[0]), p);
    const std::string r = power_image(X, std::string(1, lr[1]), p);
    if (l.size() < 2 || r.size() < 2) continue;
    PointSpec x;
    x.kind = PointSpec::Kind::FixedPoint;
    x.left = lr[0];
    x.right = lr[1];
    x.power = p;
    return x;
  }
  throw DomainError("no growing two-sided fixed point of a power of the substitution");
}

Window evaluate_point(const StoneSystem& X, const InvolutionSpec* inv, const PointSpec& x, long lo, long hi) {
  if (hi < lo) throw DomainError("empty evaluation range");
  if (x.reflected && !inv) throw DomainError("reflected point needs an involution");
  // Base indices needed: m + shift, or offset - m - shift when reflected.
  long blo, bhi;
  if (x.reflected) {
    blo = inv->offset - (hi - 1) - x.shift;
    bhi = inv->offset - lo - x.shift + 1;
  } else {
    blo = lo + x.shift;
    bhi = hi + x.shift;
  }
  const long radius = std::max(std::abs(blo), std::abs(bhi)) + 1;
  if (radius > kMaxPointRadius) throw BudgetExceeded("point evaluation beyond oracle depth", kMaxPointRadius);

  std::string left, right;
  if (x.kind == PointSpec::Kind::Periodic) {
    if (x.word.empty()) throw DomainError("periodic point has an empty block");
    for (char c : x.word)
      if (X.alphabet().find(c) == std::string::npos)
        throw DomainError(std::string("letter '") + c + "' outside the alphabet");
  } else {
    if (X.kind() != StoneSystem::Kind::Substitution) throw DomainError("fixed point needs a substitution system");
    if (!X.is_legal(std::string{x.left, x.right}))
      throw DomainError(std::string("seed ") + x.left + "." + x.right + " is not legal");
    long p = x.power;
    if (p <= 0) p = seed_power(X, x.left, x.right);
    if (p <= 0) throw DomainError("seed is not periodic under the substitution");
    left = std::string(1, x.left);
    right = std::string(1, x.right);
    const std::string l1 = power_image(X, left, p);
    const std::string r1 = power_image(X, right, p);
    if (l1.back() != x.left || r1.front() != x.right)
      throw DomainError("seed is not fixed by the given power of the substitution");
    while (static_cast<long>(left.size()) < radius || static_cast<long>(right.size()) < radius) {
      std::string l2 = power_image(X, left, p);
      std::string r2 = power_image(X, right, p);
      if (l2.size() == left.size() && r2.size() == right.size())
        throw DomainError("fixed point does not grow under the substitution");
      left = std::move(l2);
      right = std::move(r2);
    }
  }
  auto base = [&](long m) -> char {
    if (x.kind == PointSpec::Kind::Periodic) {
      const long k = static_cast<long>(x.word.size());
      return x.word[static_cast<std::size_t>(((m % k) + k) % k)];
    }
    if (m >= 0) return right[static_cast<std::size_t>(m)];
    return left[left.size() - static_cast<std::size_t>(-m)];
  };
  Window out{lo, {}};
  out.letters.reserve(static_cast<std::size_t>(hi - lo));
  for (long m = lo; m < hi; ++m) {
    if (!x.reflected) {
      out.letters.push_back(base(m + x.shift));
    } else {
      const char c = base(inv->offset - m - x.shift);
      auto it = inv->letters.find(c);
      out.letters.push_back(it == inv->letters.end() ? c : it->second);
    }
  }
  return out;
}

Window evaluate_point(const StoneSystem& X, const PointSpec& x, long lo, long hi) {
  return evaluate_point(X, nullptr, x, lo, hi);
}

}  // namespace htlab::flow
