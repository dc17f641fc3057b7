#include "htlab/rational.hpp"

#include "htlab/error.hpp"

namespace htlab {

Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty())
    throw DomainError("empty rational");
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  bool slash = false, digit = false;
  for (std::size_t k = i; k < s.size(); ++k) {
    if (s[k] == '/' && !slash && digit && k + 1 < s.size()) {
      slash = true;
      digit = false;
    } else if (s[k] >= '0' && s[k] <= '9') {
      digit = true;
    } else {
      throw DomainError("malformed rational \"" + s + "\"");
    }
  }
  if (!digit)
    throw DomainError("malformed rational \"" + s + "\"");
  if (s[0] == '+')
    s.erase(0, 1);
  Rational q;
  if (q.set_str(s, 10) != 0)
    throw DomainError("malformed rational \"" + s + "\"");
  if (q.get_den() == 0)
    throw DomainError("zero denominator in \"" + s + "\"");
  q.canonicalize();
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(10); }

namespace {

bool is_pow2(const mpz_class& z) { return z > 0 && mpz_popcount(z.get_mpz_t()) == 1; }

}  // namespace

bool is_dyadic(const Rational& q) { return is_pow2(q.get_den()); }

bool is_power_of_two(const Rational& q) {
  return q > 0 && is_pow2(q.get_num()) && is_pow2(q.get_den());
}

Rational midpoint(const Rational& a, const Rational& b) {
  Rational m = (a + b) / 2;
  m.canonicalize();
  return m;
}

}  // namespace htlab
