#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace htlab {

using Rational = mpq_class;

// Accepts "3/4", "-2", "0.375" is rejected; the result is canonical.
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

bool is_dyadic(const Rational& q);
bool is_power_of_two(const Rational& q);  // 2^k for some integer k
Rational midpoint(const Rational& a, const Rational& b);

}  // namespace htlab
