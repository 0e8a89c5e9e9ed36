#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace liebox {

// Exact arbitrary-precision rational; all symbolic modules compute in it.
using Rational = mpq_class;

// Accepts "a", "-a", "a/b" (canonicalized). Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);

double to_double(const Rational& q);

// Exact conversion of a finite double (every double is a dyadic rational).
Rational from_double(double v);

}  // namespace liebox
