#pragma once

#include <gmpxx.h>

#include <string>

namespace asymgreen {

// mpq_class keeps values canonical (lowest terms, positive denominator) after
// every arithmetic operation; construction from a pair needs canonicalize().
using Rational = mpq_class;

Rational make_rational(long num, long den = 1);
std::string to_string(const Rational& q);
double to_double(const Rational& q);

}  // namespace asymgreen
