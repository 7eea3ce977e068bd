#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace gpfluct {

/// Exact rational number. Arithmetic results are canonical; the two-argument
/// constructor is not, so call canonicalize() after it when the inputs share factors.
using Rational = mpq_class;

/// "num/den", or just "num" when the denominator is 1.
std::string to_string(const Rational& q);

/// Parses "num/den" or "num"; the result is canonicalized.
Rational parse_rational(std::string_view text);

double to_double(const Rational& q);

/// Signed Stirling numbers of the first kind s(n, k).
Rational stirling_first(int n, int k);

/// Stirling numbers of the second kind S(n, k).
Rational stirling_second(int n, int k);

Rational binomial(int n, int k);

Rational factorial(int n);

}  // namespace gpfluct
