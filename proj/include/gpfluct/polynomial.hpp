#pragma once

#include <map>
#include <string>
#include <vector>

#include "gpfluct/rational.hpp"

namespace gpfluct {

class FactorialPolynomial;

/// Polynomial with exact rational coefficients in the monomial basis
/// c0 + c1 x + ... + cd x^d. Trailing zeros are always trimmed.
class StandardPolynomial {
 public:
  StandardPolynomial() = default;
  explicit StandardPolynomial(std::vector<Rational> coeffs);
  static StandardPolynomial constant(const Rational& c);
  /// c * x^d
  static StandardPolynomial monomial(int degree, const Rational& c = 1);
  /// x (x-1) ... (x-l+1)
  static StandardPolynomial falling_factorial(int l);

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  Rational coefficient(int d) const;
  const std::vector<Rational>& coefficients() const { return coeffs_; }

  Rational operator()(const Rational& x) const;
  double evaluate(double x) const;

  StandardPolynomial& operator+=(const StandardPolynomial& o);
  StandardPolynomial& operator-=(const StandardPolynomial& o);
  StandardPolynomial& operator*=(const Rational& c);
  friend StandardPolynomial operator+(StandardPolynomial a, const StandardPolynomial& b) { return a += b; }
  friend StandardPolynomial operator-(StandardPolynomial a, const StandardPolynomial& b) { return a -= b; }
  friend StandardPolynomial operator*(StandardPolynomial a, const Rational& c) { return a *= c; }
  friend StandardPolynomial operator*(const StandardPolynomial& a, const StandardPolynomial& b);
  friend bool operator==(const StandardPolynomial&, const StandardPolynomial&) = default;

  /// p(q(x))
  StandardPolynomial compose(const StandardPolynomial& inner) const;
  /// Antiderivative vanishing at 0.
  StandardPolynomial antiderivative() const;

  FactorialPolynomial to_factorial() const;

  /// Human form such as "n^3/16 - 5n^2/48 + n/24", highest degree first.
  std::string to_string(const std::string& var = "n") const;

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

/// Polynomial in the falling-factorial basis: sum over levels l of c_l x^{(l)},
/// where x^{(l)} = x (x-1) ... (x-l+1).
class FactorialPolynomial {
 public:
  FactorialPolynomial() = default;

  void add(int level, const Rational& c);
  Rational coefficient(int level) const;
  const std::map<int, Rational>& terms() const { return terms_; }
  int degree() const { return terms_.empty() ? -1 : terms_.rbegin()->first; }
  bool is_zero() const { return terms_.empty(); }

  Rational operator()(long long n) const;

  FactorialPolynomial& operator+=(const FactorialPolynomial& o);
  friend bool operator==(const FactorialPolynomial&, const FactorialPolynomial&) = default;

  StandardPolynomial to_standard() const;

  /// Human form such as "(n)_3/16 + (n)_2/12".
  std::string to_string(const std::string& var = "n") const;

 private:
  std::map<int, Rational> terms_;
};

}  // namespace gpfluct
