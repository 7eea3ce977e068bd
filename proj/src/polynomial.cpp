#include "gpfluct/polynomial.hpp"

#include <algorithm>

#include "gpfluct/errors.hpp"
#include "gpfluct/setpart.hpp"

namespace gpfluct {

StandardPolynomial::StandardPolynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
  trim();
}

StandardPolynomial StandardPolynomial::constant(const Rational& c) {
  return StandardPolynomial(std::vector<Rational>{c});
}

StandardPolynomial StandardPolynomial::monomial(int degree, const Rational& c) {
  if (degree < 0) throw DomainError("negative monomial degree");
  std::vector<Rational> v(degree + 1);
  v[degree] = c;
  return StandardPolynomial(std::move(v));
}

StandardPolynomial StandardPolynomial::falling_factorial(int l) {
  if (l < 0) throw DomainError("falling factorial needs l >= 0");
  std::vector<Rational> v(l + 1);
  for (int k = 0; k <= l; ++k) v[k] = stirling_first(l, k);
  return StandardPolynomial(std::move(v));
}

void StandardPolynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rational StandardPolynomial::coefficient(int d) const {
  if (d < 0 || d > degree()) return 0;
  return coeffs_[d];
}

Rational StandardPolynomial::operator()(const Rational& x) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

double StandardPolynomial::evaluate(double x) const {
  double acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + it->get_d();
  return acc;
}

StandardPolynomial& StandardPolynomial::operator+=(const StandardPolynomial& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  trim();
  return *this;
}

StandardPolynomial& StandardPolynomial::operator-=(const StandardPolynomial& o) {
  if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  trim();
  return *this;
}

StandardPolynomial& StandardPolynomial::operator*=(const Rational& c) {
  for (auto& x : coeffs_) x *= c;
  trim();
  return *this;
}

StandardPolynomial operator*(const StandardPolynomial& a, const StandardPolynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> out(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return StandardPolynomial(std::move(out));
}

StandardPolynomial StandardPolynomial::compose(const StandardPolynomial& inner) const {
  StandardPolynomial acc;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
    acc = acc * inner;
    acc += constant(*it);
  }
  return acc;
}

StandardPolynomial StandardPolynomial::antiderivative() const {
  std::vector<Rational> out(coeffs_.size() + 1);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i + 1] = coeffs_[i] / Rational(static_cast<long>(i + 1));
  return StandardPolynomial(std::move(out));
}

FactorialPolynomial StandardPolynomial::to_factorial() const {
  FactorialPolynomial out;
  for (int k = 0; k <= degree(); ++k) {
    if (coeffs_[k] == 0) continue;
    for (int l = 0; l <= k; ++l) {
      const Rational s = stirling_second(k, l);
      if (s != 0) out.add(l, coeffs_[k] * s);
    }
  }
  return out;
}

namespace {

// One signed term "c var^d" in the "num var^d/den" layout.
std::string format_term(const Rational& c, int d, const std::string& power, bool first) {
  std::string out;
  const bool negative = c < 0;
  if (first) {
    if (negative) out += "-";
  } else {
    out += negative ? " - " : " + ";
  }
  const mpz_class num = abs(c.get_num());
  const mpz_class& den = c.get_den();
  if (d == 0) {
    out += num.get_str();
  } else {
    if (num != 1) out += num.get_str();
    out += power;
  }
  if (den != 1) out += "/" + den.get_str();
  return out;
}

}  // namespace

std::string StandardPolynomial::to_string(const std::string& var) const {
  if (is_zero()) return "0";
  std::string out;
  bool first = true;
  for (int d = degree(); d >= 0; --d) {
    if (coeffs_[d] == 0) continue;
    const std::string power = d == 1 ? var : var + "^" + std::to_string(d);
    out += format_term(coeffs_[d], d, power, first);
    first = false;
  }
  return out;
}

void FactorialPolynomial::add(int level, const Rational& c) {
  if (level < 0) throw DomainError("negative falling-factorial level");
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(level, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Rational FactorialPolynomial::coefficient(int level) const {
  auto it = terms_.find(level);
  return it == terms_.end() ? Rational(0) : it->second;
}

Rational FactorialPolynomial::operator()(long long n) const {
  Rational acc = 0;
  for (const auto& [level, c] : terms_) acc += c * Rational(falling_factorial(n, level));
  return acc;
}

FactorialPolynomial& FactorialPolynomial::operator+=(const FactorialPolynomial& o) {
  for (const auto& [level, c] : o.terms_) add(level, c);
  return *this;
}

StandardPolynomial FactorialPolynomial::to_standard() const {
  StandardPolynomial out;
  for (const auto& [level, c] : terms_) out += StandardPolynomial::falling_factorial(level) * c;
  return out;
}

std::string FactorialPolynomial::to_string(const std::string& var) const {
  if (is_zero()) return "0";
  std::string out;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const std::string power = "(" + var + ")_" + std::to_string(it->first);
    out += format_term(it->second, it->first, power, first);
    first = false;
  }
  return out;
}

}  // namespace gpfluct
