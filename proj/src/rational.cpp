#include "gpfluct/rational.hpp"

#include "gpfluct/errors.hpp"

#include <mutex>
#include <vector>

namespace gpfluct {

std::string to_string(const Rational& value) {
  Rational q = value;
  q.canonicalize();
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_rational(std::string_view text) {
  Rational q;
  std::string s(text);
  if (s.empty() || q.set_str(s, 10) != 0) {
    throw ParseError("not a rational number: '" + s + "'");
  }
  if (q.get_den() == 0) throw ParseError("zero denominator: '" + s + "'");
  q.canonicalize();
  return q;
}

double to_double(const Rational& q) { return q.get_d(); }

namespace {

// Triangular tables grown on demand; n stays small (< 64) in practice.
struct StirlingTables {
  std::vector<std::vector<Rational>> first{{Rational(1)}};
  std::vector<std::vector<Rational>> second{{Rational(1)}};

  void grow(int n) {
    while (static_cast<int>(first.size()) <= n) {
      const int m = static_cast<int>(first.size());
      std::vector<Rational> f(m + 1), s(m + 1);
      for (int k = 0; k <= m; ++k) {
        const Rational f_left = k >= 1 ? first[m - 1][k - 1] : Rational(0);
        const Rational f_same = k <= m - 1 ? first[m - 1][k] : Rational(0);
        f[k] = f_left - Rational(m - 1) * f_same;
        const Rational s_left = k >= 1 ? second[m - 1][k - 1] : Rational(0);
        const Rational s_same = k <= m - 1 ? second[m - 1][k] : Rational(0);
        s[k] = s_left + Rational(k) * s_same;
      }
      first.push_back(std::move(f));
      second.push_back(std::move(s));
    }
  }
};

StirlingTables& tables() {
  static StirlingTables t;
  return t;
}

std::mutex& tables_mutex() {
  static std::mutex mu;
  return mu;
}

}  // namespace

Rational stirling_first(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  std::lock_guard lock(tables_mutex());
  tables().grow(n);
  return tables().first[n][k];
}

Rational stirling_second(int n, int k) {
  if (n < 0 || k < 0 || k > n) return 0;
  std::lock_guard lock(tables_mutex());
  tables().grow(n);
  return tables().second[n][k];
}

Rational binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(out);
}

Rational factorial(int n) {
  if (n < 0) throw DomainError("factorial of a negative number");
  mpz_class out;
  mpz_fac_ui(out.get_mpz_t(), static_cast<unsigned long>(n));
  return Rational(out);
}

}  // namespace gpfluct
