#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "gpfluct/multigraph.hpp"
#include "gpfluct/polynomial.hpp"
#include "gpfluct/rational.hpp"
#include "gpfluct/setpart.hpp"
#include "gpfluct/valuer.hpp"

namespace gpfluct {

/// Which partitions a cumulant sweep visits. Dropped partitions have
/// vanishing cumulant (row-disconnected ones always, homogeneously vanishing
/// ones on compact homogeneous spaces), so every filter gives the same sum
/// where it applies.
enum class SweepFilter {
  all,
  row_connected,
  row_connected_nonvanishing,
};

/// A polynomial in n in the falling-factorial basis, plus bookkeeping.
/// When `exact` is false some coefficient involved a numerical value.
struct PolynomialResult {
  FactorialPolynomial poly;
  bool exact = true;
  std::vector<CanonicalKey> fallback_graphs;
  std::uint64_t partitions_visited = 0;
  std::uint64_t partitions_used = 0;
};

/// n^{pr} E[M_G(X_n)^r] = sum over partitions pi of the pr positions of
/// M_{G^r / pi} n^{(l(pi))}. Requires p*r <= 12.
PolynomialResult exact_moment_polynomial(const Multigraph& g, int r, MonomialValuer& valuer);
/// Same on the circle with a fresh engine.
PolynomialResult exact_moment_polynomial(const Multigraph& g, int r);

/// Joint cumulants kappa(pi) of the r row variables for a fixed graph,
/// with the row-subset moments memoized across partitions.
class CumulantCalculator {
 public:
  CumulantCalculator(const Multigraph& g, MonomialValuer& valuer);

  /// kappa(pi) = sum over partitions rho of the rows of mu(rho) times the
  /// product over blocks C of M_{G^|C| / pi|_C}, where pi|_C keeps the
  /// positions of the rows in C, renumbered in order. pi must cover a
  /// multiple of p positions, at most 12.
  Rational kappa(std::span<const std::uint8_t> rgs);
  Rational kappa(const SetPartition& pi) { return kappa(pi.rgs()); }

  /// M_{G^r / pi}, with 0 for contractions that create a loop.
  Rational joint_moment(std::span<const std::uint8_t> rgs);

  int p() const { return g_.vertex_count(); }
  bool exact() const { return exact_; }
  std::vector<CanonicalKey> fallback_graphs() const;

 private:
  Rational moment_of_rows(std::span<const std::uint8_t> rgs, int rows, unsigned mask);

  Multigraph g_;
  MonomialValuer& valuer_;
  std::vector<Multigraph> powers_;
  std::unordered_map<std::string, Rational> memo_;
  bool exact_ = true;
  std::vector<CanonicalKey> fallbacks_;
};

/// One-off kappa(pi) on the given valuer. layout.p must equal the vertex
/// count of g and layout.total() the size of pi.
Rational kappa_pi(const Multigraph& g, const SetPartition& pi, const RowLayout& layout,
                  MonomialValuer& valuer);

/// kappa^(r)(S_n) for S_n = n^p M_G(X_n), as sum over pi of
/// kappa(pi) n^{(l(pi))}. Requires p*r <= 12 and r <= 4. With `min_level`
/// only partitions with at least that many blocks are swept, which is
/// enough for the coefficients of n^d with d >= min_level.
PolynomialResult exact_cumulant_polynomial(const Multigraph& g, int r, MonomialValuer& valuer,
                                           SweepFilter filter = SweepFilter::row_connected,
                                           int min_level = 0);
PolynomialResult exact_cumulant_polynomial(const Multigraph& g, int r,
                                           SweepFilter filter = SweepFilter::row_connected);

/// Classical moment-to-cumulant combination of polynomials m_1..m_r
/// (given in the falling basis, combined in the monomial basis). r <= 4.
StandardPolynomial cumulant_from_moments(const std::vector<StandardPolynomial>& moments, int r);

enum class Regime { generic, homogeneous_singular };
std::string to_string(Regime regime);

struct LimitReport {
  /// (1/p^2) sum_{k,l} kappa(pi_{k,l}).
  Rational sigma_sq = 0;
  /// (1/p^4) sum c kappa(pi_{i,j,k,l}), c = 3 if j != k else 1; needs 3p <= 12.
  std::optional<Rational> L;
  /// Coefficient of n^{2(p-1)} in kappa^(2)(S_n).
  Rational sigma_hom_sq = 0;
  /// a_r for r = 2..r_max; absent when sigma_hom_sq <= 0.
  std::optional<std::vector<double>> a_r;
  /// Exact leading coefficients v_{(p-1)r} for r = 2..r_max.
  std::vector<Rational> leading_coefficients;
  Regime regime = Regime::generic;
  bool exact = true;
};

/// Limit parameters of the fluctuations of M_G. Requires 2 <= r_max <= 4
/// and p * r_max <= 12.
LimitReport limit_report(const Multigraph& g, int r_max, MonomialValuer& valuer);
LimitReport limit_report(const Multigraph& g, int r_max);

/// Generic dependency-graph bound n^p (2 p^2 n^{p-1})^{r-1} r^{r-2} A^r.
Rational generic_cumulant_bound(int p, int r, long long n, const Rational& A = 1);
/// Homogeneous bound (A p^2)^r (2r)^{r-1} n^{(p-1)r}.
Rational homogeneous_cumulant_bound(int p, int r, long long n, const Rational& A = 1);

struct BoundCheckRow {
  long long n = 0;
  Rational cumulant = 0;
  Rational generic_bound = 0;
  Rational homogeneous_bound = 0;
  bool holds = true;
};

/// |kappa^(r)(S_n)| against both bounds (A = 1) at each n. r = 1 is
/// trivially accepted.
std::vector<BoundCheckRow> cumulant_bound_table(const Multigraph& g, int r,
                                                const std::vector<long long>& n_values,
                                                MonomialValuer& valuer);
bool cumulant_bound_check(const Multigraph& g, int r, const std::vector<long long>& n_values,
                          MonomialValuer& valuer);
bool cumulant_bound_check(const Multigraph& g, int r, const std::vector<long long>& n_values);

}  // namespace gpfluct
