#pragma once

#include <cstdint>
#include <mutex>
#include <optional>
#include <unordered_map>
#include <vector>

#include "gpfluct/multigraph.hpp"
#include "gpfluct/polynomial.hpp"
#include "gpfluct/rational.hpp"
#include "gpfluct/valuer.hpp"

namespace gpfluct {

/// Linear combination of multigraphs; terms with isomorphic graphs are merged
/// and zero coefficients dropped.
class GraphCombination {
 public:
  struct Term {
    Rational coefficient;
    Multigraph graph;
  };

  void add(const Rational& coefficient, Multigraph graph);
  std::vector<Term> terms() const;
  std::size_t size() const { return terms_.size(); }
  /// Coefficient of the class of g (0 if absent).
  Rational coefficient_of(const Multigraph& g) const;

 private:
  std::unordered_map<CanonicalKey, Term, CanonicalKeyHash> terms_;
};

/// Integral over the circle of d(x,y)^a d(x,z)^b dx as a polynomial in
/// D = d(y,z), assembled by integrating the four linear pieces exactly.
StandardPolynomial degree2_polynomial(Multiplicity a, Multiplicity b);

/// 1 / (2^a (a+1)): the integral of d(x,y)^a over x.
Rational pendant_coefficient(Multiplicity a);

/// x with a single distinct neighbour y (a edges): (1/(2^a(a+1))) * M(g - x).
/// Returns nullopt when x does not qualify.
std::optional<GraphCombination> pendant_rule(const Multigraph& g, int x);

/// x with exactly two distinct neighbours y, z: expands M(g) over
/// M((g - x) + (y,z)^j). Falls back to the pendant rule if x has one neighbour.
std::optional<GraphCombination> degree2_rule(const Multigraph& g, int x);

/// x with exactly three distinct neighbours, each joined by a single edge:
/// uses the vanishing of the centred triple Fourier product.
std::optional<GraphCombination> degree3_fourier_rule(const Multigraph& g, int x);

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
};

/// Numerical value of M_G on the circle by piecewise Gauss-Legendre
/// integration, one vertex pinned at 0. Cuts follow the kinks of the circle
/// distance, so each panel integrates a polynomial; panels are halved until
/// two rule orders agree within `tol`. Requires a loop-free graph with at
/// most 6 vertices; throws NumericError otherwise or on non-convergence.
QuadratureResult quadrature_fallback(const Multigraph& g, double tol);

inline constexpr int kMaxFallbackVertices = 6;

/// Exact evaluation of M_G on the circle R/Z by recursive graph reduction.
///
/// Rules, in order: isolated vertices, component and cut-vertex
/// factorization, pendant, degree-2 and degree-3 vertices. Graphs admitting
/// none are integrated numerically and the result is flagged inexact. All
/// values are memoized by canonical key; the memo is shared across calls and
/// guarded by a mutex.
class CircleEngine : public MonomialValuer {
 public:
  struct Options {
    double fallback_tolerance = 1e-7;
    /// When set, every reduction step picks uniformly among all applicable
    /// rules instead of the fixed priority order.
    std::optional<std::uint64_t> shuffle_seed;
  };

  CircleEngine() = default;
  explicit CircleEngine(Options options);

  EvaluationResult evaluate(const Multigraph& g) override;
  bool homogeneous_hint() const override { return true; }

  std::size_t memo_size() const;
  std::uint64_t fallback_count() const;

 private:
  struct Value {
    Rational exact = 0;
    double approx = 0.0;
    bool is_exact = true;
    std::vector<CanonicalKey> fallbacks;
  };

  Value eval(const Multigraph& g);
  Value reduce(const Multigraph& g, const CanonicalKey& key);
  Value combine(const GraphCombination& combination);
  std::optional<GraphCombination> pick_vertex_rule(const Multigraph& g);

  Options options_;
  mutable std::mutex mu_;
  std::unordered_map<CanonicalKey, Value, CanonicalKeyHash> memo_;
  std::uint64_t rng_state_ = 0;
  std::uint64_t fallback_count_ = 0;
};

/// Value of M_G on the circle with a fresh engine (no shared memo).
EvaluationResult evaluate_on_circle(const Multigraph& g);

}  // namespace gpfluct
