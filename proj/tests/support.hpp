#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "gpfluct/multigraph.hpp"
#include "gpfluct/rational.hpp"
#include "gpfluct/valuer.hpp"

namespace testsupport {

using gpfluct::Multigraph;
using gpfluct::Rational;

// Exact M_G on a finite space with rational distances and weights, by
// summing over all assignments of vertices to points.
class FiniteExactValuer : public gpfluct::MonomialValuer {
 public:
  FiniteExactValuer(std::vector<std::vector<Rational>> d, std::vector<Rational> w) : d_(std::move(d)), w_(std::move(w)) {}

  gpfluct::EvaluationResult evaluate(const Multigraph& g) override {
    const int k = g.vertex_count();
    const int m = static_cast<int>(w_.size());
    const auto edges = g.edges();
    std::vector<int> a(k, 0);
    Rational total = 0;
    for (;;) {
      Rational term = 1;
      for (int v = 0; v < k; ++v) term *= w_[a[v]];
      for (const auto& e : edges) {
        Rational dist = d_[a[e.u]][a[e.v]];
        if (dist > 1) dist = 1;
        for (gpfluct::Multiplicity i = 0; i < e.multiplicity; ++i) term *= dist;
        if (term == 0) break;
      }
      total += term;
      int v = k - 1;
      while (v >= 0 && ++a[v] == m) a[v--] = 0;
      if (v < 0) break;
    }
    return gpfluct::EvaluationResult::from_exact(total);
  }

 private:
  std::vector<std::vector<Rational>> d_;
  std::vector<Rational> w_;
};

// Three points on a line at 0, 1/3, 1 with weights 1/2, 1/3, 1/6: not
// homogeneous, so the generic limit parameters are nonzero.
inline FiniteExactValuer skewed_three_point_space() {
  const Rational a(1, 3), b(2, 3);
  return FiniteExactValuer({{0, a, 1}, {a, 0, b}, {1, b, 0}}, {Rational(1, 2), Rational(1, 3), Rational(1, 6)});
}

// Random loop-free multigraph on k vertices with up to max_mult per pair.
inline Multigraph random_graph(std::mt19937_64& rng, int k, double density, int max_mult) {
  std::uniform_real_distribution<double> u(0, 1);
  std::uniform_int_distribution<int> mult(1, max_mult);
  Multigraph g(k);
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b)
      if (u(rng) < density) g.add_edges(a, b, static_cast<gpfluct::Multiplicity>(mult(rng)));
  return g;
}

inline std::vector<int> random_permutation(std::mt19937_64& rng, int k) {
  std::vector<int> perm(k);
  for (int i = 0; i < k; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

// Adaptive Simpson on [a, b] with absolute tolerance eps.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double eps,
                               int depth = 40) {
  std::function<double(double, double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, double whole, double tol, int d) {
        const double mid = 0.5 * (lo + hi);
        const double lm = 0.5 * (lo + mid), rm = 0.5 * (mid + hi);
        const double flm = f(lm), frm = f(rm);
        const double left = (mid - lo) / 6 * (flo + 4 * flm + fmid);
        const double right = (hi - mid) / 6 * (fmid + 4 * frm + fhi);
        if (d <= 0 || std::abs(left + right - whole) <= 15 * tol) return left + right + (left + right - whole) / 15;
        return rec(lo, mid, flo, flm, fmid, left, tol / 2, d - 1) + rec(mid, hi, fmid, frm, fhi, right, tol / 2, d - 1);
      };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), eps, depth);
}

// Integral over [0, 1] split at the given kink points.
inline double integrate_with_kinks(const std::function<double(double)>& f, std::vector<double> kinks, double eps) {
  kinks.push_back(0);
  kinks.push_back(1);
  for (double& k : kinks) k = k - std::floor(k);
  kinks.push_back(1);
  std::sort(kinks.begin(), kinks.end());
  double total = 0;
  for (std::size_t i = 0; i + 1 < kinks.size(); ++i)
    if (kinks[i + 1] > kinks[i]) total += adaptive_simpson(f, kinks[i], kinks[i + 1], eps);
  return total;
}

inline double circle_dist(double s, double t) {
  double d = std::abs(s - t);
  d -= std::floor(d);
  return std::min(d, 1 - d);
}

}  // namespace testsupport
