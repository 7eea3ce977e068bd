#include "gpfluct/symtest.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gpfluct/errors.hpp"

namespace gpfluct {

namespace {
constexpr double kE = std::numbers::e;
}

double tail_bound_F(double x) {
  if (x < 0) throw DomainError("F is defined for x >= 0");
  return 4.0 * std::exp((std::log1p(x) - x) / (kE * kE));
}

double tail_bound_F_inverse(double alpha) {
  if (!(alpha > 0 && alpha < 4)) throw DomainError("F^{-1} needs 0 < alpha < 4");
  double hi = 1.0;
  while (tail_bound_F(hi) >= alpha) hi *= 2;
  double lo = 0.0;
  while (hi - lo > 1e-10 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    (tail_bound_F(mid) >= alpha ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Threshold threshold(const TestConfig& config) {
  if (!(config.alpha > 0 && config.alpha < 1)) throw DomainError("alpha must lie in (0, 1)");
  if (!(config.A > 0)) throw DomainError("A must be positive");
  if (config.p < 1) throw DomainError("p must be positive");
  Threshold t;
  t.x_alpha = tail_bound_F_inverse(config.alpha);
  t.t_alpha = 4.0 * config.A * config.p * config.p / kE * t.x_alpha;
  return t;
}

namespace {

TestReport decide(double phi1, double phi2, long n, const TestConfig& config) {
  const Threshold th = threshold(config);
  TestReport r;
  r.n = n;
  r.phi_first = phi1;
  r.phi_second = phi2;
  r.Z_n = static_cast<double>(n) * std::abs(phi1 - phi2);
  r.x_alpha = th.x_alpha;
  r.t_alpha = th.t_alpha;
  r.reject = r.Z_n >= r.t_alpha;
  return r;
}

}  // namespace

TestReport run_test(std::span<const Point> first, std::span<const Point> second, const MmSpace& space,
                    const TestConfig& config) {
  if (first.size() != second.size()) {
    throw ShapeError("halves differ in size: " + std::to_string(first.size()) + " vs " + std::to_string(second.size()));
  }
  if (first.empty()) throw ShapeError("halves are empty");
  if (config.p != 2) throw DomainError("the default observable min(A, d) has p = 2");
  const ObservableSpec obs = CappedDistanceObservable{config.A};
  return decide(observable_on_points(space, first, obs), observable_on_points(space, second, obs),
                static_cast<long>(first.size()), config);
}

TestReport run_test_on_distances(const std::vector<std::vector<double>>& d, long n, const TestConfig& config) {
  if (n < 1) throw ShapeError("n must be positive");
  if (static_cast<long>(d.size()) != 2 * n) {
    throw ShapeError("expected a " + std::to_string(2 * n) + "-row distance matrix, got " + std::to_string(d.size()));
  }
  for (const auto& row : d)
    if (static_cast<long>(row.size()) != 2 * n) throw ShapeError("distance matrix is not square");
  if (config.p != 2) throw DomainError("the default observable min(A, d) has p = 2");
  auto half = [&](long offset) {
    long double total = 0;
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j) total += std::min(config.A, d[offset + i][offset + j]);
    return static_cast<double>(total / (static_cast<long double>(n) * n));
  };
  return decide(half(0), half(n), n, config);
}

TestReport simulate_test(const MmSpace& space, long n, const TestConfig& config, Rng& rng) {
  if (n < 1) throw ShapeError("n must be positive");
  const auto first = space.sample_many(rng, static_cast<std::size_t>(n));
  const auto second = space.sample_many(rng, static_cast<std::size_t>(n));
  return run_test(first, second, space, config);
}

double power_bound_raw(double sigma0, const TestConfig& config, long n, double K) {
  if (!(sigma0 > 0)) throw DomainError("sigma0 must be positive (the alternative is indistinguishable otherwise)");
  if (n < 1) throw DomainError("n must be positive");
  if (!(K > 0)) throw DomainError("K must be positive");
  const double ratio = config.A / sigma0;
  const double x = tail_bound_F_inverse(config.alpha);
  return (ratio * ratio * ratio + ratio * x) * K * config.p / std::sqrt(static_cast<double>(n));
}

double power_bound(double sigma0, const TestConfig& config, long n, double K) {
  return std::clamp(power_bound_raw(sigma0, config, n, K), 0.0, 1.0);
}

}  // namespace gpfluct
