#include "gpfluct/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "gpfluct/errors.hpp"
#include "gpfluct/parallel.hpp"

namespace gpfluct {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double ipow(double x, Multiplicity e) {
  double out = 1;
  for (Multiplicity i = 0; i < e; ++i) out *= x;
  return out;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

void require_tuple_budget(long n, int p) {
  if (std::pow(static_cast<double>(n), p) > kMaxTupleCount) {
    throw BoundError("n^p = " + std::to_string(n) + "^" + std::to_string(p) + " exceeds the tuple budget 1e8");
  }
}

// Star shape of a loop-free graph: centre and (leaf, multiplicity) pairs.
struct Star {
  int center = -1;
  std::vector<Multiplicity> leaves;
};

std::optional<Star> as_star(const Multigraph& g) {
  const auto edges = g.edges();
  Star star;
  if (edges.empty()) return star;
  if (edges.size() == 1) {
    star.center = edges[0].u;
    star.leaves.push_back(edges[0].multiplicity);
    return star;
  }
  // The centre must lie on every edge.
  for (int c : {edges[0].u, edges[0].v}) {
    bool ok = true;
    for (const auto& e : edges) ok = ok && (e.u == c || e.v == c);
    if (!ok) continue;
    star.center = c;
    for (const auto& e : edges) star.leaves.push_back(e.multiplicity);
    return star;
  }
  return std::nullopt;
}

// Sum over tuples of prod over edges of w(i_u, i_v), recursively.
double tuple_sum(int p, long n, const std::function<double(std::span<const long>)>& f) {
  std::vector<long> idx(p, 0);
  double total = 0;
  for (;;) {
    total += f(idx);
    int k = p - 1;
    while (k >= 0 && ++idx[k] == n) idx[k--] = 0;
    if (k < 0) break;
  }
  return total;
}

double monomial_on_points(const MmSpace& space, std::span<const Point> pts, const Multigraph& g) {
  if (g.has_loop()) return 0.0;
  const long n = static_cast<long>(pts.size());
  const double dn = static_cast<double>(n);
  if (auto star = as_star(g)) {
    if (star->leaves.empty()) return 1.0;
    if (star->leaves.size() == 1 && star->leaves[0] == 1) {
      if (auto fast = space.capped_pair_distance_sum(pts, 1.0)) return static_cast<double>(*fast / (dn * dn));
    }
    const std::size_t L = star->leaves.size();
    std::vector<double> row(L);
    long double total = 0;
    for (long i = 0; i < n; ++i) {
      std::fill(row.begin(), row.end(), 0.0);
      for (long j = 0; j < n; ++j) {
        const double d = std::min(1.0, space.distance(pts[i], pts[j]));
        for (std::size_t l = 0; l < L; ++l) row[l] += ipow(d, star->leaves[l]);
      }
      double prod = 1;
      for (std::size_t l = 0; l < L; ++l) prod *= row[l] / dn;
      total += prod;
    }
    return static_cast<double>(total / dn);
  }

  // Drop isolated vertices (each contributes a factor n / n).
  std::vector<int> keep;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (g.distinct_neighbors(v) > 0) keep.push_back(v);
  const Multigraph h = g.induced(keep);
  const int p = h.vertex_count();
  require_tuple_budget(n, p);
  std::vector<double> D(static_cast<std::size_t>(n * n));
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) D[i * n + j] = std::min(1.0, space.distance(pts[i], pts[j]));
  const auto edges = h.edges();
  const double total = tuple_sum(p, n, [&](std::span<const long> idx) {
    double f = 1;
    for (const auto& e : edges) f *= ipow(D[idx[e.u] * n + idx[e.v]], e.multiplicity);
    return f;
  });
  return total / std::pow(dn, p);
}

double custom_on_points(const MmSpace& space, std::span<const Point> pts, const CustomObservable& obs) {
  if (obs.p < 1) throw ShapeError("custom observable needs p >= 1");
  if (!obs.phi) throw ValidationError("custom observable has no function");
  const long n = static_cast<long>(pts.size());
  require_tuple_budget(n, obs.p);
  const int p = obs.p;
  std::vector<double> dist(static_cast<std::size_t>(p * (p - 1) / 2));
  const double total = tuple_sum(p, n, [&](std::span<const long> idx) {
    std::size_t k = 0;
    for (int a = 0; a < p; ++a)
      for (int b = a + 1; b < p; ++b) dist[k++] = space.distance(pts[idx[a]], pts[idx[b]]);
    const double v = obs.phi(dist);
    if (!(std::abs(v) <= obs.sup_bound * (1 + 1e-12))) {
      throw ValidationError("custom observable value " + format_double(v) + " exceeds its bound " +
                            format_double(obs.sup_bound));
    }
    return v;
  });
  return total / std::pow(static_cast<double>(n), p);
}

double capped_on_points(const MmSpace& space, std::span<const Point> pts, double cap) {
  if (!(cap > 0)) throw DomainError("cap must be positive");
  const double dn = static_cast<double>(pts.size());
  if (auto fast = space.capped_pair_distance_sum(pts, cap)) return static_cast<double>(*fast / (dn * dn));
  long double total = 0;
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) total += std::min(cap, space.distance(pts[i], pts[j]));
  return static_cast<double>(2 * total / (dn * dn));
}

}  // namespace

int observable_degree(const ObservableSpec& obs) {
  return std::visit(overloaded{[](const MonomialObservable& m) { return m.graph.vertex_count(); },
                               [](const CustomObservable& c) { return c.p; },
                               [](const CappedDistanceObservable&) { return 2; }},
                    obs);
}

double observable_sup_bound(const ObservableSpec& obs) {
  return std::visit(overloaded{[](const MonomialObservable&) { return 1.0; },
                               [](const CustomObservable& c) { return c.sup_bound; },
                               [](const CappedDistanceObservable& c) { return c.cap; }},
                    obs);
}

std::string describe(const ObservableSpec& obs) {
  return std::visit(overloaded{[](const MonomialObservable& m) {
                                 std::string s = "monomial(k=" + std::to_string(m.graph.vertex_count()) + ";";
                                 for (const auto& e : m.graph.edges()) {
                                   s += " " + std::to_string(e.u + 1) + "-" + std::to_string(e.v + 1);
                                   if (e.multiplicity > 1) s += "^" + std::to_string(e.multiplicity);
                                 }
                                 return s + ")";
                               },
                               [](const CustomObservable& c) { return c.description; },
                               [](const CappedDistanceObservable& c) { return "min(" + format_double(c.cap) + ",d)"; }},
                    obs);
}

double observable_on_points(const MmSpace& space, std::span<const Point> points, const ObservableSpec& obs) {
  if (points.empty()) throw ShapeError("need at least one point");
  return std::visit(overloaded{[&](const MonomialObservable& m) { return monomial_on_points(space, points, m.graph); },
                               [&](const CustomObservable& c) { return custom_on_points(space, points, c); },
                               [&](const CappedDistanceObservable& c) { return capped_on_points(space, points, c.cap); }},
                    obs);
}

double evaluate_observable(const MmSpace& space, long n, const ObservableSpec& obs, Rng& rng) {
  if (n < 1) throw DomainError("n must be at least 1");
  const auto pts = space.sample_many(rng, static_cast<std::size_t>(n));
  return observable_on_points(space, pts, obs);
}

ReplicateSample replicate(const MmSpace& space, long n, const ObservableSpec& obs, std::size_t R, std::uint64_t seed) {
  if (R < 1) throw DomainError("need at least one replicate");
  ReplicateSample out;
  out.values.assign(R, 0.0);
  out.n = n;
  out.seed = seed;
  out.space = space.name();
  out.observable = describe(obs);
  parallel_for(R, [&](std::size_t i) {
    Rng rng(derive_seed(seed, i));
    out.values[i] = evaluate_observable(space, n, obs, rng);
  });
  return out;
}

std::string to_csv(const ReplicateSample& sample) {
  std::ostringstream os;
  os << "# space=" << sample.space << "\n# observable=" << sample.observable << "\n# n=" << sample.n
     << "\n# seed=" << sample.seed << "\n# replicates=" << sample.values.size() << "\nvalue\n";
  os.precision(17);
  for (double v : sample.values) os << v << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------

SampleMoments sample_moments(std::span<const double> values) {
  SampleMoments m;
  m.count = values.size();
  if (values.empty()) return m;
  long double sum = 0;
  for (double v : values) sum += v;
  const long double mean = sum / values.size();
  long double ss = 0;
  for (double v : values) ss += (v - mean) * (v - mean);
  m.mean = static_cast<double>(mean);
  m.variance = values.size() > 1 ? static_cast<double>(ss / (values.size() - 1)) : 0.0;
  return m;
}

std::vector<double> empirical_cumulants(std::span<const double> values, int r_max) {
  if (r_max < 1 || r_max > 4) throw BoundError("empirical cumulants support r_max = 1..4");
  if (values.empty()) throw DomainError("empty sample");
  const long double N = values.size();
  long double sum = 0;
  for (double v : values) sum += v;
  const long double mean = sum / N;
  long double m2 = 0, m3 = 0, m4 = 0;
  for (double v : values) {
    const long double c = v - mean;
    m2 += c * c;
    m3 += c * c * c;
    m4 += c * c * c * c;
  }
  m2 /= N;
  m3 /= N;
  m4 /= N;
  const std::vector<double> all{static_cast<double>(mean), static_cast<double>(m2), static_cast<double>(m3),
                                static_cast<double>(m4 - 3 * m2 * m2)};
  return {all.begin(), all.begin() + r_max};
}

// ---------------------------------------------------------------------------

namespace {

// Value of phi on p given points (the full tuple average with n = p would
// include repeated indices, so phi is applied to the tuple directly).
double phi_of_tuple(const MmSpace& space, std::span<const Point> pts, const ObservableSpec& obs) {
  const int p = static_cast<int>(pts.size());
  return std::visit(overloaded{[&](const MonomialObservable& m) {
                                 double f = 1;
                                 for (const auto& e : m.graph.edges())
                                   f *= ipow(std::min(1.0, space.distance(pts[e.u], pts[e.v])), e.multiplicity);
                                 return f;
                               },
                               [&](const CustomObservable& c) {
                                 std::vector<double> dist;
                                 for (int a = 0; a < p; ++a)
                                   for (int b = a + 1; b < p; ++b) dist.push_back(space.distance(pts[a], pts[b]));
                                 return c.phi(dist);
                               },
                               [&](const CappedDistanceObservable& c) {
                                 return std::min(c.cap, space.distance(pts[0], pts[1]));
                               }},
                    obs);
}

// Accumulates shifted products for joint cumulants of up to three variables.
struct JointAccumulator {
  std::size_t count = 0;
  double shift[3] = {0, 0, 0};
  long double s[3] = {0, 0, 0};
  long double s01 = 0, s02 = 0, s12 = 0, s012 = 0;

  void add(double a, double b, double c) {
    if (count == 0) {
      shift[0] = a;
      shift[1] = b;
      shift[2] = c;
    }
    const long double x = a - shift[0], y = b - shift[1], z = c - shift[2];
    ++count;
    s[0] += x;
    s[1] += y;
    s[2] += z;
    s01 += x * y;
    s02 += x * z;
    s12 += y * z;
    s012 += x * y * z;
  }
  double covariance01() const {
    const long double N = count;
    return static_cast<double>(s01 / N - (s[0] / N) * (s[1] / N));
  }
  double cumulant012() const {
    const long double N = count;
    const long double e0 = s[0] / N, e1 = s[1] / N, e2 = s[2] / N;
    return static_cast<double>(s012 / N - (s01 / N) * e2 - (s02 / N) * e1 - (s12 / N) * e0 + 2 * e0 * e1 * e2);
  }
};

}  // namespace

GenericLimitEstimate estimate_generic_limits(const MmSpace& space, const ObservableSpec& obs, int batches,
                                             std::size_t R, std::uint64_t seed) {
  const int p = observable_degree(obs);
  if (p < 1 || p > 3) throw BoundError("generic limit estimation supports p <= 3");
  if (R < 2) throw DomainError("need at least two draws per diagram");
  const std::size_t B = std::clamp<std::size_t>(batches < 2 ? 2 : static_cast<std::size_t>(batches), 2, R);

  // Pair diagrams (k, l) and chain diagrams (i, j, k, l), each run as its own
  // seeded stream; batch b holds draws [b R / B, (b+1) R / B).
  struct Diagram {
    int i, j, k, l;
    bool chain;
    double weight;
  };
  std::vector<Diagram> diagrams;
  for (int k = 0; k < p; ++k)
    for (int l = 0; l < p; ++l) diagrams.push_back({0, 0, k, l, false, 1.0 / (p * p)});
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      for (int k = 0; k < p; ++k)
        for (int l = 0; l < p; ++l) diagrams.push_back({i, j, k, l, true, (j != k ? 3.0 : 1.0) / (p * p * p * p)});

  std::vector<std::vector<double>> batch_values(diagrams.size(), std::vector<double>(B, 0.0));
  parallel_for(diagrams.size(), [&](std::size_t d) {
    const Diagram& dg = diagrams[d];
    Rng rng(derive_seed(seed, d));
    std::vector<Point> a(p), b(p), c(p);
    for (std::size_t batch = 0; batch < B; ++batch) {
      const std::size_t lo = batch * R / B, hi = (batch + 1) * R / B;
      JointAccumulator acc;
      for (std::size_t t = lo; t < hi; ++t) {
        for (auto& x : a) x = space.sample(rng);
        for (auto& x : b) x = space.sample(rng);
        if (!dg.chain) {
          b[dg.l] = a[dg.k];
          acc.add(phi_of_tuple(space, a, obs), phi_of_tuple(space, b, obs), 0.0);
        } else {
          for (auto& x : c) x = space.sample(rng);
          b[dg.j] = a[dg.i];
          c[dg.l] = b[dg.k];
          acc.add(phi_of_tuple(space, a, obs), phi_of_tuple(space, b, obs), phi_of_tuple(space, c, obs));
        }
      }
      batch_values[d][batch] = dg.chain ? acc.cumulant012() : acc.covariance01();
    }
  });

  GenericLimitEstimate out;
  std::vector<double> sigma_batches(B, 0.0), L_batches(B, 0.0);
  for (std::size_t d = 0; d < diagrams.size(); ++d)
    for (std::size_t batch = 0; batch < B; ++batch)
      (diagrams[d].chain ? L_batches : sigma_batches)[batch] += diagrams[d].weight * batch_values[d][batch];
  const SampleMoments sm = sample_moments(sigma_batches);
  const SampleMoments lm = sample_moments(L_batches);
  out.sigma_sq = sm.mean;
  out.sigma_sq_se = std::sqrt(sm.variance / B);
  out.L = lm.mean;
  out.L_se = std::sqrt(lm.variance / B);
  return out;
}

// ---------------------------------------------------------------------------

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double kolmogorov_distance_to_normal(std::span<const double> values) {
  if (values.size() < 2) throw DomainError("need at least two values");
  const SampleMoments m = sample_moments(values);
  if (!(m.variance > 0)) throw DomainError("degenerate sample: zero variance");
  const double sd = std::sqrt(m.variance);
  std::vector<double> z(values.begin(), values.end());
  for (double& v : z) v = (v - m.mean) / sd;
  std::sort(z.begin(), z.end());
  const double N = static_cast<double>(z.size());
  double sup = 0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double F = standard_normal_cdf(z[i]);
    sup = std::max({sup, std::abs((i + 1) / N - F), std::abs(F - i / N)});
  }
  return sup;
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0) return 1.0;
  if (lambda < 0.2) return 1.0;
  double sum = 0;
  for (int k = 1; k <= 200; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DomainError("two-sample test needs nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  const double ne = na * nb / (na + nb);
  const double sq = std::sqrt(ne);
  return {d, kolmogorov_survival((sq + 0.12 + 0.11 / sq) * d)};
}

}  // namespace gpfluct
