#include "gpfluct/circle_exact.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>

#include "gpfluct/errors.hpp"

namespace gpfluct {

// ---------------------------------------------------------------------------
// GraphCombination

void GraphCombination::add(const Rational& coefficient, Multigraph graph) {
  if (coefficient == 0) return;
  CanonicalKey key = canonical_key(graph);
  auto it = terms_.find(key);
  if (it == terms_.end()) {
    terms_.emplace(std::move(key), Term{coefficient, std::move(graph)});
    return;
  }
  it->second.coefficient += coefficient;
  if (it->second.coefficient == 0) terms_.erase(it);
}

std::vector<GraphCombination::Term> GraphCombination::terms() const {
  std::vector<std::pair<CanonicalKey, Term>> sorted(terms_.begin(), terms_.end());
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Term> out;
  out.reserve(sorted.size());
  for (auto& [key, term] : sorted) out.push_back(std::move(term));
  return out;
}

Rational GraphCombination::coefficient_of(const Multigraph& g) const {
  auto it = terms_.find(canonical_key(g));
  return it == terms_.end() ? Rational(0) : it->second.coefficient;
}

// ---------------------------------------------------------------------------
// Reduction rules

namespace {

// Integral over t in [lower(D), upper(D)] of t^alpha (c(D) + sign t)^beta, as
// a polynomial in D.
StandardPolynomial integrate_piece(int alpha, int beta, const StandardPolynomial& c, int sign,
                                   const StandardPolynomial& lower, const StandardPolynomial& upper) {
  StandardPolynomial out;
  StandardPolynomial c_power = StandardPolynomial::constant(1);
  std::vector<StandardPolynomial> c_powers{c_power};
  for (int i = 1; i <= beta; ++i) c_powers.push_back(c_powers.back() * c);
  for (int i = 0; i <= beta; ++i) {
    // C(beta, i) c^(beta-i) sign^i t^(alpha+i)
    Rational coeff = binomial(beta, i);
    if (sign < 0 && i % 2 == 1) coeff = -coeff;
    const int e = alpha + i + 1;
    StandardPolynomial upper_pow = StandardPolynomial::monomial(e).compose(upper);
    StandardPolynomial lower_pow = StandardPolynomial::monomial(e).compose(lower);
    out += c_powers[beta - i] * (upper_pow - lower_pow) * (coeff / Rational(e));
  }
  return out;
}

}  // namespace

StandardPolynomial degree2_polynomial(Multiplicity a_in, Multiplicity b_in) {
  const int a = static_cast<int>(a_in), b = static_cast<int>(b_in);
  const StandardPolynomial zero;
  const StandardPolynomial D = StandardPolynomial::monomial(1);
  const StandardPolynomial half = StandardPolynomial::constant(Rational(1, 2));
  const StandardPolynomial half_minus_D = half - D;
  const StandardPolynomial one_minus_D = StandardPolynomial::constant(1) - D;
  // With y at 0 and z at D in [0, 1/2]:
  //   x in [0, D]          : t^a (D - t)^b,      t = x
  //   x in [-1/2+D... ]    : t^a (D + t)^b,      t = -x in [0, 1/2 - D]
  //   x in [D, 1/2]        : (D + t)^a t^b,      t = x - D
  //   x in [-1/2, -1/2+D]  : t^a (1 - D - t)^b,  t = -x in [1/2 - D, 1/2]
  StandardPolynomial out = integrate_piece(a, b, D, -1, zero, D);
  out += integrate_piece(a, b, D, +1, zero, half_minus_D);
  out += integrate_piece(b, a, D, +1, zero, half_minus_D);
  out += integrate_piece(a, b, one_minus_D, -1, half_minus_D, half);
  return out;
}

Rational pendant_coefficient(Multiplicity a) {
  mpz_class den = 1;
  den <<= static_cast<mp_bitcnt_t>(a);
  den *= mpz_class(static_cast<unsigned long>(a + 1));
  return Rational(mpz_class(1), den);
}

std::optional<GraphCombination> pendant_rule(const Multigraph& g, int x) {
  if (g.multiplicity(x, x) > 0 || g.distinct_neighbors(x) != 1) return std::nullopt;
  const int y = g.neighbors(x).front();
  GraphCombination out;
  out.add(pendant_coefficient(g.multiplicity(x, y)), g.without_vertex(x));
  return out;
}

namespace {

// Index of vertex v after deleting x.
int shifted(int v, int x) { return v > x ? v - 1 : v; }

}  // namespace

std::optional<GraphCombination> degree2_rule(const Multigraph& g, int x) {
  if (g.multiplicity(x, x) > 0) return std::nullopt;
  const auto nb = g.neighbors(x);
  if (nb.size() == 1) return pendant_rule(g, x);
  if (nb.size() != 2) return std::nullopt;
  const int y = nb[0], z = nb[1];
  const StandardPolynomial poly = degree2_polynomial(g.multiplicity(x, y), g.multiplicity(x, z));
  const Multigraph rest = g.without_vertex(x);
  GraphCombination out;
  for (int j = 0; j <= poly.degree(); ++j) {
    const Rational c = poly.coefficient(j);
    if (c == 0) continue;
    Multigraph h = rest;
    if (j > 0) h.add_edges(shifted(y, x), shifted(z, x), static_cast<Multiplicity>(j));
    out.add(c, std::move(h));
  }
  return out;
}

std::optional<GraphCombination> degree3_fourier_rule(const Multigraph& g, int x) {
  if (g.multiplicity(x, x) > 0) return std::nullopt;
  const auto nb = g.neighbors(x);
  if (nb.size() != 3) return std::nullopt;
  for (int w : nb)
    if (g.multiplicity(x, w) != 1) return std::nullopt;
  // With dt = 1/4 - d (mean zero): the triple product of centred distances
  // integrates to 0 and each pair integrates to (2/3)D^3 - (1/2)D^2 + 1/48.
  const Multigraph rest = g.without_vertex(x);
  GraphCombination out;
  out.add(Rational(1, 32), rest);
  for (int i = 0; i < 3; ++i) {
    for (int j = i + 1; j < 3; ++j) {
      const int s = shifted(nb[i], x), t = shifted(nb[j], x);
      Multigraph cubic = rest;
      cubic.add_edges(s, t, 3);
      out.add(Rational(1, 6), std::move(cubic));
      Multigraph square = rest;
      square.add_edges(s, t, 2);
      out.add(Rational(-1, 8), std::move(square));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Quadrature

namespace {

struct GaussRule {
  std::vector<double> nodes;    // on [0, 1]
  std::vector<double> weights;  // sum to 1
};

GaussRule gauss_legendre(int q) {
  GaussRule rule;
  for (int i = 1; i <= q; ++i) {
    double x = std::cos(M_PI * (i - 0.25) / (q + 0.5));
    double dp = 0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1, p1 = x;
      for (int k = 2; k <= q; ++k) {
        const double pk = ((2.0 * k - 1) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (q == 1) {
        p1 = x;
        p0 = 1;
      }
      dp = q * (x * p1 - p0) / (x * x - 1);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes.push_back(0.5 * (1 - x));
    rule.weights.push_back(1.0 / ((1 - x * x) * dp * dp));
  }
  return rule;
}

double circle_distance(double s, double t) {
  double d = std::fmod(std::abs(s - t), 1.0);
  return std::min(d, 1.0 - d);
}

class PanelIntegrator {
 public:
  PanelIntegrator(const Multigraph& g, int order, int splits)
      : g_(g), k_(g.vertex_count()), rule_(gauss_legendre(order)), splits_(splits), x_(k_, 0.0) {
    edges_ = g.edges();
  }

  double run() { return level(1); }

 private:
  double integrand() const {
    double f = 1.0;
    for (const auto& e : edges_) f *= std::pow(circle_distance(x_[e.u], x_[e.v]), static_cast<double>(e.multiplicity));
    return f;
  }

  double level(int v) {
    if (v == k_) return integrand();
    std::vector<double> cuts{0.0, 1.0};
    for (int j = 0; j < v; ++j) {
      if (g_.multiplicity(j, v) == 0) continue;
      cuts.push_back(std::fmod(x_[j], 1.0));
      cuts.push_back(std::fmod(x_[j] + 0.5, 1.0));
    }
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double lo = cuts[c], hi = cuts[c + 1];
      if (hi - lo <= 0) continue;
      const double width = (hi - lo) / splits_;
      for (int s = 0; s < splits_; ++s) {
        const double a = lo + s * width;
        for (std::size_t i = 0; i < rule_.nodes.size(); ++i) {
          x_[v] = a + width * rule_.nodes[i];
          total += width * rule_.weights[i] * level(v + 1);
        }
      }
    }
    return total;
  }

  const Multigraph& g_;
  int k_;
  GaussRule rule_;
  int splits_;
  std::vector<double> x_;
  std::vector<Edge> edges_;
};

}  // namespace

QuadratureResult quadrature_fallback(const Multigraph& g, double tol) {
  if (g.has_loop()) throw NumericError("quadrature_fallback needs a loop-free graph");
  if (g.vertex_count() > kMaxFallbackVertices) {
    throw NumericError("quadrature fallback limited to " + std::to_string(kMaxFallbackVertices) +
                       " vertices; graph " + canonical_key(g).hex() + " has " +
                       std::to_string(g.vertex_count()));
  }
  if (g.vertex_count() <= 1) return {1.0, 0.0};
  // Within each panel the iterated integrand is a polynomial of degree at most
  // |E| + k, so this order is exact up to rounding; the second order checks it.
  const int degree = static_cast<int>(g.edge_count()) + g.vertex_count();
  const int order = degree / 2 + 2;
  constexpr int kMaxSplits = 8;
  for (int splits = 1; splits <= kMaxSplits; splits *= 2) {
    const double coarse = PanelIntegrator(g, order, splits).run();
    const double fine = PanelIntegrator(g, order + 2, splits).run();
    const double err = std::abs(fine - coarse);
    if (err <= tol) return {fine, err};
  }
  throw NumericError("quadrature did not reach tolerance for graph " + canonical_key(g).hex());
}

// ---------------------------------------------------------------------------
// Engine

namespace {

std::uint64_t splitmix(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Articulation point of the underlying simple graph, or -1.
int find_cut_vertex(const Multigraph& g) {
  const int k = g.vertex_count();
  std::vector<int> disc(k, -1), low(k, 0);
  int timer = 0;
  int found = -1;
  std::function<void(int, int)> dfs = [&](int u, int parent) {
    disc[u] = low[u] = timer++;
    int children = 0;
    for (int w = 0; w < k && found < 0; ++w) {
      if (w == u || g.multiplicity(u, w) == 0) continue;
      if (disc[w] < 0) {
        ++children;
        dfs(w, u);
        low[u] = std::min(low[u], low[w]);
        if (parent >= 0 && low[w] >= disc[u] && found < 0) found = u;
      } else if (w != parent) {
        low[u] = std::min(low[u], disc[w]);
      }
    }
    if (parent < 0 && children > 1 && found < 0) found = u;
  };
  dfs(0, -1);
  return found;
}

// Blocks hanging off cut vertex v: each component of g - v, plus v.
std::vector<Multigraph> split_at(const Multigraph& g, int v) {
  const Multigraph rest = g.without_vertex(v);
  std::vector<Multigraph> parts;
  for (const auto& comp : rest.components()) {
    std::vector<int> verts{v};
    for (int w : comp) verts.push_back(w >= v ? w + 1 : w);
    parts.push_back(g.induced(verts));
  }
  return parts;
}

}  // namespace

CircleEngine::CircleEngine(Options options) : options_(options) {
  if (options_.shuffle_seed) rng_state_ = *options_.shuffle_seed;
}

std::size_t CircleEngine::memo_size() const {
  std::lock_guard lock(mu_);
  return memo_.size();
}

std::uint64_t CircleEngine::fallback_count() const {
  std::lock_guard lock(mu_);
  return fallback_count_;
}

EvaluationResult CircleEngine::evaluate(const Multigraph& g) {
  if (g.vertex_count() > kMaxCanonicalVertices) {
    throw BoundError("circle evaluation limited to " + std::to_string(kMaxCanonicalVertices) + " vertices");
  }
  Value v = eval(g);
  EvaluationResult out;
  out.exact = v.is_exact;
  out.value = v.is_exact ? v.exact.get_d() : v.approx;
  if (v.is_exact) out.exact_value = v.exact;
  out.fallback_graphs = std::move(v.fallbacks);
  if (!out.exact) out.tolerance = options_.fallback_tolerance;
  return out;
}

CircleEngine::Value CircleEngine::combine(const GraphCombination& combination) {
  Value out;
  std::set<CanonicalKey> fallbacks;
  for (const auto& term : combination.terms()) {
    Value v = eval(term.graph);
    out.approx += term.coefficient.get_d() * v.approx;
    if (v.is_exact) {
      out.exact += term.coefficient * v.exact;
    } else {
      out.is_exact = false;
    }
    fallbacks.insert(v.fallbacks.begin(), v.fallbacks.end());
  }
  if (out.is_exact) out.approx = out.exact.get_d();
  out.fallbacks.assign(fallbacks.begin(), fallbacks.end());
  return out;
}

CircleEngine::Value CircleEngine::eval(const Multigraph& g_in) {
  if (g_in.has_loop()) return Value{};

  // Isolated vertices integrate to 1.
  std::vector<int> keep;
  for (int v = 0; v < g_in.vertex_count(); ++v)
    if (g_in.distinct_neighbors(v) > 0) keep.push_back(v);
  if (keep.empty()) return Value{1, 1.0, true, {}};
  const Multigraph g = static_cast<int>(keep.size()) == g_in.vertex_count() ? g_in : g_in.induced(keep);

  CanonicalKey key = canonical_key(g);
  {
    std::lock_guard lock(mu_);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
  }
  Value v = reduce(g, key);
  std::lock_guard lock(mu_);
  memo_.insert_or_assign(std::move(key), v);
  return v;
}

std::optional<GraphCombination> CircleEngine::pick_vertex_rule(const Multigraph& g) {
  const int k = g.vertex_count();
  using Rule = std::optional<GraphCombination> (*)(const Multigraph&, int);
  static constexpr Rule kRules[] = {&pendant_rule, &degree2_rule, &degree3_fourier_rule};
  if (!options_.shuffle_seed) {
    for (Rule rule : kRules)
      for (int x = 0; x < k; ++x)
        if (auto c = rule(g, x)) return c;
    return std::nullopt;
  }
  std::vector<std::pair<Rule, int>> candidates;
  for (Rule rule : kRules)
    for (int x = 0; x < k; ++x)
      if (rule(g, x)) candidates.emplace_back(rule, x);
  if (candidates.empty()) return std::nullopt;
  std::uint64_t draw;
  {
    std::lock_guard lock(mu_);
    draw = splitmix(rng_state_);
  }
  const auto& [rule, x] = candidates[draw % candidates.size()];
  return rule(g, x);
}

CircleEngine::Value CircleEngine::reduce(const Multigraph& g, const CanonicalKey& key) {
  const bool shuffle = options_.shuffle_seed.has_value();
  bool try_factorization = true;
  if (shuffle) {
    std::lock_guard lock(mu_);
    try_factorization = splitmix(rng_state_) % 2 == 0;
  }

  auto product = [&](const std::vector<Multigraph>& parts) {
    Value out{1, 1.0, true, {}};
    std::set<CanonicalKey> fallbacks;
    for (const auto& part : parts) {
      Value v = eval(part);
      out.approx *= v.approx;
      if (v.is_exact) {
        out.exact *= v.exact;
      } else {
        out.is_exact = false;
      }
      fallbacks.insert(v.fallbacks.begin(), v.fallbacks.end());
    }
    if (out.is_exact) out.approx = out.exact.get_d();
    out.fallbacks.assign(fallbacks.begin(), fallbacks.end());
    return out;
  };

  auto factorize = [&]() -> std::optional<Value> {
    const auto comps = g.components();
    if (comps.size() > 1) {
      std::vector<Multigraph> parts;
      for (const auto& c : comps) parts.push_back(g.induced(c));
      return product(parts);
    }
    if (g.vertex_count() >= 3) {
      if (int cut = find_cut_vertex(g); cut >= 0) return product(split_at(g, cut));
    }
    return std::nullopt;
  };

  if (try_factorization) {
    if (auto v = factorize()) return *v;
  }
  if (auto combination = pick_vertex_rule(g)) return combine(*combination);
  if (!try_factorization) {
    if (auto v = factorize()) return *v;
  }

  const QuadratureResult q = quadrature_fallback(g, options_.fallback_tolerance);
  {
    std::lock_guard lock(mu_);
    ++fallback_count_;
  }
  return Value{0, q.value, false, {key}};
}

EvaluationResult evaluate_on_circle(const Multigraph& g) {
  CircleEngine engine;
  return engine.evaluate(g);
}

}  // namespace gpfluct
