#include "gpfluct/moments.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "gpfluct/circle_exact.hpp"
#include "gpfluct/errors.hpp"

namespace gpfluct {

namespace {

void require_size(const Multigraph& g, int r, int r_cap) {
  if (r < 1) throw BoundError("r must be at least 1");
  if (r > r_cap) throw BoundError("r = " + std::to_string(r) + " exceeds the supported maximum " + std::to_string(r_cap));
  const int p = g.vertex_count();
  if (p * r > kMaxPartitionSize) {
    throw BoundError("p*r = " + std::to_string(p * r) + " exceeds " + std::to_string(kMaxPartitionSize) +
                     " (partition sweep too large)");
  }
}

// Partitions of the row set {0..r-1}, each block given as a bit mask.
const std::vector<std::vector<unsigned>>& row_partitions(int r) {
  static const auto table = [] {
    std::vector<std::vector<std::vector<unsigned>>> t(5);
    for (int rows = 1; rows <= 4; ++rows) {
      for (const SetPartition& rho : enumerate_partitions(rows)) {
        std::vector<unsigned> masks(rho.block_count(), 0u);
        for (int i = 0; i < rows; ++i) masks[rho.block_of(i)] |= 1u << i;
        t[rows].push_back(std::move(masks));
      }
    }
    return t;
  }();
  return table.at(r);
}

Rational value_of(const EvaluationResult& e) { return e.exact ? e.exact_value : Rational(e.value); }

}  // namespace

// ---------------------------------------------------------------------------

CumulantCalculator::CumulantCalculator(const Multigraph& g, MonomialValuer& valuer) : g_(g), valuer_(valuer) {
  const int p = std::max(1, g.vertex_count());
  for (int r = 0; r * p <= kMaxPartitionSize; ++r) powers_.push_back(r == 0 ? Multigraph(0) : disjoint_power(g, r));
}

std::vector<CanonicalKey> CumulantCalculator::fallback_graphs() const {
  std::set<CanonicalKey> keys(fallbacks_.begin(), fallbacks_.end());
  return {keys.begin(), keys.end()};
}

Rational CumulantCalculator::moment_of_rows(std::span<const std::uint8_t> rgs, int rows, unsigned mask) {
  const int p = g_.vertex_count();
  std::string key;
  key.reserve(rgs.size());
  std::uint8_t relabel[kMaxPartitionSize];
  std::fill(std::begin(relabel), std::end(relabel), std::uint8_t{0xff});
  std::uint8_t next = 0;
  int count = 0;
  for (int row = 0; row < rows; ++row) {
    if (!(mask & (1u << row))) continue;
    ++count;
    for (int j = 0; j < p; ++j) {
      const std::uint8_t b = rgs[row * p + j];
      if (relabel[b] == 0xff) relabel[b] = next++;
      key.push_back(static_cast<char>(relabel[b]));
    }
  }
  if (auto it = memo_.find(key); it != memo_.end()) return it->second;

  const auto restricted = std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(key.data()), key.size());
  const Multigraph& power = powers_.at(count);
  Rational value = 0;
  if (!contraction_has_loop(power, restricted)) {
    const EvaluationResult e = valuer_.evaluate(contract(power, restricted, next));
    if (!e.exact) {
      exact_ = false;
      fallbacks_.insert(fallbacks_.end(), e.fallback_graphs.begin(), e.fallback_graphs.end());
    }
    value = value_of(e);
  }
  memo_.emplace(std::move(key), value);
  return value;
}

Rational CumulantCalculator::joint_moment(std::span<const std::uint8_t> rgs) {
  const int p = g_.vertex_count();
  if (p == 0 || rgs.size() % p != 0) throw ShapeError("partition size is not a multiple of p");
  const int rows = static_cast<int>(rgs.size()) / p;
  return moment_of_rows(rgs, rows, (1u << rows) - 1);
}

Rational CumulantCalculator::kappa(std::span<const std::uint8_t> rgs) {
  const int p = g_.vertex_count();
  if (p == 0 || rgs.size() % p != 0) throw ShapeError("partition size is not a multiple of p");
  const int rows = static_cast<int>(rgs.size()) / p;
  if (rows > 4) throw BoundError("joint cumulants are limited to 4 rows");
  Rational moments[16];
  for (unsigned mask = 1; mask < (1u << rows); ++mask) moments[mask] = moment_of_rows(rgs, rows, mask);
  Rational total = 0;
  for (const auto& rho : row_partitions(rows)) {
    Rational term = static_cast<long>(moebius_to_top(static_cast<int>(rho.size())));
    for (unsigned mask : rho) {
      term *= moments[mask];
      if (term == 0) break;
    }
    total += term;
  }
  return total;
}

Rational kappa_pi(const Multigraph& g, const SetPartition& pi, const RowLayout& layout, MonomialValuer& valuer) {
  if (layout.p != g.vertex_count() || layout.total() != pi.size()) {
    throw ShapeError("partition of size " + std::to_string(pi.size()) + " does not match layout " +
                     std::to_string(layout.r) + "x" + std::to_string(layout.p));
  }
  CumulantCalculator calc(g, valuer);
  return calc.kappa(pi);
}

// ---------------------------------------------------------------------------

PolynomialResult exact_moment_polynomial(const Multigraph& g, int r, MonomialValuer& valuer) {
  require_size(g, r, kMaxPartitionSize);
  const int m = g.vertex_count() * r;
  PolynomialResult out;
  if (m == 0) {
    out.poly.add(0, 1);
    return out;
  }
  CumulantCalculator calc(g, valuer);
  std::map<int, Rational> levels;
  RgsCursor cursor(m);
  do {
    ++out.partitions_visited;
    const Rational v = calc.joint_moment(cursor.rgs());
    if (v == 0) continue;
    ++out.partitions_used;
    levels[cursor.block_count()] += v;
  } while (cursor.next());
  for (const auto& [level, c] : levels) out.poly.add(level, c);
  out.exact = calc.exact();
  out.fallback_graphs = calc.fallback_graphs();
  return out;
}

PolynomialResult exact_moment_polynomial(const Multigraph& g, int r) {
  CircleEngine engine;
  return exact_moment_polynomial(g, r, engine);
}

PolynomialResult exact_cumulant_polynomial(const Multigraph& g, int r, MonomialValuer& valuer, SweepFilter filter,
                                           int min_level) {
  require_size(g, r, 4);
  const int p = g.vertex_count();
  if (p == 0) throw ShapeError("graph has no vertices");
  const RowLayout layout{p, r};
  CumulantCalculator calc(g, valuer);
  std::map<int, Rational> levels;
  PolynomialResult out;
  RgsCursor cursor(p * r);
  do {
    const int l = cursor.block_count();
    if (l < min_level) continue;
    ++out.partitions_visited;
    const auto rgs = cursor.rgs();
    if (filter != SweepFilter::all && !row_graph_connected(rgs, l, layout)) continue;
    if (filter == SweepFilter::row_connected_nonvanishing && is_homogeneously_vanishing(rgs, l, layout)) continue;
    const Rational k = calc.kappa(rgs);
    if (k == 0) continue;
    ++out.partitions_used;
    levels[l] += k;
  } while (cursor.next());
  for (const auto& [level, c] : levels) out.poly.add(level, c);
  out.exact = calc.exact();
  out.fallback_graphs = calc.fallback_graphs();
  return out;
}

PolynomialResult exact_cumulant_polynomial(const Multigraph& g, int r, SweepFilter filter) {
  CircleEngine engine;
  return exact_cumulant_polynomial(g, r, engine, filter);
}

StandardPolynomial cumulant_from_moments(const std::vector<StandardPolynomial>& m, int r) {
  if (r < 1 || r > 4) throw BoundError("moment-to-cumulant conversion supports r = 1..4");
  if (static_cast<int>(m.size()) < r) throw ShapeError("need moments 1..r");
  const StandardPolynomial& m1 = m[0];
  switch (r) {
    case 1:
      return m1;
    case 2:
      return m[1] - m1 * m1;
    case 3:
      return m[2] - m1 * m[1] * Rational(3) + m1 * m1 * m1 * Rational(2);
    default:
      return m[3] - m1 * m[2] * Rational(4) - m[1] * m[1] * Rational(3) + m1 * m1 * m[1] * Rational(12) -
             m1 * m1 * m1 * m1 * Rational(6);
  }
}

std::string to_string(Regime regime) {
  return regime == Regime::generic ? "generic" : "homogeneous-singular";
}

// ---------------------------------------------------------------------------

LimitReport limit_report(const Multigraph& g, int r_max, MonomialValuer& valuer) {
  if (r_max < 2 || r_max > 4) throw BoundError("r_max must be between 2 and 4");
  require_size(g, r_max, 4);
  const int p = g.vertex_count();
  LimitReport out;
  CumulantCalculator calc(g, valuer);

  for (int k = 1; k <= p; ++k)
    for (int l = 1; l <= p; ++l) out.sigma_sq += calc.kappa(pair_partition(k, l, p));
  out.sigma_sq /= Rational(p * p);

  if (3 * p <= kMaxPartitionSize) {
    Rational L = 0;
    for (int i = 1; i <= p; ++i)
      for (int j = 1; j <= p; ++j)
        for (int k = 1; k <= p; ++k)
          for (int l = 1; l <= p; ++l) L += Rational(j != k ? 3 : 1) * calc.kappa(chain_partition(i, j, k, l, p));
    out.L = L / Rational(p * p * p * p);
  }
  out.exact = calc.exact();

  for (int r = 2; r <= r_max; ++r) {
    const int d = (p - 1) * r;
    const PolynomialResult kr = exact_cumulant_polynomial(g, r, valuer, SweepFilter::row_connected, d);
    out.exact = out.exact && kr.exact;
    out.leading_coefficients.push_back(kr.poly.to_standard().coefficient(d));
  }
  out.sigma_hom_sq = out.leading_coefficients.front();
  if (out.sigma_hom_sq > 0) {
    std::vector<double> a;
    const double w = out.sigma_hom_sq.get_d();
    for (int r = 2; r <= r_max; ++r) {
      const Rational& v = out.leading_coefficients[r - 2];
      a.push_back(r == 2 ? 1.0 : v.get_d() / std::pow(w, r / 2.0));
    }
    out.a_r = std::move(a);
  }
  out.regime = out.sigma_sq != 0 ? Regime::generic : Regime::homogeneous_singular;
  return out;
}

LimitReport limit_report(const Multigraph& g, int r_max) {
  CircleEngine engine;
  return limit_report(g, r_max, engine);
}

// ---------------------------------------------------------------------------

namespace {

Rational power(const Rational& base, int e) {
  Rational out = 1;
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

}  // namespace

Rational generic_cumulant_bound(int p, int r, long long n, const Rational& A) {
  if (r < 2) throw DomainError("the cumulant bounds apply to r >= 2");
  const Rational N = power(Rational(mpz_class(static_cast<long>(n))), p);
  const Rational D = Rational(p * p) * power(Rational(mpz_class(static_cast<long>(n))), p - 1);
  return N * power(Rational(2) * D, r - 1) * power(Rational(r), r - 2) * power(A, r);
}

Rational homogeneous_cumulant_bound(int p, int r, long long n, const Rational& A) {
  if (r < 2) throw DomainError("the cumulant bounds apply to r >= 2");
  return power(A * Rational(p * p), r) * power(Rational(2 * r), r - 1) *
         power(Rational(mpz_class(static_cast<long>(n))), (p - 1) * r);
}

std::vector<BoundCheckRow> cumulant_bound_table(const Multigraph& g, int r, const std::vector<long long>& n_values,
                                                MonomialValuer& valuer) {
  std::vector<BoundCheckRow> rows;
  if (r == 1) {
    for (long long n : n_values) rows.push_back({n, 0, 0, 0, true});
    return rows;
  }
  const int p = g.vertex_count();
  const FactorialPolynomial kr = exact_cumulant_polynomial(g, r, valuer).poly;
  for (long long n : n_values) {
    BoundCheckRow row;
    row.n = n;
    row.cumulant = kr(n);
    row.generic_bound = generic_cumulant_bound(p, r, n);
    row.homogeneous_bound = homogeneous_cumulant_bound(p, r, n);
    const Rational mag = abs(row.cumulant);
    row.holds = mag <= row.generic_bound && mag <= row.homogeneous_bound;
    rows.push_back(std::move(row));
  }
  return rows;
}

bool cumulant_bound_check(const Multigraph& g, int r, const std::vector<long long>& n_values, MonomialValuer& valuer) {
  const auto rows = cumulant_bound_table(g, r, n_values, valuer);
  return std::all_of(rows.begin(), rows.end(), [](const BoundCheckRow& row) { return row.holds; });
}

bool cumulant_bound_check(const Multigraph& g, int r, const std::vector<long long>& n_values) {
  CircleEngine engine;
  return cumulant_bound_check(g, r, n_values, engine);
}

}  // namespace gpfluct
