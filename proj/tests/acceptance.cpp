// Acceptance checks: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>

#include "gpfluct/circle_exact.hpp"
#include "gpfluct/moments.hpp"
#include "gpfluct/montecarlo.hpp"
#include "gpfluct/symtest.hpp"

using namespace gpfluct;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Detail {
 public:
  template <class T>
  Detail& operator<<(const T& v) {
    os_ << v;
    return *this;
  }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

StandardPolynomial poly(std::initializer_list<std::pair<int, Rational>> terms) {
  StandardPolynomial p;
  for (const auto& [d, c] : terms) p += StandardPolynomial::monomial(d, c);
  return p;
}

double max_over_min(const std::vector<double>& v) {
  return *std::max_element(v.begin(), v.end()) / *std::min_element(v.begin(), v.end());
}

const Multigraph kPath3 = Multigraph::path(3);

// ---------------------------------------------------------------------------

Outcome exact_combinatorics() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  Detail d;
  std::uint64_t q6 = 0;
  for (const auto& pi : enumerate_partitions(6)) {
    (void)pi;
    ++q6;
  }
  const ContractionCensus c2 = count_loopless_contractions(kPath3, 2);
  const ContractionCensus c3 = count_loopless_contractions(kPath3, 3);
  std::uint64_t q9 = 0;
  RgsCursor cursor(9);
  do ++q9;
  while (cursor.next());
  const double elapsed = seconds_since(t0);
  o.pass = q6 == 203 && c2.loopless == 67 && c3.loopless == 6097 && c3.by_class.size() == 131 && q9 == 21147 &&
           elapsed < 60;
  d << "B(6)=" << q6 << " loopless(path3^2)=" << c2.loopless << " loopless(path3^3)=" << c3.loopless
    << " classes=" << c3.by_class.size() << " B(9)=" << q9
    << " time=" << elapsed << "s";
  o.detail = d.str();
  return o;
}

Outcome exact_circle_values() {
  Outcome o;
  Detail d;
  const EvaluationResult k4 = evaluate_on_circle(Multigraph::complete(4));
  o.pass = k4.exact && k4.exact_value == Rational(11, 71680);
  d << "K4=" << to_string(k4.exact_value) << " pendants:";
  const Rational expected[] = {Rational(1, 4), Rational(1, 12), Rational(1, 32), Rational(1, 80)};
  for (Multiplicity a = 1; a <= 4; ++a) {
    const EvaluationResult e = evaluate_on_circle(Multigraph::bond(a));
    o.pass = o.pass && e.exact && e.exact_value == expected[a - 1];
    d << " " << to_string(e.exact_value);
  }
  o.detail = d.str();
  return o;
}

Outcome exact_moment_polynomials() {
  Outcome o;
  Detail d;
  const std::vector<StandardPolynomial> reference{
      poly({{3, Rational(1, 16)}, {2, Rational(-5, 48)}, {1, Rational(1, 24)}}),
      poly({{6, Rational(1, 256)},
            {5, Rational(-5, 384)},
            {4, Rational(611, 26880)},
            {3, Rational(-67, 2688)},
            {2, Rational(5, 336)},
            {1, Rational(1, 280)}}),
      poly({{9, Rational(1, 4096)},
            {8, Rational(-5, 4096)},
            {7, Rational(541, 143360)},
            {6, Rational(-5713619, 638668800)},
            {5, Rational(61771, 3801600)},
            {4, Rational(-132443, 6386688)},
            {3, Rational(6367, 380160)},
            {2, Rational(-150193, 19958400)},
            {1, Rational(2353, 1663200)}})};
  double r3_time = 0;
  for (int r = 1; r <= 3; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    const PolynomialResult res = exact_moment_polynomial(kPath3, r);
    if (r == 3) r3_time = seconds_since(t0);
    const StandardPolynomial got = res.poly.to_standard();
    const StandardPolynomial& want = reference[r - 1];
    std::vector<int> mismatched;
    for (int k = 0; k <= std::max(got.degree(), want.degree()); ++k)
      if (got.coefficient(k) != want.coefficient(k)) mismatched.push_back(k);
    d << "r=" << r << (res.exact ? " exact" : " INEXACT");
    if (mismatched.empty()) {
      d << " matches;";
    } else {
      o.pass = false;
      d << " differs at";
      for (int k : mismatched)
        d << " n^" << k << " (computed " << to_string(got.coefficient(k)) << ", reference "
          << to_string(want.coefficient(k)) << ")";
      d << "; computed value at n=1 is " << to_string(got(Rational(1))) << ", reference value at n=1 is "
        << to_string(want(Rational(1))) << " (must be 0);";
    }
    o.pass = o.pass && res.exact;
  }
  o.pass = o.pass && r3_time < 600;
  d << " r=3 time=" << r3_time << "s";
  o.detail = d.str();
  return o;
}

Outcome exact_cumulants() {
  Outcome o;
  Detail d;
  const StandardPolynomial k2 = exact_cumulant_polynomial(kPath3, 2).poly.to_standard();
  const StandardPolynomial want2 = poly(
      {{4, Rational(269, 40320)}, {3, Rational(-131, 8064)}, {2, Rational(53, 4032)}, {1, Rational(-1, 280)}});
  const StandardPolynomial k3 = exact_cumulant_polynomial(kPath3, 3).poly.to_standard();
  const LimitReport rep = limit_report(kPath3, 3);
  const double a3 = rep.a_r ? (*rep.a_r)[1] : NAN;
  o.pass = k2 == want2 && k3.degree() == 6 && k3.coefficient(6) == Rational(-42209, 39916800) &&
           rep.sigma_hom_sq == Rational(269, 40320) && rep.sigma_hom_sq > 0 && std::abs(a3 + 1.94044) <= 1e-4;
  d << "n^4 var=" << k2.to_string() << " ; n^3 kappa3 leading=" << to_string(k3.coefficient(6))
    << " ; sigma_hom_sq=" << to_string(rep.sigma_hom_sq) << " ; a_3=" << a3;
  o.detail = d.str();
  return o;
}

Outcome vanishing_filters() {
  Outcome o;
  Detail d;
  for (int r = 2; r <= 3; ++r) {
    const PolynomialResult all = exact_cumulant_polynomial(kPath3, r, SweepFilter::all);
    const PolynomialResult a = exact_cumulant_polynomial(kPath3, r, SweepFilter::row_connected);
    const PolynomialResult b = exact_cumulant_polynomial(kPath3, r, SweepFilter::row_connected_nonvanishing);
    o.pass = o.pass && all.poly == a.poly && all.poly == b.poly;
    d << "r=" << r << " nonzero terms all/connected/nonvanishing=" << all.partitions_used << "/" << a.partitions_used
      << "/" << b.partitions_used << (all.poly == a.poly && all.poly == b.poly ? " identical; " : " DIFFER; ");
  }
  o.detail = d.str();
  return o;
}

Outcome cumulant_bounds() {
  Outcome o;
  Detail d;
  CircleEngine engine;
  for (int r = 2; r <= 3; ++r) {
    for (const BoundCheckRow& row : cumulant_bound_table(kPath3, r, {5, 10, 100}, engine)) {
      o.pass = o.pass && row.holds;
      d << "r=" << r << " n=" << row.n << " |k|=" << std::abs(row.cumulant.get_d()) << (row.holds ? " ok; " : " VIOLATED; ");
    }
  }
  o.detail = d.str();
  return o;
}

Outcome monte_carlo_vs_exact() {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  Detail d;
  const long n = 50;
  const std::size_t R = 20000;
  Circle c;
  const ReplicateSample s = replicate(c, n, MonomialObservable{kPath3}, R, 20240607);
  const SampleMoments m = sample_moments(s.values);
  double m4 = 0;
  for (double v : s.values) m4 += std::pow(v - m.mean, 4);
  m4 /= R;
  const double dn = static_cast<double>(n);
  const double exact_mean = exact_moment_polynomial(kPath3, 1).poly(n).get_d() / std::pow(dn, 3);
  const double exact_var = exact_cumulant_polynomial(kPath3, 2).poly(n).get_d() / std::pow(dn, 6);
  const double se_mean = std::sqrt(m.variance / R);
  const double se_var = std::sqrt((m4 - m.variance * m.variance * (R - 3.0) / (R - 1.0)) / R);
  const double zm = (m.mean - exact_mean) / se_mean, zv = (m.variance - exact_var) / se_var;
  const double elapsed = seconds_since(t0);
  o.pass = std::abs(zm) <= 3 && std::abs(zv) <= 3 && elapsed < 300;
  d << "mean=" << m.mean << " exact=" << exact_mean << " z=" << zm << " ; var=" << m.variance << " exact=" << exact_var
    << " z=" << zv << " ; time=" << elapsed << "s";
  o.detail = d.str();
  return o;
}

Outcome regime_separation() {
  Outcome o;
  Detail d;
  const std::vector<long> ns{25, 50, 100};
  const std::size_t R = 20000;
  Circle c;
  const auto dc = DensityCircle::cosine(0.5);
  std::vector<double> c_nvar, c_n2var, d_nvar;
  for (long n : ns) {
    const double dn = static_cast<double>(n);
    const double vc = sample_moments(replicate(c, n, MonomialObservable{kPath3}, R, 800 + n).values).variance;
    const double vd = sample_moments(replicate(dc, n, MonomialObservable{kPath3}, R, 900 + n).values).variance;
    c_nvar.push_back(dn * vc);
    c_n2var.push_back(dn * dn * vc);
    d_nvar.push_back(dn * vd);
  }
  const bool decreasing = c_nvar[0] > c_nvar[1] && c_nvar[1] > c_nvar[2];
  const double c_flat = max_over_min(c_n2var), d_flat = max_over_min(d_nvar);
  const bool positive = *std::min_element(d_nvar.begin(), d_nvar.end()) > 0;
  o.pass = decreasing && c_flat <= 1.25 && d_flat <= 1.25 && positive;
  d << "circle n*var=";
  for (double v : c_nvar) d << v << " ";
  d << "n^2*var=";
  for (double v : c_n2var) d << v << " ";
  d << "(max/min " << c_flat << ") ; density_circle(0.5) n*var=";
  for (double v : d_nvar) d << v << " ";
  d << "(max/min " << d_flat << ")";
  o.detail = d.str();
  return o;
}

Outcome generic_clt() {
  Outcome o;
  Detail d;
  const auto dc = DensityCircle::cosine(0.5);
  Circle c;
  const double ks_density = kolmogorov_distance_to_normal(replicate(dc, 200, MonomialObservable{Multigraph::bond(1)}, 5000, 31).values);
  const double ks_circle = kolmogorov_distance_to_normal(replicate(c, 200, MonomialObservable{kPath3}, 5000, 32).values);
  o.pass = ks_density <= 0.05 && ks_circle >= 0.03;
  d << "KS density_circle(0.5)/edge=" << ks_density << " (<= 0.05) ; KS circle/path3=" << ks_circle << " (>= 0.03)";
  o.detail = d.str();
  return o;
}

double rejection_rate(const MmSpace& space, long n, int trials, double A, std::uint64_t seed) {
  const TestConfig cfg{0.05, A, 2};
  int rejected = 0;
  for (int t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, t));
    rejected += simulate_test(space, n, cfg, rng).reject;
  }
  return static_cast<double>(rejected) / trials;
}

// One-sided Cochran-Armitage test for an increasing trend in proportions.
double cochran_armitage_z(const std::vector<double>& scores, const std::vector<int>& successes, int trials) {
  double N = 0, X = 0, sN = 0, s2N = 0, T = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    N += trials;
    X += successes[i];
    sN += scores[i] * trials;
    s2N += scores[i] * scores[i] * trials;
  }
  const double pbar = X / N;
  for (std::size_t i = 0; i < scores.size(); ++i) T += scores[i] * (successes[i] - trials * pbar);
  const double var = pbar * (1 - pbar) * (s2N - sN * sN / N);
  return var > 0 ? T / std::sqrt(var) : 0.0;
}

Outcome level_and_power() {
  Outcome o;
  Detail d;
  const int trials = 500;
  Circle circle;
  Torus2 torus;
  Sphere sphere;
  bool level_ok = true;
  for (const MmSpace* s : std::initializer_list<const MmSpace*>{&circle, &torus, &sphere}) {
    for (long n : {50L, 200L}) {
      const double rate = rejection_rate(*s, n, trials, s->diameter_bound(), 1000 + n);
      level_ok = level_ok && rate <= 0.05;
      d << s->name() << "(n=" << n << ")=" << rate << " ";
    }
  }
  const auto dc = DensityCircle::cosine(0.9);
  const std::vector<long> grid{1000, 10000, 100000, 1000000};
  std::vector<double> rates, scores;
  std::vector<int> successes;
  d << "; density_circle(0.9) rates:";
  for (long n : grid) {
    const double rate = rejection_rate(dc, n, trials, dc.diameter_bound(), 7000 + n);
    rates.push_back(rate);
    successes.push_back(static_cast<int>(std::lround(rate * trials)));
    scores.push_back(std::log10(static_cast<double>(n)));
    d << " n=" << n << ":" << rate;
  }
  const bool strict = rates[0] < rates[1] && rates[1] < rates[2] && rates.back() > 0.9;
  const bool nondecreasing = std::is_sorted(rates.begin(), rates.end());
  const double z = cochran_armitage_z(scores, successes, trials);
  const bool trend = nondecreasing && z >= 2.326;
  o.pass = level_ok && (strict || trend);
  d << " ; strict increase with final rate > 0.9: " << (strict ? "yes" : "no") << " ; trend test z=" << z
    << (trend ? " (passes at 0.01)" : " (fails)");
  o.detail = d.str();
  return o;
}

Outcome concentration() {
  Outcome o;
  Detail d;
  const long n = 100;
  const std::size_t R = 10000;
  const int p = 3;
  Circle c;
  const ReplicateSample s = replicate(c, n, MonomialObservable{kPath3}, R, 5150);
  // Y_n = (S_n - E S_n) / (sigma_{n,hom} n^{p-1}) with exact mean and variance.
  const double dn = static_cast<double>(n);
  const double mean = exact_moment_polynomial(kPath3, 1).poly(n).get_d() / std::pow(dn, p);
  const double var_S = exact_cumulant_polynomial(kPath3, 2).poly(n).get_d();
  const double sigma_n_hom = std::sqrt(var_S) / std::pow(dn, p - 1);
  // A = sup of the observable: two circle distances, each at most 1/2.
  const double A = 0.25;
  const double q = 2 * A * p * p / sigma_n_hom;
  for (double x : {5.0, 10.0, 20.0}) {
    const double cut = q * x / std::exp(1.0);
    std::size_t hits = 0;
    for (double v : s.values)
      if (std::abs(std::pow(dn, p) * (v - mean) / (sigma_n_hom * std::pow(dn, p - 1))) >= cut) ++hits;
    const double tail = static_cast<double>(hits) / R;
    const double bound = 2 * std::exp((std::log1p(x) - x) / std::exp(2.0));
    o.pass = o.pass && tail <= bound;
    d << "x=" << x << ": tail=" << tail << " bound=" << bound << " ; ";
  }
  d << "q=" << q;
  o.detail = d.str();
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"C1 exact combinatorics", exact_combinatorics},
      {"C2 exact circle values", exact_circle_values},
      {"C3 exact moment polynomials of path(3)", exact_moment_polynomials},
      {"C4 exact cumulants and limit parameters", exact_cumulants},
      {"C5 vanishing filters", vanishing_filters},
      {"C6 cumulant bounds", cumulant_bounds},
      {"C7 Monte Carlo vs exact", monte_carlo_vs_exact},
      {"C8 regime separation", regime_separation},
      {"C9 generic CLT and non-Gaussian limit", generic_clt},
      {"C10 symmetry test level and power trend", level_and_power},
      {"C11 concentration bound", concentration},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << name << " -- " << o.detail << std::endl;
  }
  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criterion(s) failed") << std::endl;
  return failures == 0 ? 0 : 1;
}
