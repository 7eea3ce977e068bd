#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gpfluct/mmspace.hpp"
#include "gpfluct/multigraph.hpp"

namespace gpfluct {

/// F_G = product over edges of min(1, d)^multiplicity.
struct MonomialObservable {
  Multigraph graph;
};

/// Arbitrary bounded phi of the p(p-1)/2 distances, passed in the order
/// (0,1), (0,2), ..., (0,p-1), (1,2), ..., (p-2,p-1).
struct CustomObservable {
  int p = 2;
  std::function<double(std::span<const double>)> phi;
  /// Caller-asserted sup |phi|; checked on every evaluated tuple.
  double sup_bound = 1.0;
  std::string description = "custom";
};

/// p = 2, phi(d) = min(cap, d).
struct CappedDistanceObservable {
  double cap = 1.0;
};

using ObservableSpec = std::variant<MonomialObservable, CustomObservable, CappedDistanceObservable>;

int observable_degree(const ObservableSpec& obs);
double observable_sup_bound(const ObservableSpec& obs);
std::string describe(const ObservableSpec& obs);

/// Maximum number of tuples the generic n^p loop will visit.
inline constexpr double kMaxTupleCount = 1e8;

/// Phi(X_n) = n^-p * sum over all n^p index tuples (repeated indices
/// included) of phi(d(X_i)). Monomials on at most three vertices whose
/// edges form a star are summed in O(n^2); the capped distance uses the
/// space's fast pair sum when it has one. Everything else needs
/// n^p <= 1e8 (BoundError otherwise).
double observable_on_points(const MmSpace& space, std::span<const Point> points, const ObservableSpec& obs);

/// Samples n points and returns Phi(X_n).
double evaluate_observable(const MmSpace& space, long n, const ObservableSpec& obs, Rng& rng);

struct ReplicateSample {
  std::vector<double> values;
  long n = 0;
  std::uint64_t seed = 0;
  std::string space;
  std::string observable;
};

/// R independent evaluations; replicate i uses Rng(derive_seed(seed, i)).
/// Runs in parallel; values are stored by replicate index.
ReplicateSample replicate(const MmSpace& space, long n, const ObservableSpec& obs, std::size_t R, std::uint64_t seed);

/// CSV: '#'-prefixed metadata lines, a "value" header, one value per line.
std::string to_csv(const ReplicateSample& sample);

struct SampleMoments {
  double mean = 0;
  /// Unbiased sample variance.
  double variance = 0;
  std::size_t count = 0;
};
SampleMoments sample_moments(std::span<const double> values);

/// Plug-in cumulants 1..r_max from central moments (biased at O(1/R)).
/// BoundError if r_max is outside 1..4.
std::vector<double> empirical_cumulants(std::span<const double> values, int r_max);

struct GenericLimitEstimate {
  double sigma_sq = 0;
  double sigma_sq_se = 0;
  double L = 0;
  double L_se = 0;
};

/// Direct estimates of sigma^2 = (1/p^2) sum kappa(pi_{k,l}) and
/// L = (1/p^4) sum c kappa(pi_{i,j,k,l}): for each pair or chain diagram,
/// R tuples of fresh points sharing exactly the prescribed indices are drawn
/// and the joint covariance (third joint cumulant) is estimated. Standard
/// errors come from `batches` batch means. Requires p <= 3.
GenericLimitEstimate estimate_generic_limits(const MmSpace& space, const ObservableSpec& obs, int batches,
                                             std::size_t R, std::uint64_t seed);

/// sup |F_hat - Phi| of the standardized sample. DomainError for fewer than
/// two values or zero variance.
double kolmogorov_distance_to_normal(std::span<const double> values);

/// Kolmogorov survival function Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_survival(double lambda);

struct KsResult {
  double statistic = 0;
  double p_value = 1;
};
/// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);

double standard_normal_cdf(double x);

}  // namespace gpfluct
