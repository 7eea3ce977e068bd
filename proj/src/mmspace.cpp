#include "gpfluct/mmspace.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gpfluct/errors.hpp"

namespace gpfluct {

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<Point> MmSpace::sample_many(Rng& rng, std::size_t n) const {
  std::vector<Point> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(sample(rng));
  return out;
}

// ---------------------------------------------------------------------------

double Circle::distance(const Point& a, const Point& b) const {
  const double d = std::abs(a[0] - b[0]);
  return std::min(d, 1.0 - d);
}

std::optional<long double> Circle::capped_pair_distance_sum(std::span<const Point> points, double cap) const {
  if (cap < 0.5) return std::nullopt;
  const std::size_t n = points.size();
  std::vector<long double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = points[i][0];
  std::sort(s.begin(), s.end());
  std::vector<long double> prefix(n + 1, 0.0L);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + s[i];
  auto range_sum = [&](std::size_t lo, std::size_t hi) { return prefix[hi] - prefix[lo]; };

  long double total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const long double x = s[i];
    const std::size_t hi = std::upper_bound(s.begin(), s.end(), x + 0.5L) - s.begin();
    const std::size_t lo = std::lower_bound(s.begin(), s.end(), x - 0.5L) - s.begin();
    // s_j in [x, x + 1/2]: s_j - x
    total += range_sum(i, hi) - x * static_cast<long double>(hi - i);
    // s_j > x + 1/2: 1 - s_j + x
    total += static_cast<long double>(n - hi) * (1 + x) - range_sum(hi, n);
    // s_j in [x - 1/2, x): x - s_j
    total += x * static_cast<long double>(i - lo) - range_sum(lo, i);
    // s_j < x - 1/2: 1 - x + s_j
    total += static_cast<long double>(lo) * (1 - x) + range_sum(0, lo);
  }
  return total;
}

// ---------------------------------------------------------------------------

DensityCircle::DensityCircle(std::function<double(double)> f, double bound, std::string label)
    : f_(std::move(f)), bound_(bound), label_(std::move(label)) {
  if (!f_) throw ValidationError("density function is empty");
  if (!(bound_ > 0) || !std::isfinite(bound_)) throw ValidationError("density bound must be positive and finite");
  constexpr int kGrid = 4096;
  double mass = 0;
  for (int i = 0; i < kGrid; ++i) {
    const double x = (i + 0.5) / kGrid;
    const double v = f_(x);
    if (!std::isfinite(v)) throw ValidationError("density is not finite at x = " + std::to_string(x));
    if (v < 0) throw ValidationError("density is negative at x = " + std::to_string(x));
    if (v > bound_ * (1 + 1e-12)) {
      throw ValidationError("density exceeds its bound " + std::to_string(bound_) + " at x = " + std::to_string(x));
    }
    mass += v / kGrid;
  }
  if (!(mass > 0)) throw ValidationError("density vanishes identically");
}

DensityCircle DensityCircle::cosine(double epsilon) {
  if (!(epsilon >= 0 && epsilon < 1)) throw ValidationError("cosine density needs 0 <= epsilon < 1");
  return DensityCircle([epsilon](double x) { return 1 + epsilon * std::cos(2 * std::numbers::pi * x); },
                       1 + epsilon, "density_circle");
}

Point DensityCircle::sample(Rng& rng) const {
  for (;;) {
    const double x = rng.uniform();
    if (rng.uniform() * bound_ <= f_(x)) return {x, 0, 0};
  }
}

// ---------------------------------------------------------------------------

Point Torus2::sample(Rng& rng) const {
  const double x = rng.uniform();
  const double y = rng.uniform();
  return {x, y, 0};
}

double Torus2::distance(const Point& a, const Point& b) const {
  double dx = std::abs(a[0] - b[0]);
  double dy = std::abs(a[1] - b[1]);
  dx = std::min(dx, 1 - dx);
  dy = std::min(dy, 1 - dy);
  return std::hypot(dx, dy);
}

double Torus2::diameter_bound() const { return std::sqrt(0.5); }

Point Sphere::sample(Rng& rng) const {
  const double z = 2 * rng.uniform() - 1;
  const double t = 2 * std::numbers::pi * rng.uniform();
  const double s = std::sqrt(std::max(0.0, 1 - z * z));
  return {s * std::cos(t), s * std::sin(t), z};
}

double Sphere::distance(const Point& a, const Point& b) const {
  const double dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
  const double cx = a[1] * b[2] - a[2] * b[1];
  const double cy = a[2] * b[0] - a[0] * b[2];
  const double cz = a[0] * b[1] - a[1] * b[0];
  return std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), dot);
}

double Sphere::diameter_bound() const { return std::numbers::pi; }

double Interval::distance(const Point& a, const Point& b) const { return std::abs(a[0] - b[0]); }

// ---------------------------------------------------------------------------

MetricCheck validate_metric(const std::vector<std::vector<double>>& d, double tol) {
  const int n = static_cast<int>(d.size());
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(d[i].size()) != n) return {false, "matrix is not square (row " + std::to_string(i) + ")", {}};
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!std::isfinite(d[i][j])) return {false, "non-finite entry", std::array<int, 3>{i, j, j}};
      if (d[i][j] < 0) return {false, "negative entry", std::array<int, 3>{i, j, j}};
    }
    if (std::abs(d[i][i]) > tol) return {false, "nonzero diagonal", std::array<int, 3>{i, i, i}};
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(d[i][j] - d[j][i]) > tol) return {false, "asymmetric", std::array<int, 3>{i, j, j}};
      if (d[i][j] <= tol) return {false, "distinct points at distance zero", std::array<int, 3>{i, j, j}};
    }
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (d[a][c] > d[a][b] + d[b][c] + tol) return {false, "triangle inequality fails", std::array<int, 3>{a, b, c}};
  return {};
}

FiniteSpace::FiniteSpace(std::vector<std::vector<double>> distances, std::vector<double> weights)
    : d_(std::move(distances)), w_(std::move(weights)) {
  if (d_.empty()) throw ValidationError("finite space needs at least one point");
  const MetricCheck check = validate_metric(d_);
  if (!check.ok) {
    std::string msg = "not a metric: " + check.reason;
    if (check.witness) {
      const auto& w = *check.witness;
      msg += " at (" + std::to_string(w[0]) + ", " + std::to_string(w[1]) + ", " + std::to_string(w[2]) + ")";
    }
    throw ValidationError(msg);
  }
  if (w_.empty()) w_.assign(d_.size(), 1.0);
  if (w_.size() != d_.size()) throw ValidationError("weights and distance matrix sizes differ");
  double total = 0;
  for (double w : w_) {
    if (!(w >= 0) || !std::isfinite(w)) throw ValidationError("weights must be finite and nonnegative");
    total += w;
  }
  if (!(total > 0)) throw ValidationError("weights sum to zero");
  double acc = 0;
  for (double& w : w_) {
    w /= total;
    acc += w;
    cumulative_.push_back(acc);
  }
  cumulative_.back() = 1.0;
  for (const auto& row : d_)
    for (double v : row) diameter_ = std::max(diameter_, v);
  if (diameter_ == 0) diameter_ = 1;
}

Point FiniteSpace::sample(Rng& rng) const {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  const std::size_t idx = std::min<std::size_t>(it - cumulative_.begin(), d_.size() - 1);
  return {static_cast<double>(idx), 0, 0};
}

double FiniteSpace::distance(const Point& a, const Point& b) const {
  return d_[static_cast<std::size_t>(a[0])][static_cast<std::size_t>(b[0])];
}

// ---------------------------------------------------------------------------

std::unique_ptr<MmSpace> make_space(const std::string& name, const SpaceParams& params) {
  if (name == "circle") return std::make_unique<Circle>();
  if (name == "density_circle") return std::make_unique<DensityCircle>(DensityCircle::cosine(params.epsilon));
  if (name == "torus") return std::make_unique<Torus2>();
  if (name == "sphere") return std::make_unique<Sphere>();
  if (name == "interval") return std::make_unique<Interval>();
  std::string known;
  for (const auto& n : builtin_space_names()) known += (known.empty() ? "" : ", ") + n;
  throw DomainError("unknown space '" + name + "' (known: " + known + ")");
}

std::vector<std::string> builtin_space_names() { return {"circle", "density_circle", "torus", "sphere", "interval"}; }

}  // namespace gpfluct
