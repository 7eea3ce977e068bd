#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace gpfluct {

/// Space-specific coordinates: the circle and interval use x[0], the torus
/// x[0..1], the sphere a unit 3-vector, finite spaces the index in x[0].
using Point = std::array<double, 3>;

/// Random stream: 64-bit Mersenne Twister with explicit uniform mapping so
/// streams are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 finalizer of (master, index): seed of the index-th substream.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/// A metric measure space with a sampler for its measure.
class MmSpace {
 public:
  virtual ~MmSpace() = default;
  virtual std::string name() const = 0;
  virtual Point sample(Rng& rng) const = 0;
  virtual double distance(const Point& a, const Point& b) const = 0;
  /// Upper bound on all distances.
  virtual double diameter_bound() const = 0;
  /// Documentation only; never consulted by any computation.
  virtual std::optional<bool> homogeneous_hint() const { return std::nullopt; }
  /// Sum over all ordered pairs (i, j) of min(cap, d(x_i, x_j)) when the space
  /// has something faster than the quadratic loop; nullopt otherwise.
  virtual std::optional<long double> capped_pair_distance_sum(std::span<const Point> points, double cap) const {
    (void)points;
    (void)cap;
    return std::nullopt;
  }

  std::vector<Point> sample_many(Rng& rng, std::size_t n) const;
};

/// R/Z with the uniform measure and d(x, y) = min(|x-y|, 1-|x-y|).
class Circle : public MmSpace {
 public:
  std::string name() const override { return "circle"; }
  Point sample(Rng& rng) const override { return {rng.uniform(), 0, 0}; }
  double distance(const Point& a, const Point& b) const override;
  double diameter_bound() const override { return 0.5; }
  std::optional<bool> homogeneous_hint() const override { return true; }
  std::optional<long double> capped_pair_distance_sum(std::span<const Point> points, double cap) const override;
};

/// R/Z with a density f on [0, 1), sampled by rejection against the bound.
class DensityCircle : public Circle {
 public:
  /// `f` must be finite, nonnegative and at most `bound` on [0, 1); checked
  /// on a grid, ValidationError otherwise.
  DensityCircle(std::function<double(double)> f, double bound, std::string label = "density_circle");
  /// f(x) = 1 + epsilon cos(2 pi x), 0 <= epsilon < 1.
  static DensityCircle cosine(double epsilon);

  std::string name() const override { return label_; }
  Point sample(Rng& rng) const override;
  std::optional<bool> homogeneous_hint() const override { return std::nullopt; }
  double density(double x) const { return f_(x); }

 private:
  std::function<double(double)> f_;
  double bound_;
  std::string label_;
};

/// Flat torus (R/Z)^2 with the Euclidean geodesic distance.
class Torus2 : public MmSpace {
 public:
  std::string name() const override { return "torus"; }
  Point sample(Rng& rng) const override;
  double distance(const Point& a, const Point& b) const override;
  double diameter_bound() const override;
  std::optional<bool> homogeneous_hint() const override { return true; }
};

/// Unit sphere S^2 with great-circle distance and normalized area measure.
class Sphere : public MmSpace {
 public:
  std::string name() const override { return "sphere"; }
  Point sample(Rng& rng) const override;
  double distance(const Point& a, const Point& b) const override;
  double diameter_bound() const override;
  std::optional<bool> homogeneous_hint() const override { return true; }
};

/// [0, 1] with Lebesgue measure.
class Interval : public MmSpace {
 public:
  std::string name() const override { return "interval"; }
  Point sample(Rng& rng) const override { return {rng.uniform(), 0, 0}; }
  double distance(const Point& a, const Point& b) const override;
  double diameter_bound() const override { return 1.0; }
  std::optional<bool> homogeneous_hint() const override { return false; }
};

struct MetricCheck {
  bool ok = true;
  std::string reason;
  /// Offending indices; for the triangle inequality (a, b, c) with
  /// d(a, c) > d(a, b) + d(b, c).
  std::optional<std::array<int, 3>> witness;
};

/// Exhaustive check of squareness, zero diagonal, positivity off the
/// diagonal, symmetry and the triangle inequality (tolerance `tol`).
MetricCheck validate_metric(const std::vector<std::vector<double>>& d, double tol = 1e-12);

/// Finite space with a distance matrix and weights (normalized internally).
class FiniteSpace : public MmSpace {
 public:
  /// ValidationError on a non-metric matrix or bad weights.
  FiniteSpace(std::vector<std::vector<double>> distances, std::vector<double> weights);
  std::string name() const override { return "finite"; }
  Point sample(Rng& rng) const override;
  double distance(const Point& a, const Point& b) const override;
  double diameter_bound() const override { return diameter_; }

  std::size_t size() const { return d_.size(); }
  const std::vector<std::vector<double>>& distances() const { return d_; }
  const std::vector<double>& weights() const { return w_; }

 private:
  std::vector<std::vector<double>> d_;
  std::vector<double> w_;
  std::vector<double> cumulative_;
  double diameter_ = 0;
};

struct SpaceParams {
  /// Amplitude of the cosine density for density_circle.
  double epsilon = 0.5;
};

/// Built-in spaces by name: circle, density_circle, torus, sphere, interval.
/// DomainError for unknown names.
std::unique_ptr<MmSpace> make_space(const std::string& name, const SpaceParams& params = {});
std::vector<std::string> builtin_space_names();

}  // namespace gpfluct
