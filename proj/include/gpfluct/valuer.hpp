#pragma once

#include <optional>
#include <vector>

#include "gpfluct/multigraph.hpp"
#include "gpfluct/rational.hpp"

namespace gpfluct {

/// Value of a monomial observable M_G on some space.
///
/// `exact` holds iff no numerical fallback was involved; `exact_value` is
/// meaningful only then. `value` is always populated.
struct EvaluationResult {
  Rational exact_value = 0;
  double value = 0.0;
  bool exact = true;
  std::vector<CanonicalKey> fallback_graphs;
  std::optional<double> tolerance;

  static EvaluationResult from_exact(const Rational& q) { return {q, q.get_d(), true, {}, std::nullopt}; }
};

/// Something that can evaluate M_G for multigraphs G.
class MonomialValuer {
 public:
  virtual ~MonomialValuer() = default;
  virtual EvaluationResult evaluate(const Multigraph& g) = 0;
  /// True if the underlying space is known to be compact homogeneous; only
  /// used to label reports, never to skip computation.
  virtual bool homogeneous_hint() const { return false; }
};

}  // namespace gpfluct
