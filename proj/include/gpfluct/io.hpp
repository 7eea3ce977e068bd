#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "gpfluct/mmspace.hpp"
#include "gpfluct/montecarlo.hpp"
#include "gpfluct/multigraph.hpp"
#include "gpfluct/polynomial.hpp"

namespace gpfluct {

using Json = nlohmann::json;

/// {"vertices": k, "edges": [[u, v, mult], ...]} with 1-based vertices; the
/// multiplicity may be omitted (1). ParseError on malformed input,
/// out-of-range endpoints or multiplicity < 1.
Multigraph graph_from_json(const Json& j);
Json graph_to_json(const Multigraph& g);

/// {"basis": "falling" | "monomial", "coeffs": {"deg": "num/den"}}.
Json polynomial_to_json(const FactorialPolynomial& p);
Json polynomial_to_json(const StandardPolynomial& p);

/// {"distances": [[...]], "weights": [...]}; weights optional (uniform).
FiniteSpace finite_space_from_json(const Json& j);

/// Data file of the symmetry test: {"n": n, "distances": [[...]]} with a
/// 2n x 2n matrix whose first n rows are the first half.
struct SplitDistanceData {
  long n = 0;
  std::vector<std::vector<double>> distances;
};
SplitDistanceData split_distances_from_json(const Json& j);

Json sample_to_json(const ReplicateSample& sample);

/// Reads and parses a JSON file; ParseError naming the path on failure.
Json read_json_file(const std::string& path);

}  // namespace gpfluct
