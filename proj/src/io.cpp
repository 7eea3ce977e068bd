#include "gpfluct/io.hpp"

#include <fstream>
#include <sstream>

#include "gpfluct/errors.hpp"
#include "gpfluct/rational.hpp"

namespace gpfluct {

namespace {

std::vector<std::vector<double>> matrix_from_json(const Json& j, const char* field) {
  if (!j.contains(field) || !j[field].is_array()) throw ParseError(std::string("missing array field '") + field + "'");
  std::vector<std::vector<double>> m;
  for (const auto& row : j[field]) {
    if (!row.is_array()) throw ParseError(std::string("rows of '") + field + "' must be arrays");
    std::vector<double> r;
    for (const auto& v : row) {
      if (!v.is_number()) throw ParseError(std::string("entries of '") + field + "' must be numbers");
      r.push_back(v.get<double>());
    }
    m.push_back(std::move(r));
  }
  return m;
}

}  // namespace

Multigraph graph_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("graph must be a JSON object");
  if (!j.contains("vertices") || !j["vertices"].is_number_integer()) {
    throw ParseError("graph needs an integer 'vertices' field");
  }
  const long k = j["vertices"].get<long>();
  if (k < 1 || k > kMaxCanonicalVertices) {
    throw ParseError("'vertices' must be between 1 and " + std::to_string(kMaxCanonicalVertices) + ", got " +
                     std::to_string(k));
  }
  Multigraph g(static_cast<int>(k));
  if (!j.contains("edges")) return g;
  if (!j["edges"].is_array()) throw ParseError("'edges' must be an array");
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() < 2 || e.size() > 3) throw ParseError("each edge must be [u, v] or [u, v, mult]");
    for (const auto& x : e)
      if (!x.is_number_integer()) throw ParseError("edge entries must be integers");
    const long u = e[0].get<long>(), v = e[1].get<long>();
    const long mult = e.size() == 3 ? e[2].get<long>() : 1;
    if (u < 1 || u > k || v < 1 || v > k) {
      throw ParseError("edge [" + std::to_string(u) + ", " + std::to_string(v) + "] has an endpoint outside 1.." +
                       std::to_string(k));
    }
    if (mult < 1) throw ParseError("edge multiplicity must be at least 1, got " + std::to_string(mult));
    g.add_edges(static_cast<int>(u - 1), static_cast<int>(v - 1), static_cast<Multiplicity>(mult));
  }
  return g;
}

Json graph_to_json(const Multigraph& g) {
  Json edges = Json::array();
  for (const auto& e : g.edges()) edges.push_back({e.u + 1, e.v + 1, e.multiplicity});
  return {{"vertices", g.vertex_count()}, {"edges", edges}};
}

Json polynomial_to_json(const FactorialPolynomial& p) {
  Json coeffs = Json::object();
  for (const auto& [level, c] : p.terms()) coeffs[std::to_string(level)] = to_string(c);
  return {{"basis", "falling"}, {"coeffs", coeffs}};
}

Json polynomial_to_json(const StandardPolynomial& p) {
  Json coeffs = Json::object();
  for (int d = 0; d <= p.degree(); ++d)
    if (p.coefficient(d) != 0) coeffs[std::to_string(d)] = to_string(p.coefficient(d));
  return {{"basis", "monomial"}, {"coeffs", coeffs}};
}

FiniteSpace finite_space_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("finite space must be a JSON object");
  auto d = matrix_from_json(j, "distances");
  std::vector<double> w;
  if (j.contains("weights")) {
    if (!j["weights"].is_array()) throw ParseError("'weights' must be an array");
    for (const auto& v : j["weights"]) {
      if (!v.is_number()) throw ParseError("weights must be numbers");
      w.push_back(v.get<double>());
    }
  }
  return FiniteSpace(std::move(d), std::move(w));
}

SplitDistanceData split_distances_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("data file must be a JSON object");
  if (!j.contains("n") || !j["n"].is_number_integer()) throw ParseError("data file needs an integer 'n'");
  SplitDistanceData out;
  out.n = j["n"].get<long>();
  if (out.n < 1) throw ParseError("'n' must be positive");
  out.distances = matrix_from_json(j, "distances");
  if (static_cast<long>(out.distances.size()) != 2 * out.n) {
    throw ParseError("'distances' must have 2n = " + std::to_string(2 * out.n) + " rows, got " +
                     std::to_string(out.distances.size()));
  }
  for (const auto& row : out.distances)
    if (static_cast<long>(row.size()) != 2 * out.n) throw ParseError("'distances' must be square");
  return out;
}

Json sample_to_json(const ReplicateSample& sample) {
  return {{"space", sample.space}, {"observable", sample.observable}, {"n", sample.n},
          {"seed", sample.seed},   {"values", sample.values}};
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError("'" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace gpfluct
