#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "gpfluct/setpart.hpp"

namespace gpfluct {

inline constexpr int kMaxCanonicalVertices = 12;

using Multiplicity = std::uint64_t;

struct Edge {
  int u = 0;  ///< u <= v; u == v is a loop
  int v = 0;
  Multiplicity multiplicity = 1;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Undirected multigraph with loops on vertices {0..k-1}, stored as a dense
/// symmetric multiplicity matrix (the diagonal holds loop multiplicities).
class Multigraph {
 public:
  explicit Multigraph(int vertex_count);

  /// Throws RangeError for endpoints outside the vertex set.
  static Multigraph from_edges(int vertex_count, const std::vector<Edge>& edges);

  static Multigraph path(int vertices);
  static Multigraph complete(int vertices);
  static Multigraph cycle(int vertices);
  /// Two vertices joined by `multiplicity` parallel edges.
  static Multigraph bond(Multiplicity multiplicity);

  int vertex_count() const { return k_; }
  Multiplicity multiplicity(int u, int v) const { return m_[u * k_ + v]; }
  void add_edges(int u, int v, Multiplicity count = 1);
  void set_multiplicity(int u, int v, Multiplicity count);

  /// Edges with u <= v in row-major order.
  std::vector<Edge> edges() const;
  Multiplicity edge_count() const;
  /// Sum of multiplicities of non-loop edges at v.
  Multiplicity degree(int v) const;
  /// Number of distinct neighbours w != v.
  int distinct_neighbors(int v) const;
  std::vector<int> neighbors(int v) const;

  bool has_loop() const;
  bool is_connected() const;
  /// Vertex sets of connected components, each sorted, ordered by minimum.
  std::vector<std::vector<int>> components() const;

  /// Subgraph induced on `vertices`, renumbered in the given order.
  Multigraph induced(std::span<const int> vertices) const;
  /// Graph with `v` and its incident edges removed; later vertices shift down.
  Multigraph without_vertex(int v) const;
  /// Relabels vertex v as perm[v].
  Multigraph permuted(std::span<const int> perm) const;

  friend bool operator==(const Multigraph&, const Multigraph&) = default;

 private:
  int k_;
  std::vector<Multiplicity> m_;
};

/// r disjoint copies of g; copy a occupies vertices [a*p, (a+1)*p).
Multigraph disjoint_power(const Multigraph& g, int r);

/// Merges vertices according to `pi` (blocks numbered in canonical order);
/// edges inside a block become loops. Multiplicities add.
Multigraph contract(const Multigraph& g, const SetPartition& pi);
Multigraph contract(const Multigraph& g, std::span<const std::uint8_t> rgs, int block_count);

/// True when contracting g by the partition would create a loop.
bool contraction_has_loop(const Multigraph& g, std::span<const std::uint8_t> rgs);

/// Byte string identifying the isomorphism class of a multigraph.
struct CanonicalKey {
  std::string bytes;
  std::string hex() const;
  friend bool operator==(const CanonicalKey&, const CanonicalKey&) = default;
  friend auto operator<=>(const CanonicalKey&, const CanonicalKey&) = default;
};

struct CanonicalKeyHash {
  std::size_t operator()(const CanonicalKey& k) const noexcept {
    return std::hash<std::string>{}(k.bytes);
  }
};

/// Canonical form by colour refinement and individualization over the
/// refinement cells, taking the lexicographically least adjacency encoding.
/// Throws BoundError above 12 vertices.
CanonicalKey canonical_key(const Multigraph& g);

/// A vertex ordering realizing the canonical key (new position -> old vertex).
std::vector<int> canonical_order(const Multigraph& g);

struct ContractionClass {
  std::uint64_t count = 0;
  Multigraph representative{1};
};

struct ContractionCensus {
  std::uint64_t total_partitions = 0;
  std::uint64_t loopless = 0;
  std::map<CanonicalKey, ContractionClass> by_class;
};

/// Sweeps all partitions of the vertices of g^r, keeping loop-free
/// contractions grouped by isomorphism class. Requires p*r <= 12.
ContractionCensus count_loopless_contractions(const Multigraph& g, int r);

}  // namespace gpfluct
