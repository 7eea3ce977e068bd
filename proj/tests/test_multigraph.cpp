#include <doctest.h>

#include <random>

#include "gpfluct/errors.hpp"
#include "gpfluct/multigraph.hpp"
#include "support.hpp"

using namespace gpfluct;

TEST_CASE("construction and queries") {
  const Multigraph g = Multigraph::from_edges(4, {{0, 1, 2}, {1, 2, 1}, {3, 3, 1}});
  CHECK(g.multiplicity(0, 1) == 2);
  CHECK(g.multiplicity(1, 0) == 2);
  CHECK(g.edge_count() == 4);
  CHECK(g.degree(1) == 3);
  CHECK(g.distinct_neighbors(1) == 2);
  CHECK(g.has_loop());
  CHECK_FALSE(g.is_connected());
  CHECK(g.components().size() == 2);
  CHECK_THROWS_AS(Multigraph::from_edges(2, {{0, 2, 1}}), RangeError);
  CHECK(Multigraph::complete(4).edge_count() == 6);
  CHECK(Multigraph::cycle(5).edge_count() == 5);
  CHECK(Multigraph::path(3).edge_count() == 2);
}

TEST_CASE("canonical key is invariant under relabelling") {
  std::mt19937_64 rng(2024);
  std::vector<Multigraph> graphs{Multigraph::path(3), Multigraph::complete(4), Multigraph::cycle(6),
                                 disjoint_power(Multigraph::path(3), 3)};
  for (int i = 0; i < 8; ++i) graphs.push_back(testsupport::random_graph(rng, 3 + i, 0.5, 3));
  for (const auto& g : graphs) {
    const CanonicalKey key = canonical_key(g);
    for (int trial = 0; trial < 200; ++trial) {
      const auto perm = testsupport::random_permutation(rng, g.vertex_count());
      CHECK(canonical_key(g.permuted(perm)) == key);
    }
  }
}

TEST_CASE("canonical key separates non-isomorphic graphs") {
  CHECK(canonical_key(Multigraph::path(4)) != canonical_key(Multigraph::from_edges(4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}})));
  CHECK(canonical_key(Multigraph::cycle(6)) != canonical_key(disjoint_power(Multigraph::complete(3), 2)));
  CHECK(canonical_key(Multigraph::bond(2)) != canonical_key(Multigraph::bond(3)));
  // Same degree sequence, different multiplicity placement.
  const Multigraph a = Multigraph::from_edges(4, {{0, 1, 2}, {1, 2, 1}, {2, 3, 1}});
  const Multigraph b = Multigraph::from_edges(4, {{0, 1, 1}, {1, 2, 2}, {2, 3, 1}});
  CHECK(canonical_key(a) != canonical_key(b));
  // Isolated vertices count.
  CHECK(canonical_key(Multigraph(2)) != canonical_key(Multigraph(3)));
}

TEST_CASE("canonical key decides isomorphism on small random graphs") {
  // Oracle: brute force over all permutations.
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const int k = 4 + trial % 3;
    const Multigraph a = testsupport::random_graph(rng, k, 0.5, 2);
    const Multigraph b = testsupport::random_graph(rng, k, 0.5, 2);
    std::vector<int> perm(k);
    for (int i = 0; i < k; ++i) perm[i] = i;
    bool iso = false;
    do iso = iso || a.permuted(perm) == b;
    while (std::next_permutation(perm.begin(), perm.end()));
    CHECK((canonical_key(a) == canonical_key(b)) == iso);
  }
}

TEST_CASE("canonical order realizes a relabelling") {
  const Multigraph g = Multigraph::from_edges(5, {{0, 4, 2}, {4, 3, 1}, {1, 2, 1}});
  const auto order = canonical_order(g);
  CHECK(order.size() == 5);
  std::vector<int> inverse(5);
  for (int i = 0; i < 5; ++i) inverse[order[i]] = i;
  CHECK(canonical_key(g.permuted(inverse)) == canonical_key(g));
}

TEST_CASE("bound on vertex count") { CHECK_THROWS_AS(canonical_key(Multigraph(13)), BoundError); }

TEST_CASE("contraction") {
  const Multigraph g2 = disjoint_power(Multigraph::path(3), 2);
  CHECK(g2.vertex_count() == 6);
  CHECK(canonical_key(contract(g2, SetPartition::singletons(6))) == canonical_key(g2));
  // Merge the middle vertices of both copies: a star with four leaves.
  const Multigraph star = contract(g2, SetPartition::parse("1|2,5|3|4|6"));
  CHECK(star.vertex_count() == 5);
  CHECK(star.distinct_neighbors(1) == 4);
  // Merging two endpoints of one edge creates a loop.
  CHECK(contraction_has_loop(g2, SetPartition::parse("1,2|3|4|5|6").rgs()));
  CHECK(contract(g2, SetPartition::parse("1,2|3|4|5|6")).has_loop());
}

TEST_CASE("contraction conserves edge multiplicity") {
  std::mt19937_64 rng(5);
  const Multigraph g = testsupport::random_graph(rng, 7, 0.6, 3);
  for (const SetPartition& pi : enumerate_partitions(7)) CHECK(contract(g, pi).edge_count() == g.edge_count());
}

TEST_CASE("loopless contraction census") {
  const ContractionCensus c2 = count_loopless_contractions(Multigraph::path(3), 2);
  CHECK(c2.total_partitions == 203);
  CHECK(c2.loopless == 67);
  std::uint64_t sum = 0;
  for (const auto& [key, cls] : c2.by_class) {
    sum += cls.count;
    CHECK(canonical_key(cls.representative) == key);
    CHECK_FALSE(cls.representative.has_loop());
  }
  CHECK(sum == 67);
  CHECK(c2.by_class.size() == 15);

  const ContractionCensus single = count_loopless_contractions(Multigraph(1), 2);
  CHECK(single.loopless == 2);
  CHECK(single.by_class.size() == 2);

  CHECK_THROWS_AS(count_loopless_contractions(Multigraph::path(3), 5), BoundError);
}
