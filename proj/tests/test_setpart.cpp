#include <doctest.h>

#include <random>
#include <set>

#include "gpfluct/errors.hpp"
#include "gpfluct/rational.hpp"
#include "gpfluct/setpart.hpp"

using namespace gpfluct;

namespace {

// Independent enumeration: insert element m-1 into every block of each
// partition of {0..m-2}, or into a new block.
std::vector<std::vector<std::vector<int>>> recursive_partitions(int m) {
  if (m == 0) return {{}};
  std::vector<std::vector<std::vector<int>>> out;
  for (const auto& smaller : recursive_partitions(m - 1)) {
    for (std::size_t b = 0; b < smaller.size(); ++b) {
      auto copy = smaller;
      copy[b].push_back(m - 1);
      out.push_back(copy);
    }
    auto copy = smaller;
    copy.push_back({m - 1});
    out.push_back(copy);
  }
  return out;
}

std::uint64_t bell_by_recurrence(int m) {
  std::vector<std::uint64_t> B{1};
  for (int n = 0; n < m; ++n) {
    std::uint64_t next = 0;
    for (int k = 0; k <= n; ++k) next += binomial(n, k).get_num().get_ui() * B[k];
    B.push_back(next);
  }
  return B[m];
}

}  // namespace

TEST_CASE("enumeration agrees with recursive insertion") {
  for (int m = 1; m <= 7; ++m) {
    std::set<std::vector<std::uint8_t>> fast;
    for (const SetPartition& pi : enumerate_partitions(m)) fast.insert({pi.rgs().begin(), pi.rgs().end()});
    std::set<std::vector<std::uint8_t>> slow;
    for (const auto& blocks : recursive_partitions(m)) {
      const SetPartition pi = SetPartition::from_blocks(blocks);
      const auto rgs = pi.rgs();
      slow.insert({rgs.begin(), rgs.end()});
    }
    CHECK(fast == slow);
  }
}

TEST_CASE("Bell numbers") {
  const std::uint64_t expected[] = {1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975, 678570, 4213597};
  for (int m = 1; m <= 12; ++m) {
    CHECK(bell_number(m) == expected[m - 1]);
    CHECK(bell_number(m) == bell_by_recurrence(m));
  }
  std::uint64_t count = 0;
  for (const auto& pi : enumerate_partitions(6)) {
    (void)pi;
    ++count;
  }
  CHECK(count == 203);
  RgsCursor cursor(9);
  count = 0;
  do ++count;
  while (cursor.next());
  CHECK(count == 21147);
}

TEST_CASE("enumeration is lexicographic and canonical") {
  std::vector<std::uint8_t> prev;
  for (const SetPartition& pi : enumerate_partitions(6)) {
    std::vector<std::uint8_t> cur(pi.rgs().begin(), pi.rgs().end());
    CHECK(cur[0] == 0);
    int max = 0;
    for (std::size_t i = 1; i < cur.size(); ++i) {
      CHECK(cur[i] <= max + 1);
      max = std::max<int>(max, cur[i]);
    }
    CHECK(pi.block_count() == max + 1);
    if (!prev.empty()) CHECK(prev < cur);
    prev = cur;
  }
}

TEST_CASE("bounds on the ground set") {
  CHECK_THROWS_AS(enumerate_partitions(0), BoundError);
  CHECK_THROWS_AS(enumerate_partitions(13), BoundError);
}

TEST_CASE("parse and print round trip") {
  const SetPartition pi = SetPartition::parse("1,6|2,3,4|5");
  CHECK(pi.size() == 6);
  CHECK(pi.block_count() == 3);
  CHECK(pi.to_string() == "1,6|2,3,4|5");
  CHECK(SetPartition::parse("5|4,3,2|6,1") == pi);
  CHECK_THROWS(SetPartition::parse("1,2|2"));
  CHECK_THROWS(SetPartition::parse("1|3"));
}

TEST_CASE("labels are renumbered canonically") {
  const std::vector<long> labels{7, 3, 7, 9, 3};
  const SetPartition pi = SetPartition::from_labels(labels);
  CHECK(pi.to_string() == "1,3|2,5|4");
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<long> l(8);
    for (auto& x : l) x = static_cast<long>(rng() % 5);
    const SetPartition a = SetPartition::from_labels(l);
    for (auto& x : l) x = x * 13 + 1;
    CHECK(SetPartition::from_labels(l) == a);
  }
}

TEST_CASE("Moebius value to the top partition") {
  CHECK(moebius_to_top(1) == 1);
  CHECK(moebius_to_top(2) == -1);
  CHECK(moebius_to_top(3) == 2);
  CHECK(moebius_to_top(4) == -6);
  // Sum over all partitions of mu(pi, top) is 0 for m >= 2.
  for (int m = 2; m <= 8; ++m) {
    long long total = 0;
    for (const auto& pi : enumerate_partitions(m)) total += moebius_to_top(pi);
    CHECK(total == 0);
  }
}

TEST_CASE("falling factorial") {
  CHECK(falling_factorial(5, 0) == 1);
  CHECK(falling_factorial(5, 3) == 60);
  CHECK(falling_factorial(2, 3) == 0);
  CHECK(falling_factorial(100, 2) == 9900);
}

TEST_CASE("partition of a tuple of indices") {
  const SetPartition pi = partition_of_tuple({{4, 7, 4}, {7, 1, 2}});
  CHECK(pi.to_string() == "1,3|2,4|5|6");
  CHECK_THROWS_AS(partition_of_tuple({{1, 2}, {3}}), ShapeError);
}

TEST_CASE("row graph connectivity") {
  const RowLayout two{3, 2};
  CHECK_FALSE(row_graph_connected(SetPartition::singletons(6), two));
  CHECK(row_graph_connected(pair_partition(1, 3, 3), two));
  CHECK(row_graph_connected(SetPartition::one_block(6), two));
  const RowLayout three{2, 3};
  CHECK(row_graph_connected(chain_partition(1, 2, 1, 2, 2), three));
  // Rows 1 and 2 joined, row 3 alone.
  CHECK_FALSE(row_graph_connected(SetPartition::parse("1,3|2|4|5|6"), three));
  CHECK(row_graph_connected(SetPartition::singletons(3), RowLayout{3, 1}));
}

TEST_CASE("homogeneously vanishing partitions") {
  const RowLayout two{3, 2};
  // pi_{k,l}: each row keeps p-1 = 2 singletons.
  CHECK(is_homogeneously_vanishing(pair_partition(2, 2, 3), two));
  // Two shared indices: no row has two singletons.
  CHECK_FALSE(is_homogeneously_vanishing(SetPartition::parse("1,4|2,5|3|6"), two));
  // A single row never vanishes this way.
  CHECK_FALSE(is_homogeneously_vanishing(SetPartition::singletons(3), RowLayout{3, 1}));
}

TEST_CASE("pair and chain diagrams") {
  CHECK(pair_partition(1, 2, 3).to_string() == "1,5|2|3|4|6");
  CHECK(chain_partition(1, 2, 3, 1, 3).to_string() == "1,5|2|3|4|6,7|8|9");
  CHECK(chain_partition(1, 2, 2, 3, 3).to_string() == "1,5,9|2|3|4|6|7|8");
  CHECK_THROWS_AS(pair_partition(0, 1, 3), RangeError);
  CHECK_THROWS_AS(chain_partition(1, 1, 1, 4, 3), RangeError);
}
