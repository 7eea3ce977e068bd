#pragma once

#include <cstdint>
#include <iterator>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace gpfluct {

/// Largest ground set accepted by the enumerators (Bell(12) = 4213597).
inline constexpr int kMaxPartitionSize = 12;

/// A set partition of {0, ..., m-1}.
///
/// Stored as a restricted growth string: `block_of(i)` is the index of the
/// block containing i, and blocks are numbered in order of their minimum
/// element. Two equal partitions therefore have identical representations.
class SetPartition {
 public:
  /// Builds from a restricted growth string (validated).
  explicit SetPartition(std::vector<std::uint8_t> rgs);

  /// Builds from arbitrary block labels; labels are renumbered canonically.
  static SetPartition from_labels(std::span<const long> labels);

  /// Builds from explicit 0-based blocks, which must cover {0..m-1} exactly.
  static SetPartition from_blocks(const std::vector<std::vector<int>>& blocks);

  static SetPartition singletons(int m);
  static SetPartition one_block(int m);

  /// Parses the 1-based text form "1,6|2,3,4|5".
  static SetPartition parse(std::string_view text);

  int size() const { return static_cast<int>(rgs_.size()); }
  int block_count() const { return block_count_; }
  int block_of(int element) const { return rgs_[element]; }
  std::span<const std::uint8_t> rgs() const { return rgs_; }

  /// Blocks sorted by minimum, elements sorted within blocks (0-based).
  std::vector<std::vector<int>> blocks() const;

  /// 1-based canonical text form, e.g. "1,6|2,3,4|5".
  std::string to_string() const;

  friend bool operator==(const SetPartition&, const SetPartition&) = default;

 private:
  SetPartition(std::vector<std::uint8_t> rgs, int block_count)
      : rgs_(std::move(rgs)), block_count_(block_count) {}

  std::vector<std::uint8_t> rgs_;
  int block_count_ = 0;
};

/// Visits every restricted growth string of length m in lexicographic order.
///
/// This is the allocation-free core used by the partition sweeps; the
/// SetPartition range below wraps it.
class RgsCursor {
 public:
  explicit RgsCursor(int m);

  std::span<const std::uint8_t> rgs() const { return rgs_; }
  int block_count() const { return max_[rgs_.size()] ; }
  /// Advances to the next string; returns false once exhausted.
  bool next();

 private:
  std::vector<std::uint8_t> rgs_;
  // max_[i] = number of distinct labels among rgs_[0..i-1].
  std::vector<std::uint8_t> max_;
};

/// Input range over all partitions of an m-element set.
class PartitionRange {
 public:
  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = SetPartition;
    using difference_type = std::ptrdiff_t;
    using pointer = const SetPartition*;
    using reference = SetPartition;

    iterator() = default;
    SetPartition operator*() const;
    iterator& operator++();
    void operator++(int) { ++*this; }
    bool operator==(std::default_sentinel_t) const { return done_; }

   private:
    friend class PartitionRange;
    explicit iterator(int m) : cursor_(m), done_(false) {}
    RgsCursor cursor_{1};
    bool done_ = true;
  };

  explicit PartitionRange(int m) : m_(m) {}
  iterator begin() const { return iterator(m_); }
  std::default_sentinel_t end() const { return {}; }

 private:
  int m_;
};

/// All partitions of {0..m-1} in lexicographic restricted-growth order.
/// Throws BoundError unless 1 <= m <= 12.
PartitionRange enumerate_partitions(int m);

/// Bell number B(m) from the Bell triangle.
std::uint64_t bell_number(int m);

/// Möbius function from `pi` to the one-block partition: (-1)^(l-1) (l-1)!.
long long moebius_to_top(int block_count);
inline long long moebius_to_top(const SetPartition& pi) { return moebius_to_top(pi.block_count()); }

/// n (n-1) ... (n-l+1); 1 for l = 0 and 0 whenever 0 <= n < l.
mpz_class falling_factorial(long long n, int l);

/// Layout of r rows of p positions each; position (k, l) maps to k*p + l.
struct RowLayout {
  int p = 1;
  int r = 1;
  int total() const { return p * r; }
  int row_of(int position) const { return position / p; }
};

/// Partition of positions induced by equal index values across r rows of
/// length p (positions are laid out row after row).
SetPartition partition_of_tuple(const std::vector<std::vector<long>>& rows);

/// Connectivity of the graph on rows joined whenever a block meets both rows.
bool row_graph_connected(const SetPartition& pi, const RowLayout& layout);
bool row_graph_connected(std::span<const std::uint8_t> rgs, int block_count,
                         const RowLayout& layout);

/// True when some row has at least p-1 of its positions in singleton blocks.
/// Such partitions give vanishing joint cumulants on compact homogeneous
/// spaces. Always false for a single row (the mean never vanishes this way).
bool is_homogeneously_vanishing(const SetPartition& pi, const RowLayout& layout);
bool is_homogeneously_vanishing(std::span<const std::uint8_t> rgs, int block_count,
                                const RowLayout& layout);

/// {k, l+p} plus singletons, on 2p positions. Indices are 1-based in [1, p].
SetPartition pair_partition(int k, int l, int p);

/// {i, j+p} and {k+p, l+2p} plus singletons on 3p positions, the two pairs
/// merging into {i, j+p, l+2p} when j == k. Indices are 1-based in [1, p].
SetPartition chain_partition(int i, int j, int k, int l, int p);

}  // namespace gpfluct
