#include "gpfluct/setpart.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <unordered_map>

#include "gpfluct/errors.hpp"

namespace gpfluct {

namespace {

void check_size(int m) {
  if (m < 1 || m > kMaxPartitionSize) {
    throw BoundError("set partitions are supported for 1 <= m <= " +
                     std::to_string(kMaxPartitionSize) + " (got m = " + std::to_string(m) + ")");
  }
}

}  // namespace

SetPartition::SetPartition(std::vector<std::uint8_t> rgs) : rgs_(std::move(rgs)) {
  if (rgs_.empty()) throw ShapeError("a set partition needs a non-empty ground set");
  int next_label = 0;
  for (auto label : rgs_) {
    if (label > next_label) throw ShapeError("not a restricted growth string");
    if (label == next_label) ++next_label;
  }
  block_count_ = next_label;
}

SetPartition SetPartition::from_labels(std::span<const long> labels) {
  if (labels.empty()) throw ShapeError("a set partition needs a non-empty ground set");
  if (labels.size() > 255) throw BoundError("ground set too large");
  std::unordered_map<long, std::uint8_t> renumber;
  std::vector<std::uint8_t> rgs;
  rgs.reserve(labels.size());
  for (long label : labels) {
    auto [it, inserted] = renumber.try_emplace(label, static_cast<std::uint8_t>(renumber.size()));
    rgs.push_back(it->second);
  }
  const int count = static_cast<int>(renumber.size());
  return SetPartition(std::move(rgs), count);
}

SetPartition SetPartition::from_blocks(const std::vector<std::vector<int>>& blocks) {
  int m = 0;
  for (const auto& b : blocks) {
    if (b.empty()) throw ShapeError("set partition blocks must be non-empty");
    m += static_cast<int>(b.size());
  }
  if (m == 0) throw ShapeError("a set partition needs a non-empty ground set");
  std::vector<long> labels(m, -1);
  for (std::size_t bi = 0; bi < blocks.size(); ++bi) {
    for (int e : blocks[bi]) {
      if (e < 0 || e >= m) throw ShapeError("block element out of range: " + std::to_string(e));
      if (labels[e] != -1) throw ShapeError("element in two blocks: " + std::to_string(e));
      labels[e] = static_cast<long>(bi);
    }
  }
  return from_labels(labels);
}

SetPartition SetPartition::singletons(int m) {
  std::vector<std::uint8_t> rgs(m);
  std::iota(rgs.begin(), rgs.end(), std::uint8_t{0});
  return SetPartition(std::move(rgs));
}

SetPartition SetPartition::one_block(int m) {
  return SetPartition(std::vector<std::uint8_t>(m, 0));
}

SetPartition SetPartition::parse(std::string_view text) {
  std::vector<std::vector<int>> blocks;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t bar = std::min(text.find('|', start), text.size());
    std::string_view block_text = text.substr(start, bar - start);
    std::vector<int> block;
    std::size_t pos = 0;
    while (pos <= block_text.size()) {
      const std::size_t comma = std::min(block_text.find(',', pos), block_text.size());
      std::string_view item = block_text.substr(pos, comma - pos);
      int value = 0;
      auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
      if (ec != std::errc() || ptr != item.data() + item.size() || value < 1) {
        throw ParseError("bad set partition text: '" + std::string(text) + "'");
      }
      block.push_back(value - 1);
      pos = comma + 1;
    }
    blocks.push_back(std::move(block));
    start = bar + 1;
  }
  return from_blocks(blocks);
}

std::vector<std::vector<int>> SetPartition::blocks() const {
  std::vector<std::vector<int>> out(block_count_);
  for (int i = 0; i < size(); ++i) out[rgs_[i]].push_back(i);
  return out;
}

std::string SetPartition::to_string() const {
  std::string out;
  const auto bs = blocks();
  for (std::size_t b = 0; b < bs.size(); ++b) {
    if (b > 0) out += '|';
    for (std::size_t i = 0; i < bs[b].size(); ++i) {
      if (i > 0) out += ',';
      out += std::to_string(bs[b][i] + 1);
    }
  }
  return out;
}

RgsCursor::RgsCursor(int m) : rgs_(m, 0), max_(m + 1, 1) {
  max_[0] = 0;
}

bool RgsCursor::next() {
  const int m = static_cast<int>(rgs_.size());
  for (int i = m - 1; i >= 1; --i) {
    if (rgs_[i] < max_[i]) {
      ++rgs_[i];
      max_[i + 1] = std::max<std::uint8_t>(max_[i], rgs_[i] + 1);
      for (int j = i + 1; j < m; ++j) {
        rgs_[j] = 0;
        max_[j + 1] = max_[j];
      }
      return true;
    }
  }
  return false;
}

SetPartition PartitionRange::iterator::operator*() const {
  return SetPartition(std::vector<std::uint8_t>(cursor_.rgs().begin(), cursor_.rgs().end()));
}

PartitionRange::iterator& PartitionRange::iterator::operator++() {
  done_ = !cursor_.next();
  return *this;
}

PartitionRange enumerate_partitions(int m) {
  check_size(m);
  return PartitionRange(m);
}

std::uint64_t bell_number(int m) {
  if (m < 0 || m > 25) throw BoundError("bell_number supports 0 <= m <= 25");
  if (m == 0) return 1;
  std::vector<std::uint64_t> row{1};
  for (int i = 1; i < m; ++i) {
    std::vector<std::uint64_t> next{row.back()};
    for (auto v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row.back();
}

long long moebius_to_top(int block_count) {
  long long f = 1;
  for (int i = 2; i < block_count; ++i) f *= i;
  return (block_count % 2 == 1) ? f : -f;
}

mpz_class falling_factorial(long long n, int l) {
  if (l < 0) throw DomainError("falling factorial needs l >= 0");
  mpz_class out = 1;
  for (int i = 0; i < l; ++i) {
    out *= mpz_class(static_cast<long>(n - i));
    if (out == 0) break;
  }
  return out;
}

SetPartition partition_of_tuple(const std::vector<std::vector<long>>& rows) {
  if (rows.empty()) throw ShapeError("partition_of_tuple needs at least one row");
  const std::size_t p = rows.front().size();
  if (p == 0) throw ShapeError("rows must be non-empty");
  std::vector<long> labels;
  for (const auto& row : rows) {
    if (row.size() != p) throw ShapeError("ragged rows: expected length " + std::to_string(p));
    labels.insert(labels.end(), row.begin(), row.end());
  }
  return SetPartition::from_labels(labels);
}

namespace {

void check_layout(int m, const RowLayout& layout) {
  if (layout.p < 1 || layout.r < 1 || m != layout.total()) {
    throw ShapeError("partition of size " + std::to_string(m) + " does not match layout p=" +
                     std::to_string(layout.p) + ", r=" + std::to_string(layout.r));
  }
}

}  // namespace

bool row_graph_connected(std::span<const std::uint8_t> rgs, int block_count,
                         const RowLayout& layout) {
  check_layout(static_cast<int>(rgs.size()), layout);
  if (layout.r == 1) return true;
  // Union rows through the first row seen in each block.
  std::vector<int> parent(layout.r);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::vector<int> first_row(block_count, -1);
  int components = layout.r;
  for (int pos = 0; pos < layout.total(); ++pos) {
    const int row = layout.row_of(pos);
    int& anchor = first_row[rgs[pos]];
    if (anchor < 0) {
      anchor = row;
      continue;
    }
    const int a = find(anchor), b = find(row);
    if (a != b) {
      parent[a] = b;
      if (--components == 1) return true;
    }
  }
  return components == 1;
}

bool row_graph_connected(const SetPartition& pi, const RowLayout& layout) {
  return row_graph_connected(pi.rgs(), pi.block_count(), layout);
}

bool is_homogeneously_vanishing(std::span<const std::uint8_t> rgs, int block_count,
                                const RowLayout& layout) {
  check_layout(static_cast<int>(rgs.size()), layout);
  if (layout.r == 1) return false;
  std::vector<int> block_size(block_count, 0);
  for (auto b : rgs) ++block_size[b];
  for (int row = 0; row < layout.r; ++row) {
    int singletons = 0;
    for (int l = 0; l < layout.p; ++l) {
      if (block_size[rgs[row * layout.p + l]] == 1) ++singletons;
    }
    if (singletons >= layout.p - 1) return true;
  }
  return false;
}

bool is_homogeneously_vanishing(const SetPartition& pi, const RowLayout& layout) {
  return is_homogeneously_vanishing(pi.rgs(), pi.block_count(), layout);
}

namespace {

void check_index(int v, int p) {
  if (p < 1) throw RangeError("p must be positive");
  if (v < 1 || v > p) {
    throw RangeError("index " + std::to_string(v) + " outside [1, " + std::to_string(p) + "]");
  }
}

}  // namespace

SetPartition pair_partition(int k, int l, int p) {
  check_index(k, p);
  check_index(l, p);
  std::vector<long> labels(2 * p);
  std::iota(labels.begin(), labels.end(), 0L);
  labels[l - 1 + p] = labels[k - 1];
  return SetPartition::from_labels(labels);
}

SetPartition chain_partition(int i, int j, int k, int l, int p) {
  for (int v : {i, j, k, l}) check_index(v, p);
  std::vector<long> labels(3 * p);
  std::iota(labels.begin(), labels.end(), 0L);
  labels[j - 1 + p] = labels[i - 1];
  // When j == k this joins the third row to the existing pair.
  labels[l - 1 + 2 * p] = labels[k - 1 + p];
  return SetPartition::from_labels(labels);
}

}  // namespace gpfluct
