#include "gpfluct/multigraph.hpp"

#include <algorithm>
#include <numeric>

#include "gpfluct/errors.hpp"

namespace gpfluct {

Multigraph::Multigraph(int vertex_count) : k_(vertex_count) {
  if (vertex_count < 0) throw RangeError("negative vertex count");
  m_.assign(static_cast<std::size_t>(k_) * k_, 0);
}

Multigraph Multigraph::from_edges(int vertex_count, const std::vector<Edge>& edges) {
  Multigraph g(vertex_count);
  for (const auto& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= vertex_count || e.v >= vertex_count) {
      throw RangeError("edge endpoint outside [0, " + std::to_string(vertex_count) + ")");
    }
    if (e.multiplicity < 1) throw RangeError("edge multiplicity must be >= 1");
    g.add_edges(e.u, e.v, e.multiplicity);
  }
  return g;
}

Multigraph Multigraph::path(int vertices) {
  Multigraph g(vertices);
  for (int v = 0; v + 1 < vertices; ++v) g.add_edges(v, v + 1);
  return g;
}

Multigraph Multigraph::complete(int vertices) {
  Multigraph g(vertices);
  for (int u = 0; u < vertices; ++u)
    for (int v = u + 1; v < vertices; ++v) g.add_edges(u, v);
  return g;
}

Multigraph Multigraph::cycle(int vertices) {
  Multigraph g = path(vertices);
  if (vertices >= 3) g.add_edges(0, vertices - 1);
  return g;
}

Multigraph Multigraph::bond(Multiplicity multiplicity) {
  Multigraph g(2);
  g.add_edges(0, 1, multiplicity);
  return g;
}

void Multigraph::add_edges(int u, int v, Multiplicity count) {
  m_[u * k_ + v] += count;
  if (u != v) m_[v * k_ + u] += count;
}

void Multigraph::set_multiplicity(int u, int v, Multiplicity count) {
  m_[u * k_ + v] = count;
  m_[v * k_ + u] = count;
}

std::vector<Edge> Multigraph::edges() const {
  std::vector<Edge> out;
  for (int u = 0; u < k_; ++u)
    for (int v = u; v < k_; ++v)
      if (auto m = multiplicity(u, v)) out.push_back({u, v, m});
  return out;
}

Multiplicity Multigraph::edge_count() const {
  Multiplicity total = 0;
  for (int u = 0; u < k_; ++u)
    for (int v = u; v < k_; ++v) total += multiplicity(u, v);
  return total;
}

Multiplicity Multigraph::degree(int v) const {
  Multiplicity d = 0;
  for (int w = 0; w < k_; ++w)
    if (w != v) d += multiplicity(v, w);
  return d;
}

int Multigraph::distinct_neighbors(int v) const {
  int count = 0;
  for (int w = 0; w < k_; ++w)
    if (w != v && multiplicity(v, w) > 0) ++count;
  return count;
}

std::vector<int> Multigraph::neighbors(int v) const {
  std::vector<int> out;
  for (int w = 0; w < k_; ++w)
    if (w != v && multiplicity(v, w) > 0) out.push_back(w);
  return out;
}

bool Multigraph::has_loop() const {
  for (int v = 0; v < k_; ++v)
    if (multiplicity(v, v) > 0) return true;
  return false;
}

std::vector<std::vector<int>> Multigraph::components() const {
  std::vector<int> label(k_, -1);
  std::vector<std::vector<int>> out;
  for (int s = 0; s < k_; ++s) {
    if (label[s] >= 0) continue;
    const int id = static_cast<int>(out.size());
    std::vector<int> comp{s};
    label[s] = id;
    for (std::size_t i = 0; i < comp.size(); ++i) {
      for (int w = 0; w < k_; ++w) {
        if (label[w] < 0 && w != comp[i] && multiplicity(comp[i], w) > 0) {
          label[w] = id;
          comp.push_back(w);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

bool Multigraph::is_connected() const { return k_ <= 1 || components().size() == 1; }

Multigraph Multigraph::induced(std::span<const int> vertices) const {
  Multigraph h(static_cast<int>(vertices.size()));
  for (std::size_t i = 0; i < vertices.size(); ++i)
    for (std::size_t j = 0; j < vertices.size(); ++j)
      h.m_[i * h.k_ + j] = multiplicity(vertices[i], vertices[j]);
  return h;
}

Multigraph Multigraph::without_vertex(int v) const {
  std::vector<int> keep;
  for (int w = 0; w < k_; ++w)
    if (w != v) keep.push_back(w);
  return induced(keep);
}

Multigraph Multigraph::permuted(std::span<const int> perm) const {
  Multigraph h(k_);
  for (int u = 0; u < k_; ++u)
    for (int v = 0; v < k_; ++v) h.m_[perm[u] * k_ + perm[v]] = multiplicity(u, v);
  return h;
}

Multigraph disjoint_power(const Multigraph& g, int r) {
  if (r < 1) throw RangeError("disjoint_power needs r >= 1");
  const int p = g.vertex_count();
  Multigraph h(p * r);
  for (int a = 0; a < r; ++a)
    for (const auto& e : g.edges()) h.add_edges(a * p + e.u, a * p + e.v, e.multiplicity);
  return h;
}

Multigraph contract(const Multigraph& g, std::span<const std::uint8_t> rgs, int block_count) {
  if (static_cast<int>(rgs.size()) != g.vertex_count()) {
    throw ShapeError("partition size " + std::to_string(rgs.size()) + " != vertex count " +
                     std::to_string(g.vertex_count()));
  }
  Multigraph h(block_count);
  const int k = g.vertex_count();
  for (int u = 0; u < k; ++u)
    for (int v = u; v < k; ++v)
      if (auto m = g.multiplicity(u, v)) h.add_edges(rgs[u], rgs[v], m);
  return h;
}

Multigraph contract(const Multigraph& g, const SetPartition& pi) {
  return contract(g, pi.rgs(), pi.block_count());
}

bool contraction_has_loop(const Multigraph& g, std::span<const std::uint8_t> rgs) {
  const int k = g.vertex_count();
  for (int u = 0; u < k; ++u)
    for (int v = u; v < k; ++v)
      if (rgs[u] == rgs[v] && g.multiplicity(u, v) > 0) return true;
  return false;
}

// ---------------------------------------------------------------------------
// Canonical labelling

std::string CanonicalKey::hex() const {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char c : bytes) {
    out += digits[c >> 4];
    out += digits[c & 15];
  }
  return out;
}

namespace {

void put_varint(std::string& out, std::uint64_t v) {
  while (v >= 0x80) {
    out += static_cast<char>((v & 0x7f) | 0x80);
    v >>= 7;
  }
  out += static_cast<char>(v);
}

class ConnectedCanonizer {
 public:
  explicit ConnectedCanonizer(const Multigraph& g) : g_(g), k_(g.vertex_count()) {}

  void run() {
    std::vector<int> cell(k_, 0);
    search(cell);
  }

  const std::string& best_key() const { return best_; }
  const std::vector<int>& best_order() const { return best_order_; }

 private:
  // Splits cells by (cell, loop, multiset of (neighbour cell, multiplicity))
  // until stable. Cell indices stay contiguous and order-refining.
  int refine(std::vector<int>& cell) const {
    int count = 1 + *std::max_element(cell.begin(), cell.end());
    std::vector<std::vector<std::uint64_t>> sig(k_);
    std::vector<int> order(k_);
    while (true) {
      for (int v = 0; v < k_; ++v) {
        auto& s = sig[v];
        s.clear();
        s.push_back(static_cast<std::uint64_t>(cell[v]));
        s.push_back(g_.multiplicity(v, v));
        std::vector<std::pair<std::uint64_t, std::uint64_t>> nb;
        for (int w = 0; w < k_; ++w)
          if (w != v && g_.multiplicity(v, w) > 0)
            nb.emplace_back(static_cast<std::uint64_t>(cell[w]), g_.multiplicity(v, w));
        std::sort(nb.begin(), nb.end());
        for (auto [c, m] : nb) {
          s.push_back(c);
          s.push_back(m);
        }
      }
      std::iota(order.begin(), order.end(), 0);
      std::sort(order.begin(), order.end(), [&](int a, int b) { return sig[a] < sig[b]; });
      int next = 0;
      std::vector<int> fresh(k_);
      for (int i = 0; i < k_; ++i) {
        if (i > 0 && sig[order[i]] != sig[order[i - 1]]) ++next;
        fresh[order[i]] = next;
      }
      const int fresh_count = next + 1;
      cell = std::move(fresh);
      if (fresh_count == count) return count;
      count = fresh_count;
    }
  }

  bool twins(int u, int v) const {
    if (g_.multiplicity(u, u) != g_.multiplicity(v, v)) return false;
    for (int w = 0; w < k_; ++w) {
      if (w == u || w == v) continue;
      if (g_.multiplicity(u, w) != g_.multiplicity(v, w)) return false;
    }
    return true;
  }

  void search(std::vector<int> cell) {
    const int count = refine(cell);
    if (count == k_) {
      std::vector<int> order(k_);
      for (int v = 0; v < k_; ++v) order[cell[v]] = v;
      std::string key;
      for (int i = 0; i < k_; ++i)
        for (int j = i; j < k_; ++j) put_varint(key, g_.multiplicity(order[i], order[j]));
      if (best_order_.empty() || key < best_) {
        best_ = std::move(key);
        best_order_ = std::move(order);
      }
      return;
    }
    std::vector<int> size(count, 0);
    for (int v = 0; v < k_; ++v) ++size[cell[v]];
    int target = 0;
    while (size[target] == 1) ++target;
    std::vector<int> branched;
    for (int v = 0; v < k_; ++v) {
      if (cell[v] != target) continue;
      // Swapping twins is an automorphism fixing the current colouring, so
      // their subtrees produce the same leaves.
      bool redundant = false;
      for (int u : branched)
        if (twins(u, v)) {
          redundant = true;
          break;
        }
      if (redundant) continue;
      branched.push_back(v);
      std::vector<int> child(cell);
      for (int w = 0; w < k_; ++w)
        if (child[w] > target || (child[w] == target && w != v)) ++child[w];
      search(std::move(child));
    }
  }

  const Multigraph& g_;
  int k_;
  std::string best_;
  std::vector<int> best_order_;
};

struct ComponentForm {
  std::string key;
  std::vector<int> order;  // original vertex ids in canonical order
};

std::vector<ComponentForm> component_forms(const Multigraph& g) {
  std::vector<ComponentForm> forms;
  for (const auto& comp : g.components()) {
    const Multigraph h = g.induced(comp);
    ConnectedCanonizer canon(h);
    canon.run();
    ComponentForm form;
    put_varint(form.key, static_cast<std::uint64_t>(comp.size()));
    form.key += canon.best_key();
    for (int local : canon.best_order()) form.order.push_back(comp[local]);
    forms.push_back(std::move(form));
  }
  std::sort(forms.begin(), forms.end(),
            [](const ComponentForm& a, const ComponentForm& b) { return a.key < b.key; });
  return forms;
}

void check_canonical_bound(const Multigraph& g) {
  if (g.vertex_count() > kMaxCanonicalVertices) {
    throw BoundError("canonical forms are limited to " + std::to_string(kMaxCanonicalVertices) +
                     " vertices (got " + std::to_string(g.vertex_count()) + ")");
  }
}

}  // namespace

CanonicalKey canonical_key(const Multigraph& g) {
  check_canonical_bound(g);
  CanonicalKey out;
  put_varint(out.bytes, static_cast<std::uint64_t>(g.vertex_count()));
  for (const auto& form : component_forms(g)) {
    // Component keys are self-delimiting: vertex count, then k(k+1)/2 varints.
    out.bytes += form.key;
  }
  return out;
}

std::vector<int> canonical_order(const Multigraph& g) {
  check_canonical_bound(g);
  std::vector<int> order;
  for (const auto& form : component_forms(g)) order.insert(order.end(), form.order.begin(), form.order.end());
  return order;
}

ContractionCensus count_loopless_contractions(const Multigraph& g, int r) {
  if (r < 1) throw RangeError("r must be >= 1");
  const int total = g.vertex_count() * r;
  if (total < 1 || total > kMaxPartitionSize) {
    throw BoundError("contraction sweeps need 1 <= p*r <= " + std::to_string(kMaxPartitionSize) +
                     " (got " + std::to_string(total) + ")");
  }
  const Multigraph power = disjoint_power(g, r);
  ContractionCensus census;
  RgsCursor cursor(total);
  do {
    ++census.total_partitions;
    if (contraction_has_loop(power, cursor.rgs())) continue;
    ++census.loopless;
    Multigraph h = contract(power, cursor.rgs(), cursor.block_count());
    auto [it, inserted] = census.by_class.try_emplace(canonical_key(h));
    if (inserted) it->second.representative = std::move(h);
    ++it->second.count;
  } while (cursor.next());
  return census;
}

}  // namespace gpfluct
