#ifndef BHC_HYPERGRAPH_HPP
#define BHC_HYPERGRAPH_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bhc/errors.hpp"

namespace bhc {

using Vertex = std::uint32_t;
using EdgeId = std::uint32_t;

/// A vertex named by its part and its index inside that part.
struct VertexRef {
  int part = 0;
  Vertex index = 0;

  friend auto operator<=>(const VertexRef&, const VertexRef&) = default;
};

namespace detail {

inline std::optional<std::uint64_t> checked_product(std::span<const Vertex> sizes) {
  std::uint64_t prod = 1;
  for (Vertex s : sizes) {
    if (s != 0 && prod > std::numeric_limits<std::uint64_t>::max() / s) return std::nullopt;
    prod *= s;
  }
  return prod;
}

// Mixed-radix code with part 0 most significant, so numeric order equals
// lexicographic tuple order.
inline std::uint64_t encode_tuple(std::span<const Vertex> tuple, std::span<const Vertex> sizes) {
  std::uint64_t code = 0;
  for (std::size_t j = 0; j < tuple.size(); ++j) code = code * sizes[j] + tuple[j];
  return code;
}

inline void decode_tuple(std::uint64_t code, std::span<const Vertex> sizes, std::span<Vertex> out) {
  for (std::size_t j = sizes.size(); j-- > 0;) {
    out[j] = static_cast<Vertex>(code % sizes[j]);
    code /= sizes[j];
  }
}

struct DisjointSets {
  std::vector<std::size_t> parent;
  std::vector<std::size_t> rank;

  explicit DisjointSets(std::size_t n) : parent(n), rank(n, 0) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank[a] < rank[b]) std::swap(a, b);
    parent[b] = a;
    if (rank[a] == rank[b]) ++rank[a];
    return true;
  }
};

}  // namespace detail

/**
 * An r-uniform r-partite hypergraph. Each edge is an r-tuple whose entry j is
 * an index into part j, so part membership is positional.
 *
 * Edges are kept sorted lexicographically and unique. A CSR vertex-to-edge
 * incidence index is built at construction; the object is immutable afterwards
 * and may be shared read-only between threads.
 */
class PartiteHypergraph {
 public:
  PartiteHypergraph() = default;

  /// `flat_edges` holds m*r entries, one tuple after another. Duplicate or
  /// out-of-range tuples raise input_error.
  PartiteHypergraph(std::vector<Vertex> part_sizes, std::vector<Vertex> flat_edges)
      : sizes_(std::move(part_sizes)), edges_(std::move(flat_edges)) {
    if (sizes_.size() < 2) throw input_error("a partite hypergraph needs at least 2 parts");
    r_ = static_cast<int>(sizes_.size());
    if (edges_.size() % sizes_.size() != 0) throw input_error("edge data length is not a multiple of r");
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      if (edges_[i] >= sizes_[i % sizes_.size()]) {
        throw input_error("edge " + std::to_string(i / sizes_.size()) + " has an index outside part " +
                          std::to_string(i % sizes_.size()));
      }
    }
    offsets_.resize(sizes_.size() + 1, 0);
    for (std::size_t j = 0; j < sizes_.size(); ++j) offsets_[j + 1] = offsets_[j] + sizes_[j];
    sort_and_check_unique();
    build_incidence();
  }

  static PartiteHypergraph from_edges(std::vector<Vertex> part_sizes,
                                      const std::vector<std::vector<Vertex>>& edges) {
    std::vector<Vertex> flat;
    flat.reserve(edges.size() * part_sizes.size());
    for (const auto& e : edges) {
      if (e.size() != part_sizes.size()) throw input_error("edge arity differs from the number of parts");
      flat.insert(flat.end(), e.begin(), e.end());
    }
    return PartiteHypergraph(std::move(part_sizes), std::move(flat));
  }

  static PartiteHypergraph empty(int r, Vertex n) {
    return PartiteHypergraph(std::vector<Vertex>(static_cast<std::size_t>(r), n), {});
  }

  /// Every valid transversal tuple is an edge.
  static PartiteHypergraph complete(int r, Vertex n) {
    std::vector<Vertex> sizes(static_cast<std::size_t>(r), n);
    auto total = detail::checked_product(sizes);
    if (!total || *total > (std::uint64_t{1} << 32)) throw capacity_error("complete hypergraph too large");
    std::vector<Vertex> flat(static_cast<std::size_t>(*total) * sizes.size());
    for (std::uint64_t c = 0; c < *total; ++c) {
      detail::decode_tuple(c, sizes, std::span<Vertex>(flat).subspan(c * sizes.size(), sizes.size()));
    }
    return PartiteHypergraph(std::move(sizes), std::move(flat));
  }

  int num_parts() const { return r_; }
  const std::vector<Vertex>& part_sizes() const { return sizes_; }
  Vertex part_size(int j) const { return sizes_[static_cast<std::size_t>(j)]; }
  std::size_t num_vertices() const { return offsets_.empty() ? 0 : offsets_.back(); }
  std::size_t num_edges() const { return r_ == 0 ? 0 : edges_.size() / static_cast<std::size_t>(r_); }

  bool is_balanced() const {
    return std::all_of(sizes_.begin(), sizes_.end(), [&](Vertex s) { return s == sizes_.front(); });
  }

  /// Common part size; input_error when the parts differ.
  Vertex balanced_size() const {
    if (!is_balanced()) throw input_error("hypergraph is not n-balanced");
    return sizes_.empty() ? 0 : sizes_.front();
  }

  /// Number of valid transversal tuples, or nullopt if it overflows 64 bits.
  std::optional<std::uint64_t> tuple_space() const { return detail::checked_product(sizes_); }

  std::span<const Vertex> edge(std::size_t e) const {
    return std::span<const Vertex>(edges_).subspan(e * static_cast<std::size_t>(r_), static_cast<std::size_t>(r_));
  }

  const std::vector<Vertex>& flat_edges() const { return edges_; }

  bool valid(VertexRef v) const {
    return v.part >= 0 && v.part < r_ && v.index < sizes_[static_cast<std::size_t>(v.part)];
  }

  std::size_t global_index(VertexRef v) const { return offsets_[static_cast<std::size_t>(v.part)] + v.index; }

  VertexRef vertex_at(std::size_t global) const {
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), global);
    int part = static_cast<int>(it - offsets_.begin()) - 1;
    return {part, static_cast<Vertex>(global - offsets_[static_cast<std::size_t>(part)])};
  }

  std::span<const EdgeId> incident_edges(VertexRef v) const {
    std::size_t g = global_index(v);
    return std::span<const EdgeId>(incidence_).subspan(inc_offsets_[g], inc_offsets_[g + 1] - inc_offsets_[g]);
  }

  bool contains(std::span<const Vertex> tuple) const {
    if (tuple.size() != static_cast<std::size_t>(r_)) return false;
    std::size_t lo = 0;
    std::size_t hi = num_edges();
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      auto e = edge(mid);
      if (std::lexicographical_compare(e.begin(), e.end(), tuple.begin(), tuple.end())) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    return lo < num_edges() && std::ranges::equal(edge(lo), tuple);
  }

  friend bool operator==(const PartiteHypergraph& a, const PartiteHypergraph& b) {
    return a.sizes_ == b.sizes_ && a.edges_ == b.edges_;
  }

 private:
  void sort_and_check_unique() {
    const std::size_t r = sizes_.size();
    const std::size_t m = edges_.size() / r;
    auto space = detail::checked_product(sizes_);
    if (space) {
      std::vector<std::uint64_t> codes(m);
      for (std::size_t e = 0; e < m; ++e) codes[e] = detail::encode_tuple(edge(e), sizes_);
      if (!std::is_sorted(codes.begin(), codes.end())) std::sort(codes.begin(), codes.end());
      if (std::adjacent_find(codes.begin(), codes.end()) != codes.end()) throw input_error("duplicate edge");
      for (std::size_t e = 0; e < m; ++e) {
        detail::decode_tuple(codes[e], sizes_, std::span<Vertex>(edges_).subspan(e * r, r));
      }
      return;
    }
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto less = [&](std::size_t a, std::size_t b) {
      auto ea = edge(a);
      auto eb = edge(b);
      return std::lexicographical_compare(ea.begin(), ea.end(), eb.begin(), eb.end());
    };
    std::sort(order.begin(), order.end(), less);
    std::vector<Vertex> sorted;
    sorted.reserve(edges_.size());
    for (std::size_t k = 0; k < m; ++k) {
      if (k > 0 && std::ranges::equal(edge(order[k]), edge(order[k - 1]))) throw input_error("duplicate edge");
      auto e = edge(order[k]);
      sorted.insert(sorted.end(), e.begin(), e.end());
    }
    edges_ = std::move(sorted);
  }

  void build_incidence() {
    const std::size_t r = sizes_.size();
    const std::size_t m = edges_.size() / r;
    if (m > std::numeric_limits<EdgeId>::max()) throw capacity_error("too many edges");
    inc_offsets_.assign(num_vertices() + 1, 0);
    for (std::size_t i = 0; i < edges_.size(); ++i) ++inc_offsets_[offsets_[i % r] + edges_[i] + 1];
    for (std::size_t g = 0; g + 1 < inc_offsets_.size(); ++g) inc_offsets_[g + 1] += inc_offsets_[g];
    incidence_.resize(edges_.size());
    std::vector<std::size_t> cursor(inc_offsets_.begin(), inc_offsets_.end() - 1);
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      incidence_[cursor[offsets_[i % r] + edges_[i]]++] = static_cast<EdgeId>(i / r);
    }
  }

  int r_ = 0;
  std::vector<Vertex> sizes_;
  std::vector<std::size_t> offsets_;
  std::vector<Vertex> edges_;
  std::vector<std::size_t> inc_offsets_;
  std::vector<EdgeId> incidence_;
};

inline void check_vertex(const PartiteHypergraph& h, VertexRef v) {
  if (!h.valid(v)) {
    throw input_error("vertex (" + std::to_string(v.part) + ", " + std::to_string(v.index) + ") is not in the hypergraph");
  }
}

/// Number of edges containing v.
inline std::size_t degree(const PartiteHypergraph& h, VertexRef v) {
  check_vertex(h, v);
  return h.incident_edges(v).size();
}

/// Number of edges containing every vertex of `s`. The vertices must lie in
/// pairwise distinct parts.
inline std::size_t subset_degree(const PartiteHypergraph& h, std::span<const VertexRef> s) {
  if (s.empty()) throw input_error("subset_degree needs a non-empty vertex set");
  std::vector<char> seen(static_cast<std::size_t>(h.num_parts()), 0);
  const VertexRef* pivot = &s.front();
  for (const auto& v : s) {
    check_vertex(h, v);
    if (seen[static_cast<std::size_t>(v.part)]++) throw input_error("two vertices of the set share a part");
    if (h.incident_edges(v).size() < h.incident_edges(*pivot).size()) pivot = &v;
  }
  std::size_t count = 0;
  for (EdgeId e : h.incident_edges(*pivot)) {
    auto tuple = h.edge(e);
    if (std::all_of(s.begin(), s.end(), [&](const VertexRef& v) { return tuple[static_cast<std::size_t>(v.part)] == v.index; })) {
      ++count;
    }
  }
  return count;
}

namespace detail {

// Calls f(count) for every j-set of vertices in distinct parts that lies in at
// least one edge, with count = its degree.
template <class F>
void for_each_codegree(const PartiteHypergraph& h, int j, F&& f) {
  const int r = h.num_parts();
  const std::size_t m = h.num_edges();
  for (std::uint32_t mask = 0; mask < (1u << r); ++mask) {
    if (std::popcount(mask) != j) continue;
    std::vector<std::size_t> parts;
    std::vector<Vertex> radix;
    for (int p = 0; p < r; ++p) {
      if (mask & (1u << p)) {
        parts.push_back(static_cast<std::size_t>(p));
        radix.push_back(h.part_size(p));
      }
    }
    if (checked_product(radix)) {
      std::vector<std::uint64_t> keys(m);
      for (std::size_t e = 0; e < m; ++e) {
        auto t = h.edge(e);
        std::uint64_t code = 0;
        for (std::size_t k = 0; k < parts.size(); ++k) code = code * radix[k] + t[parts[k]];
        keys[e] = code;
      }
      std::sort(keys.begin(), keys.end());
      for (std::size_t a = 0; a < keys.size();) {
        std::size_t b = a;
        while (b < keys.size() && keys[b] == keys[a]) ++b;
        f(b - a);
        a = b;
      }
    } else {
      std::vector<std::vector<Vertex>> keys(m);
      for (std::size_t e = 0; e < m; ++e) {
        auto t = h.edge(e);
        for (std::size_t p : parts) keys[e].push_back(t[p]);
      }
      std::sort(keys.begin(), keys.end());
      for (std::size_t a = 0; a < keys.size();) {
        std::size_t b = a;
        while (b < keys.size() && keys[b] == keys[a]) ++b;
        f(b - a);
        a = b;
      }
    }
  }
}

}  // namespace detail

/// Largest number of edges through a j-set of vertices (Δ_j), 1 <= j <= r.
inline std::size_t max_codegree(const PartiteHypergraph& h, int j) {
  if (j < 1 || j > h.num_parts()) throw input_error("codegree order out of range");
  if (j == 1) {
    std::size_t best = 0;
    for (int p = 0; p < h.num_parts(); ++p) {
      for (Vertex v = 0; v < h.part_size(p); ++v) best = std::max(best, h.incident_edges({p, v}).size());
    }
    return best;
  }
  std::size_t best = 0;
  detail::for_each_codegree(h, j, [&](std::size_t c) { best = std::max(best, c); });
  return best;
}

struct DegreeSummary {
  std::size_t max_degree = 0;
  /// Index j-1 holds Δ_j for j = 1..r-1.
  std::vector<std::size_t> max_codegree;
  /// Index j-1 holds δ_j, the least positive j-degree; absent when there are no edges.
  std::vector<std::optional<std::size_t>> min_codegree;
  std::size_t edge_count = 0;
  /// m / n, taken over the first part.
  double average_degree = 0.0;
};

inline DegreeSummary degree_summary(const PartiteHypergraph& h) {
  DegreeSummary out;
  const int r = h.num_parts();
  out.edge_count = h.num_edges();
  out.average_degree = h.part_size(0) == 0 ? 0.0 : static_cast<double>(out.edge_count) / h.part_size(0);
  for (int j = 1; j < r; ++j) {
    std::size_t hi = 0;
    std::optional<std::size_t> lo;
    detail::for_each_codegree(h, j, [&](std::size_t c) {
      hi = std::max(hi, c);
      lo = lo ? std::min(*lo, c) : c;
    });
    out.max_codegree.push_back(hi);
    out.min_codegree.push_back(lo);
  }
  out.max_degree = out.max_codegree.empty() ? 0 : out.max_codegree.front();
  return out;
}

inline constexpr std::uint64_t kDefaultComplementCap = 10'000'000;

/// The r-partite complement: every valid tuple that is not an edge.
inline PartiteHypergraph complement(const PartiteHypergraph& h, std::uint64_t cap = kDefaultComplementCap) {
  auto space = h.tuple_space();
  if (!space || *space > cap) {
    throw capacity_error("complement would have more than " + std::to_string(cap) + " potential edges");
  }
  const auto& sizes = h.part_sizes();
  const std::size_t r = sizes.size();
  std::vector<Vertex> flat;
  flat.reserve(static_cast<std::size_t>(*space - h.num_edges()) * r);
  std::size_t next = 0;
  std::vector<Vertex> tuple(r);
  for (std::uint64_t c = 0; c < *space; ++c) {
    detail::decode_tuple(c, sizes, tuple);
    if (next < h.num_edges() && std::ranges::equal(h.edge(next), tuple)) {
      ++next;
      continue;
    }
    flat.insert(flat.end(), tuple.begin(), tuple.end());
  }
  return PartiteHypergraph(sizes, std::move(flat));
}

/// Equal-size index sets, one per part, each sorted ascending.
struct BalancedSubset {
  std::vector<std::vector<Vertex>> per_part;

  Vertex size() const { return per_part.empty() ? 0 : static_cast<Vertex>(per_part.front().size()); }
  std::size_t total() const { return per_part.size() * size(); }

  static BalancedSubset all(const PartiteHypergraph& h) {
    BalancedSubset u;
    for (int p = 0; p < h.num_parts(); ++p) {
      std::vector<Vertex> idx(h.part_size(p));
      std::iota(idx.begin(), idx.end(), Vertex{0});
      u.per_part.push_back(std::move(idx));
    }
    return u;
  }

  friend bool operator==(const BalancedSubset&, const BalancedSubset&) = default;
};

/// A sub-hypergraph together with the map from its local indices back to the
/// parent's indices.
struct InducedSubgraph {
  PartiteHypergraph graph;
  std::vector<std::vector<Vertex>> to_parent;
};

/// Sub-hypergraph on arbitrary per-part index sets (sizes may differ).
inline InducedSubgraph induced_parts(const PartiteHypergraph& h, std::vector<std::vector<Vertex>> sets) {
  const int r = h.num_parts();
  if (static_cast<int>(sets.size()) != r) throw input_error("subset has the wrong number of parts");
  std::vector<std::vector<std::int64_t>> local(static_cast<std::size_t>(r));
  std::vector<Vertex> sizes;
  for (int p = 0; p < r; ++p) {
    auto& s = sets[static_cast<std::size_t>(p)];
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw input_error("subset repeats a vertex");
    auto& map = local[static_cast<std::size_t>(p)];
    map.assign(h.part_size(p), -1);
    for (std::size_t k = 0; k < s.size(); ++k) {
      if (s[k] >= h.part_size(p)) throw input_error("subset index outside its part");
      map[s[k]] = static_cast<std::int64_t>(k);
    }
    sizes.push_back(static_cast<Vertex>(s.size()));
  }
  std::size_t pivot = 0;
  for (std::size_t p = 1; p < sets.size(); ++p) {
    if (sets[p].size() < sets[pivot].size()) pivot = p;
  }
  std::vector<Vertex> flat;
  for (Vertex u : sets[pivot]) {
    for (EdgeId e : h.incident_edges({static_cast<int>(pivot), u})) {
      auto t = h.edge(e);
      bool inside = true;
      for (std::size_t p = 0; p < t.size() && inside; ++p) inside = local[p][t[p]] >= 0;
      if (!inside) continue;
      for (std::size_t p = 0; p < t.size(); ++p) flat.push_back(static_cast<Vertex>(local[p][t[p]]));
    }
  }
  return {PartiteHypergraph(std::move(sizes), std::move(flat)), std::move(sets)};
}

/// H[U] for a balanced subset U, reindexed 0..s-1 per part.
inline InducedSubgraph induced(const PartiteHypergraph& h, const BalancedSubset& u) {
  if (static_cast<int>(u.per_part.size()) != h.num_parts()) throw input_error("subset has the wrong number of parts");
  for (const auto& part : u.per_part) {
    if (part.size() != u.size()) throw input_error("subset is not balanced");
  }
  return induced_parts(h, u.per_part);
}

/// Connected components under "share an edge". Each component lists its
/// vertices in (part, index) order; components are ordered by their first vertex.
inline std::vector<std::vector<VertexRef>> components(const PartiteHypergraph& h) {
  const std::size_t nv = h.num_vertices();
  detail::DisjointSets dsu(nv);
  for (std::size_t e = 0; e < h.num_edges(); ++e) {
    auto t = h.edge(e);
    std::size_t first = h.global_index({0, t[0]});
    for (int p = 1; p < h.num_parts(); ++p) dsu.unite(first, h.global_index({p, t[static_cast<std::size_t>(p)]}));
  }
  std::vector<std::size_t> slot(nv, static_cast<std::size_t>(-1));
  std::vector<std::vector<VertexRef>> out;
  for (std::size_t g = 0; g < nv; ++g) {
    std::size_t root = dsu.find(g);
    if (slot[root] == static_cast<std::size_t>(-1)) {
      slot[root] = out.size();
      out.emplace_back();
    }
    out[slot[root]].push_back(h.vertex_at(g));
  }
  return out;
}

}  // namespace bhc

#endif
