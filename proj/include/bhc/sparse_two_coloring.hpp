#ifndef BHC_SPARSE_TWO_COLORING_HPP
#define BHC_SPARSE_TWO_COLORING_HPP

#include <cassert>
#include <vector>

#include "bhc/coloring.hpp"
#include "bhc/hypergraph.hpp"

namespace bhc {

/**
 * Balanced coloring with at most two colors of an n-balanced hypergraph with
 * fewer than n edges.
 *
 * Each edge is projected onto its entries in parts 0 and 1. The resulting
 * graph on those 2n vertices has at least 2n - m >= n + 1 components, ordered
 * by their smallest vertex (part 0 before part 1). With prefix sizes s_i, the
 * first i with s_i = 0 mod n, or the first repeat s_i = s_j mod n, gives a
 * run of components I covering exactly n vertices of parts 0 and 1. Then
 *
 *   J1 = (I on part 0) + (part 1 minus I) + the |I on part 0| lowest indices of parts 2..r-1
 *   J2 = everything else
 *
 * Every edge has its part-0/part-1 pair inside one component, so it meets
 * both J1 and J2 there. Empty classes are dropped.
 */
inline BalancedColoring two_color_sparse(const PartiteHypergraph& h) {
  const Vertex n = h.balanced_size();
  BalancedColoring phi(h);
  if (n == 0) return phi;
  if (h.num_edges() >= n) {
    throw input_error("two_color_sparse needs fewer than n edges (n = " + std::to_string(n) + ", m = " +
                      std::to_string(h.num_edges()) + ")");
  }
  // Nodes 0..n-1 are part 0, n..2n-1 are part 1.
  detail::DisjointSets dsu(2 * static_cast<std::size_t>(n));
  for (std::size_t e = 0; e < h.num_edges(); ++e) {
    auto t = h.edge(e);
    dsu.unite(t[0], n + static_cast<std::size_t>(t[1]));
  }
  std::vector<std::size_t> comp_of(2 * static_cast<std::size_t>(n));
  std::vector<std::size_t> slot(2 * static_cast<std::size_t>(n), static_cast<std::size_t>(-1));
  std::vector<std::size_t> comp_size;
  for (std::size_t g = 0; g < comp_of.size(); ++g) {
    std::size_t root = dsu.find(g);
    if (slot[root] == static_cast<std::size_t>(-1)) {
      slot[root] = comp_size.size();
      comp_size.push_back(0);
    }
    comp_of[g] = slot[root];
    ++comp_size[slot[root]];
  }
  assert(comp_size.size() >= static_cast<std::size_t>(n) + 1);

  // Pigeonhole on s_1 < ... < s_n < 2n taken mod n.
  std::size_t lo = 0;
  std::size_t hi = 0;
  std::vector<std::size_t> first_seen(n, static_cast<std::size_t>(-1));
  std::size_t prefix = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    prefix += comp_size[i - 1];
    std::size_t residue = prefix % n;
    if (residue == 0) {
      lo = 0;
      hi = i;
      break;
    }
    if (first_seen[residue] != static_cast<std::size_t>(-1)) {
      lo = first_seen[residue];
      hi = i;
      break;
    }
    first_seen[residue] = i;
  }
  assert(hi > lo);

  auto chosen = [&](std::size_t node) { return comp_of[node] >= lo && comp_of[node] < hi; };
  Vertex u1 = 0;
  for (Vertex v = 0; v < n; ++v) u1 += chosen(v) ? 1 : 0;
  const int c1 = u1 > 0 ? 0 : kUncolored;
  const int c2 = u1 > 0 ? (u1 < n ? 1 : kUncolored) : 0;
  for (Vertex v = 0; v < n; ++v) {
    phi.set({0, v}, chosen(v) ? c1 : c2);
    phi.set({1, v}, chosen(n + static_cast<std::size_t>(v)) ? c2 : c1);
    for (int p = 2; p < h.num_parts(); ++p) phi.set({p, v}, v < u1 ? c1 : c2);
  }
  return phi;
}

}  // namespace bhc

#endif
