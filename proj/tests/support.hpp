// Brute-force reference implementations for the tests. They share nothing
// with the library beyond the PartiteHypergraph container.
#ifndef BHC_TESTS_SUPPORT_HPP
#define BHC_TESTS_SUPPORT_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "bhc/hypergraph.hpp"

namespace bhc_test {

using bhc::PartiteHypergraph;
using bhc::Vertex;

// Vertex (p, v) of an n-balanced hypergraph is bit p*n + v.
inline std::uint32_t bit(Vertex n, int p, Vertex v) { return 1u << (static_cast<unsigned>(p) * n + v); }

inline std::vector<std::uint32_t> edge_masks(const PartiteHypergraph& h) {
  const Vertex n = h.balanced_size();
  std::vector<std::uint32_t> out;
  for (std::size_t e = 0; e < h.num_edges(); ++e) {
    std::uint32_t m = 0;
    auto t = h.edge(e);
    for (int p = 0; p < h.num_parts(); ++p) m |= bit(n, p, t[static_cast<std::size_t>(p)]);
    out.push_back(m);
  }
  return out;
}

inline bool balanced_mask(std::uint32_t m, int r, Vertex n) {
  const std::uint32_t part = (1u << n) - 1;
  int c0 = std::popcount(m & part);
  for (int p = 1; p < r; ++p) {
    if (std::popcount((m >> (static_cast<unsigned>(p) * n)) & part) != c0) return false;
  }
  return true;
}

inline bool independent_mask(std::uint32_t m, const std::vector<std::uint32_t>& edges) {
  return std::none_of(edges.begin(), edges.end(), [&](std::uint32_t e) { return (e & m) == e; });
}

/// All nonempty balanced independent sets, as masks. Needs r*n <= 20.
inline std::vector<std::uint32_t> balanced_independent_sets(const PartiteHypergraph& h) {
  const Vertex n = h.balanced_size();
  const int r = h.num_parts();
  const unsigned total = static_cast<unsigned>(r) * n;
  auto edges = edge_masks(h);
  std::vector<std::uint32_t> out;
  for (std::uint32_t m = 1; m < (1u << total); ++m) {
    if (balanced_mask(m, r, n) && independent_mask(m, edges)) out.push_back(m);
  }
  return out;
}

inline std::size_t brute_alpha(const PartiteHypergraph& h) {
  std::size_t best = 0;
  for (auto m : balanced_independent_sets(h)) best = std::max<std::size_t>(best, std::popcount(m));
  return best;
}

/// Fewest balanced independent sets partitioning V, or nullopt. Exact cover
/// DP over vertex masks, always extending by a set containing the lowest
/// uncovered vertex.
inline std::optional<int> brute_chi(const PartiteHypergraph& h) {
  const Vertex n = h.balanced_size();
  const unsigned total = static_cast<unsigned>(h.num_parts()) * n;
  if (total == 0) return 0;
  auto sets = balanced_independent_sets(h);
  const std::uint32_t full = (1u << total) - 1;
  const int inf = std::numeric_limits<int>::max();
  std::vector<int> dp(static_cast<std::size_t>(full) + 1, inf);
  dp[0] = 0;
  for (std::uint32_t m = 0; m < full; ++m) {
    if (dp[m] == inf) continue;
    const std::uint32_t low = ~m & (m + 1);
    for (auto s : sets) {
      if ((s & low) && !(s & m)) dp[m | s] = std::min(dp[m | s], dp[m] + 1);
    }
  }
  if (dp[full] == inf) return std::nullopt;
  return dp[full];
}

/// Perfect matching by enumerating all n-subsets of edges.
inline bool brute_perfect_matching(const PartiteHypergraph& h) {
  const Vertex n = h.balanced_size();
  auto edges = edge_masks(h);
  const std::size_t m = edges.size();
  if (n == 0) return true;
  if (m < n) return false;
  std::vector<char> pick(m, 0);
  std::fill(pick.end() - n, pick.end(), 1);
  do {
    std::uint32_t cover = 0;
    bool disjoint = true;
    for (std::size_t i = 0; i < m && disjoint; ++i) {
      if (!pick[i]) continue;
      disjoint = (cover & edges[i]) == 0;
      cover |= edges[i];
    }
    if (disjoint) return true;
  } while (std::next_permutation(pick.begin(), pick.end()));
  return false;
}

/// Every valid tuple kept with probability p, using std::mt19937_64.
inline PartiteHypergraph random_graph(int r, Vertex n, double p, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::bernoulli_distribution coin(p);
  std::vector<Vertex> sizes(static_cast<std::size_t>(r), n);
  std::vector<Vertex> flat;
  std::vector<Vertex> t(static_cast<std::size_t>(r), 0);
  std::size_t space = 1;
  for (int i = 0; i < r; ++i) space *= n;
  for (std::size_t c = 0; c < space; ++c) {
    std::size_t x = c;
    for (int i = r - 1; i >= 0; --i) {
      t[static_cast<std::size_t>(i)] = static_cast<Vertex>(x % n);
      x /= n;
    }
    if (coin(gen)) flat.insert(flat.end(), t.begin(), t.end());
  }
  return PartiteHypergraph(sizes, std::move(flat));
}

/// The 2^(n^r) hypergraphs on an n-balanced r-partite vertex set.
inline std::vector<PartiteHypergraph> all_graphs(int r, Vertex n) {
  std::vector<Vertex> sizes(static_cast<std::size_t>(r), n);
  std::vector<std::vector<Vertex>> tuples;
  std::size_t space = 1;
  for (int i = 0; i < r; ++i) space *= n;
  for (std::size_t c = 0; c < space; ++c) {
    std::vector<Vertex> t(static_cast<std::size_t>(r));
    std::size_t x = c;
    for (int i = r - 1; i >= 0; --i) {
      t[static_cast<std::size_t>(i)] = static_cast<Vertex>(x % n);
      x /= n;
    }
    tuples.push_back(t);
  }
  std::vector<PartiteHypergraph> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << space); ++mask) {
    std::vector<std::vector<Vertex>> edges;
    for (std::size_t k = 0; k < space; ++k) {
      if (mask >> k & 1) edges.push_back(tuples[k]);
    }
    out.push_back(PartiteHypergraph::from_edges(sizes, edges));
  }
  return out;
}

/// Max number of edges through r-1 vertices from distinct parts, by brute force.
inline std::size_t brute_codegree(const PartiteHypergraph& h, int skip) {
  std::map<std::vector<Vertex>, std::size_t> count;
  for (std::size_t e = 0; e < h.num_edges(); ++e) {
    auto t = h.edge(e);
    std::vector<Vertex> key;
    for (int p = 0; p < h.num_parts(); ++p) {
      if (p != skip) key.push_back(t[static_cast<std::size_t>(p)]);
    }
    ++count[key];
  }
  std::size_t best = 0;
  for (const auto& [k, c] : count) best = std::max(best, c);
  return best;
}

inline std::size_t brute_max_codegree(const PartiteHypergraph& h) {
  std::size_t best = 0;
  for (int p = 0; p < h.num_parts(); ++p) best = std::max(best, brute_codegree(h, p));
  return best;
}

}  // namespace bhc_test

#endif
