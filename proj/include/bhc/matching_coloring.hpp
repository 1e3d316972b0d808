#ifndef BHC_MATCHING_COLORING_HPP
#define BHC_MATCHING_COLORING_HPP

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "bhc/coloring.hpp"
#include "bhc/hypergraph.hpp"
#include "bhc/oracles.hpp"

namespace bhc {

/// Turns a perfect matching of the complement into an n-coloring: class i is
/// the vertex set of the i-th matching edge (edges taken in sorted order).
inline BalancedColoring matching_to_coloring(const PartiteHypergraph& h, std::vector<std::vector<Vertex>> matching) {
  const Vertex n = h.balanced_size();
  const int r = h.num_parts();
  if (matching.size() != n) throw input_error("matching must have exactly n edges");
  std::sort(matching.begin(), matching.end());
  BalancedColoring phi(h);
  for (std::size_t i = 0; i < matching.size(); ++i) {
    const auto& t = matching[i];
    if (t.size() != static_cast<std::size_t>(r)) throw input_error("matching edge has the wrong arity");
    for (int p = 0; p < r; ++p) {
      VertexRef v{p, t[static_cast<std::size_t>(p)]};
      if (!h.valid(v)) throw input_error("matching edge leaves the vertex set");
      if (phi.is_colored(v)) throw input_error("matching edges are not disjoint");
      phi.set(v, static_cast<int>(i));
    }
    if (h.contains(t)) throw input_error("matching edge is an edge of H, not of its complement");
  }
  return phi;
}

/**
 * Coloring for hypergraphs with max (r-1)-codegree at most n/2. The complement
 * then has min (r-1)-codegree at least n/2, which forces a perfect matching; the
 * matching is found by backtracking and converted to n color classes.
 */
inline BalancedColoring colorability_by_degree(const PartiteHypergraph& h, const OracleBudget& budget = {},
                                               std::uint64_t cap = kDefaultComplementCap) {
  const Vertex n = h.balanced_size();
  if (n == 0) return BalancedColoring(h);
  const std::size_t codeg = max_codegree(h, h.num_parts() - 1);
  if (2 * codeg > n) {
    throw input_error("max (r-1)-codegree " + std::to_string(codeg) + " exceeds n/2 = " + std::to_string(n / 2.0));
  }
  auto res = complement_matching(h, budget, cap);
  if (res.verdict == Verdict::unknown) throw resource_error("matching search exhausted its budget");
  if (res.verdict == Verdict::no) throw std::logic_error("no perfect matching although min codegree is at least n/2");
  return matching_to_coloring(h, std::move(res.matching));
}

}  // namespace bhc

#endif
