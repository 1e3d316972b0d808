#ifndef BHC_TRIPLE_REDUCTION_HPP
#define BHC_TRIPLE_REDUCTION_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "bhc/coloring.hpp"
#include "bhc/hypergraph.hpp"
#include "bhc/sparse_two_coloring.hpp"

namespace bhc {

/// Three color classes whose union spans fewer edges than its part size.
struct TripleReduction {
  int first = 0;
  int second = 0;
  int third = 0;
  std::size_t induced_edges = 0;
  /// |J_first ∩ V_1| + |J_second ∩ V_1| + |J_third ∩ V_1|
  std::size_t first_part_total = 0;
  bool applied = false;
};

namespace detail {

// Edge counts of H[J_i ∪ J_j ∪ J_k] for all triples, assembled from how many
// edges use exactly each set of one, two or three colors.
class TripleEdgeCounts {
 public:
  TripleEdgeCounts(const PartiteHypergraph& h, const BalancedColoring& phi)
      : q_(phi.num_colors()), single_(static_cast<std::size_t>(q_), 0),
        pair_(static_cast<std::size_t>(q_) * static_cast<std::size_t>(q_), 0) {
    std::vector<int> colors;
    for (std::size_t e = 0; e < h.num_edges(); ++e) {
      auto t = h.edge(e);
      colors.clear();
      bool uncolored = false;
      for (int p = 0; p < h.num_parts(); ++p) {
        int c = phi.color({p, t[static_cast<std::size_t>(p)]});
        uncolored |= c == kUncolored;
        colors.push_back(c);
      }
      if (uncolored) continue;
      std::sort(colors.begin(), colors.end());
      colors.erase(std::unique(colors.begin(), colors.end()), colors.end());
      if (colors.size() == 1) {
        ++single_[static_cast<std::size_t>(colors[0])];
      } else if (colors.size() == 2) {
        ++pair_[index(colors[0], colors[1])];
      } else if (colors.size() == 3) {
        ++triple_[(static_cast<std::uint64_t>(colors[0]) * static_cast<std::uint64_t>(q_) + static_cast<std::uint64_t>(colors[1])) * static_cast<std::uint64_t>(q_) +
                  static_cast<std::uint64_t>(colors[2])];
      }
    }
  }

  std::size_t pairwise(int i, int j, int k) const {
    return single_[static_cast<std::size_t>(i)] + single_[static_cast<std::size_t>(j)] + single_[static_cast<std::size_t>(k)] +
           pair_[index(i, j)] + pair_[index(i, k)] + pair_[index(j, k)];
  }

  std::size_t exact(int i, int j, int k) const {
    auto it = triple_.find((static_cast<std::uint64_t>(i) * static_cast<std::uint64_t>(q_) + static_cast<std::uint64_t>(j)) * static_cast<std::uint64_t>(q_) +
                           static_cast<std::uint64_t>(k));
    return it == triple_.end() ? 0 : it->second;
  }

 private:
  std::size_t index(int a, int b) const { return static_cast<std::size_t>(a) * static_cast<std::size_t>(q_) + static_cast<std::size_t>(b); }

  int q_;
  std::vector<std::size_t> single_;
  std::vector<std::size_t> pair_;
  std::unordered_map<std::uint64_t, std::size_t> triple_;
};

}  // namespace detail

/// Lexicographically first triple i < j < k with
/// |E(H[J_i ∪ J_j ∪ J_k])| < |J_i^(1)| + |J_j^(1)| + |J_k^(1)|.
inline std::optional<TripleReduction> find_reducible_triple(const PartiteHypergraph& h, const BalancedColoring& phi) {
  const int q = phi.num_colors();
  if (q < 3) return std::nullopt;
  std::vector<std::size_t> first(static_cast<std::size_t>(q), 0);
  for (int c : phi.part(0)) {
    if (c >= 0) ++first[static_cast<std::size_t>(c)];
  }
  detail::TripleEdgeCounts counts(h, phi);
  for (int i = 0; i < q; ++i) {
    for (int j = i + 1; j < q; ++j) {
      for (int k = j + 1; k < q; ++k) {
        const std::size_t size = first[static_cast<std::size_t>(i)] + first[static_cast<std::size_t>(j)] + first[static_cast<std::size_t>(k)];
        std::size_t edges = counts.pairwise(i, j, k);
        if (edges >= size) continue;
        edges += counts.exact(i, j, k);
        if (edges < size) return TripleReduction{i, j, k, edges, size, false};
      }
    }
  }
  return std::nullopt;
}

struct FkResult {
  BalancedColoring coloring;
  int initial_colors = 0;
  /// Applied reductions, in order.
  std::vector<TripleReduction> steps;
  /// Colors in use after each step.
  std::vector<int> colors_after;
};

/**
 * Greedy triple merging. While three classes span a sparse union, that union
 * is recolored with at most two classes by two_color_sparse. Remaining classes
 * keep their relative order and the new classes are appended. On exit either
 * at most two colors remain or every triple is dense, and then
 * q <= r(r-1)|E|/n + 1 by double counting edges over triples.
 */
inline FkResult fk_reduce(const PartiteHypergraph& h, const BalancedColoring& initial) {
  h.balanced_size();
  auto report = validate_coloring(h, initial, ValidationMode::total);
  if (!report.valid()) throw input_error("fk_reduce needs a valid total balanced coloring:\n" + report.describe(h));
  FkResult out;
  out.coloring = initial;
  out.coloring.compact();
  out.initial_colors = out.coloring.num_colors();
  const int r = h.num_parts();
  while (auto triple = find_reducible_triple(h, out.coloring)) {
    auto& phi = out.coloring;
    const int q = phi.num_colors();
    const int merged[3] = {triple->first, triple->second, triple->third};
    auto in_triple = [&](int c) { return c == merged[0] || c == merged[1] || c == merged[2]; };

    BalancedSubset uni;
    for (int p = 0; p < r; ++p) {
      std::vector<Vertex> idx;
      for (Vertex v = 0; v < h.part_size(p); ++v) {
        if (in_triple(phi.color({p, v}))) idx.push_back(v);
      }
      uni.per_part.push_back(std::move(idx));
    }
    auto sub = induced(h, uni);
    auto two = two_color_sparse(sub.graph);

    BalancedColoring next(h);
    for (int p = 0; p < r; ++p) {
      for (Vertex v = 0; v < h.part_size(p); ++v) {
        int c = phi.color({p, v});
        if (!in_triple(c)) next.set({p, v}, c - static_cast<int>(std::count_if(merged, merged + 3, [&](int m) { return m < c; })));
      }
      const auto& back = sub.to_parent[static_cast<std::size_t>(p)];
      for (Vertex local = 0; local < back.size(); ++local) next.set({p, back[local]}, q - 3 + two.color({p, local}));
    }
    triple->applied = true;
    phi = std::move(next);
    out.steps.push_back(*triple);
    out.colors_after.push_back(phi.num_colors());
  }
  return out;
}

}  // namespace bhc

#endif
