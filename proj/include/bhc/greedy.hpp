#ifndef BHC_GREEDY_HPP
#define BHC_GREEDY_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "bhc/coloring.hpp"
#include "bhc/hypergraph.hpp"
#include "bhc/random.hpp"

namespace bhc {

/**
 * Grows balanced independent sets one r-tuple at a time. A sweep visits the
 * parts in order and takes, from each part, the next candidate in that part's
 * order which does not complete an edge with the set built so far. A
 * sweep that cannot place a vertex in some part is discarded and growth stops.
 *
 * Per-edge counters of in-set vertices make each candidate test O(1): once an
 * edge holds r-1 set vertices its last vertex is marked blocked.
 */
class BalancedSetGrower {
 public:
  explicit BalancedSetGrower(const PartiteHypergraph& h)
      : h_(h), edge_fill_(h.num_edges(), 0), blocked_(h.num_vertices(), 0), in_set_(h.num_vertices(), 0) {}

  /// `order[p]` lists the candidate indices of part p in scan order.
  std::vector<std::vector<Vertex>> grow(const std::vector<std::vector<Vertex>>& order) {
    const int r = h_.num_parts();
    std::vector<std::vector<Vertex>> chosen(static_cast<std::size_t>(r));
    std::vector<std::size_t> cursor(static_cast<std::size_t>(r), 0);
    std::vector<Vertex> sweep;
    for (;;) {
      sweep.clear();
      bool complete = true;
      for (int p = 0; p < r && complete; ++p) {
        const auto& cand = order[static_cast<std::size_t>(p)];
        auto& at = cursor[static_cast<std::size_t>(p)];
        while (at < cand.size() && !usable({p, cand[at]})) ++at;
        if (at == cand.size()) {
          complete = false;
          break;
        }
        add({p, cand[at]});
        sweep.push_back(cand[at]);
        ++at;
      }
      if (!complete) break;
      for (int p = 0; p < r; ++p) chosen[static_cast<std::size_t>(p)].push_back(sweep[static_cast<std::size_t>(p)]);
    }
    reset();
    for (auto& c : chosen) std::sort(c.begin(), c.end());
    return chosen;
  }

 private:
  bool usable(VertexRef v) const {
    std::size_t g = h_.global_index(v);
    return !in_set_[g] && blocked_[g] == 0;
  }

  void add(VertexRef v) {
    const int r = h_.num_parts();
    std::size_t g = h_.global_index(v);
    in_set_[g] = 1;
    touched_vertices_.push_back(g);
    for (EdgeId e : h_.incident_edges(v)) {
      if (edge_fill_[e]++ == 0) touched_edges_.push_back(e);
      if (edge_fill_[e] == static_cast<std::uint32_t>(r - 1)) {
        auto t = h_.edge(e);
        for (int p = 0; p < r; ++p) {
          std::size_t w = h_.global_index({p, t[static_cast<std::size_t>(p)]});
          if (!in_set_[w]) {
            if (blocked_[w]++ == 0) touched_vertices_.push_back(w);
            break;
          }
        }
      }
    }
  }

  void reset() {
    for (EdgeId e : touched_edges_) edge_fill_[e] = 0;
    for (std::size_t g : touched_vertices_) {
      blocked_[g] = 0;
      in_set_[g] = 0;
    }
    touched_edges_.clear();
    touched_vertices_.clear();
  }

  const PartiteHypergraph& h_;
  std::vector<std::uint32_t> edge_fill_;
  std::vector<std::uint32_t> blocked_;
  std::vector<char> in_set_;
  std::vector<EdgeId> touched_edges_;
  std::vector<std::size_t> touched_vertices_;
};

namespace detail {

inline std::vector<std::vector<Vertex>> shuffled_uncolored(const BalancedColoring& phi, Rng& rng) {
  std::vector<std::vector<Vertex>> order(static_cast<std::size_t>(phi.num_parts()));
  for (int p = 0; p < phi.num_parts(); ++p) {
    for (Vertex v = 0; v < phi.part_size(p); ++v) {
      if (!phi.is_colored({p, v})) order[static_cast<std::size_t>(p)].push_back(v);
    }
    shuffle(order[static_cast<std::size_t>(p)], rng);
  }
  return order;
}

inline Vertex min_uncolored(const BalancedColoring& phi) {
  Vertex best = std::numeric_limits<Vertex>::max();
  for (int p = 0; p < phi.num_parts(); ++p) {
    best = std::min(best, static_cast<Vertex>(std::count(phi.part(p).begin(), phi.part(p).end(), kUncolored)));
  }
  return phi.num_parts() == 0 ? 0 : best;
}

// Degrees in the hypergraph induced by the uncolored vertices, kept current
// as vertices get colored.
class RemainingDegrees {
 public:
  RemainingDegrees(const PartiteHypergraph& h, const BalancedColoring& phi)
      : h_(h), live_(h.num_edges(), 1), degree_(h.num_vertices(), 0) {
    for (std::size_t e = 0; e < h.num_edges(); ++e) {
      auto t = h.edge(e);
      for (int p = 0; p < h.num_parts(); ++p) live_[e] &= !phi.is_colored({p, t[static_cast<std::size_t>(p)]});
      if (!live_[e]) continue;
      for (int p = 0; p < h.num_parts(); ++p) ++degree_[h.global_index({p, t[static_cast<std::size_t>(p)]})];
    }
  }

  void colored(VertexRef v) {
    for (EdgeId e : h_.incident_edges(v)) {
      if (!live_[e]) continue;
      live_[e] = 0;
      auto t = h_.edge(e);
      for (int p = 0; p < h_.num_parts(); ++p) --degree_[h_.global_index({p, t[static_cast<std::size_t>(p)]})];
    }
  }

  /// Uncolored vertices per part, highest remaining degree first, ties in random order.
  std::vector<std::vector<Vertex>> order(const BalancedColoring& phi, Rng& rng) const {
    auto order = shuffled_uncolored(phi, rng);
    for (int p = 0; p < phi.num_parts(); ++p) {
      std::stable_sort(order[static_cast<std::size_t>(p)].begin(), order[static_cast<std::size_t>(p)].end(), [&](Vertex a, Vertex b) {
        return degree_[h_.global_index({p, a})] > degree_[h_.global_index({p, b})];
      });
    }
    return order;
  }

 private:
  const PartiteHypergraph& h_;
  std::vector<char> live_;
  std::vector<std::size_t> degree_;
};

}  // namespace detail

enum class GreedyOrder {
  /// uniformly random scan order
  random,
  /// highest degree among uncolored vertices first, random ties
  high_degree_first,
};

struct GreedyLimits {
  /// Stop after adding this many classes.
  int max_new_colors = std::numeric_limits<int>::max();
  /// Stop once at most this many vertices per part are uncolored.
  Vertex stop_at_remaining = 0;
  GreedyOrder order = GreedyOrder::high_degree_first;
};

/// Extends a partial coloring with fresh greedy classes numbered from
/// phi.num_colors(). Returns the number of classes added; stops early when
/// no nonempty balanced independent set can be grown.
inline int greedy_extend(const PartiteHypergraph& h, BalancedColoring& phi, const GreedyLimits& limits, Rng& rng) {
  BalancedSetGrower grower(h);
  std::optional<detail::RemainingDegrees> degrees;
  if (limits.order == GreedyOrder::high_degree_first) degrees.emplace(h, phi);
  int added = 0;
  while (added < limits.max_new_colors) {
    if (detail::min_uncolored(phi) <= limits.stop_at_remaining) break;
    auto cls = grower.grow(degrees ? degrees->order(phi, rng) : detail::shuffled_uncolored(phi, rng));
    if (cls.front().empty()) break;
    const int c = phi.num_colors();
    for (int p = 0; p < h.num_parts(); ++p) {
      for (Vertex v : cls[static_cast<std::size_t>(p)]) {
        phi.set({p, v}, c);
        if (degrees) degrees->colored({p, v});
      }
    }
    ++added;
  }
  return added;
}

struct HeuristicResult {
  /// Valid on its colored vertices even when `success` is false.
  BalancedColoring coloring;
  bool success = false;
};

/// Randomized greedy balanced coloring within a palette budget; each class
/// scans high remaining degree first.
inline HeuristicResult heuristic_balanced_color(const PartiteHypergraph& h, int palette_budget, std::uint64_t seed) {
  h.balanced_size();
  HeuristicResult out{BalancedColoring(h), false};
  Rng rng(seed);
  greedy_extend(h, out.coloring, {palette_budget, 0}, rng);
  out.success = out.coloring.is_total();
  return out;
}

/// One greedily grown balanced independent set over all vertices; a lower
/// bound witness for the balanced independence number.
inline BalancedSubset greedy_balanced_independent_set(const PartiteHypergraph& h, std::uint64_t seed) {
  Rng rng(seed);
  BalancedSetGrower grower(h);
  return BalancedSubset{grower.grow(detail::shuffled_uncolored(BalancedColoring(h), rng))};
}

struct FamilyResult {
  bool success = false;
  /// Pairwise disjoint balanced independent sets, trimmed to the target total.
  std::vector<BalancedSubset> sets;
  int attempts = 0;
};

/**
 * `count` disjoint balanced independent sets with `total_target` vertices in
 * all, by restarting the greedy grower with fresh randomness up to
 * `attempt_budget` times. Surplus r-tuples are dropped from the last sets,
 * highest indices first, so the total hits the target exactly when it is a
 * multiple of r.
 */
inline FamilyResult extract_family(const PartiteHypergraph& h, int count, std::size_t total_target, std::uint64_t seed,
                                   int attempt_budget = 50) {
  const Vertex n = h.balanced_size();
  const std::size_t r = static_cast<std::size_t>(h.num_parts());
  FamilyResult out;
  if (total_target > r * n || (count <= 0 && total_target > 0)) return out;
  for (int a = 0; a < attempt_budget; ++a) {
    ++out.attempts;
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(a)));
    BalancedColoring phi(h);
    greedy_extend(h, phi, {count, 0, GreedyOrder::random}, rng);
    if (phi.colored_count() < total_target) continue;
    std::vector<BalancedSubset> sets;
    for (int c = 0; c < count; ++c) sets.push_back(BalancedSubset{phi.color_class(c)});
    std::size_t total = phi.colored_count();
    for (auto it = sets.rbegin(); it != sets.rend() && total >= total_target + r; ++it) {
      while (it->size() > 0 && total >= total_target + r) {
        for (auto& part : it->per_part) part.pop_back();
        total -= r;
      }
    }
    out.sets = std::move(sets);
    out.success = true;
    return out;
  }
  return out;
}

}  // namespace bhc

#endif
