#ifndef BHC_ITERATIVE_HPP
#define BHC_ITERATIVE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "bhc/coloring.hpp"
#include "bhc/greedy.hpp"
#include "bhc/hypergraph.hpp"
#include "bhc/matching_coloring.hpp"
#include "bhc/random.hpp"
#include "bhc/triple_reduction.hpp"

namespace bhc {

/// Round sizes and palette budgets of the peel-and-color loop.
struct PeelSchedule {
  int r = 2;
  double d = 2.0;
  double eps = 0.5;
  double delta = 0.0;
  Vertex ambient_n = 0;

  static PeelSchedule make(int r, double d, double eps, Vertex ambient_n) {
    if (r < 2) throw parameter_error("r must be at least 2");
    if (!(d >= 2.0)) throw parameter_error("d must be at least 2");
    if (!(eps > 0.0 && eps < 1.0)) throw parameter_error("eps must lie in (0, 1)");
    return {r, d, eps, eps * (1.0 - eps) / (r - 1), ambient_n};
  }

  /// Vertices per part carried to the next round: ceil(s d^(-delta/2)).
  Vertex peel_count(Vertex s) const {
    return static_cast<Vertex>(std::ceil(static_cast<double>(s) * std::pow(d, -delta / 2.0) - 1e-9));
  }
  int round_palette() const { return static_cast<int>(std::ceil(std::pow(d, (1.0 - delta / 2.0) / (r - 1)) - 1e-9)); }
  int final_palette() const { return static_cast<int>(std::ceil(r * r * std::log(d) - 1e-9)); }
  int max_rounds() const { return static_cast<int>(std::ceil((1.0 - eps) * std::log(d) - 1e-9)); }
  /// floor(n / d): sets this small go to the final stage.
  Vertex final_threshold() const { return static_cast<Vertex>(std::floor(ambient_n / d + 1e-9)); }
  /// floor(n / d^eps): largest admissible starting size.
  Vertex start_threshold() const { return static_cast<Vertex>(std::floor(ambient_n / std::pow(d, eps) + 1e-9)); }
  /// max_rounds * round_palette + final_palette.
  long budget_sum() const { return static_cast<long>(max_rounds()) * round_palette() + final_palette(); }
};

/// Pipeline for hypergraphs with small (r-1)-codegree: a
/// matching-derived coloring compressed by triple merging. nullopt when
/// 2 Delta_{r-1} > n.
inline std::optional<BalancedColoring> color_by_degree_and_reduce(const PartiteHypergraph& h, const OracleBudget& budget = {}) {
  const Vertex n = h.balanced_size();
  if (n == 0) return BalancedColoring(h);
  if (2 * max_codegree(h, h.num_parts() - 1) > n) return std::nullopt;
  return fk_reduce(h, colorability_by_degree(h, budget)).coloring;
}

struct RoundReport {
  Vertex size = 0;
  Vertex peeled = 0;
  int palette = 0;
  int colors_used = 0;
  /// "greedy", "degree+fk (remainder)", "degree+fk" or "edgeless".
  std::string method;
};

struct FinalStageReport {
  bool reached = false;
  Vertex size = 0;
  std::size_t max_codegree = 0;
  std::size_t edges = 0;
  int colors_used = 0;
  int palette = 0;
};

struct IterativeOptions {
  double d = 2.0;
  double eps = 0.5;
  /// n of the ambient hypergraph; defaults to H's part size.
  std::optional<Vertex> ambient_n;
  std::uint64_t seed = 0;
  OracleBudget budget{std::uint64_t{1'000'000}, std::nullopt};
};

struct IterativeResult {
  /// Coloring of H restricted to U, in H's indexing. Valid on its colored
  /// domain even on failure.
  BalancedColoring coloring;
  bool success = false;
  std::string failure;
  PeelSchedule schedule;
  std::vector<RoundReport> rounds;
  FinalStageReport final_stage;
  int colors_used = 0;
  bool exceeded_round_cap = false;
};

namespace detail {

// Appends the classes of `local` (a coloring of sub = H[current]) to `out`
// under fresh color ids.
inline int append_classes(BalancedColoring& out, const InducedSubgraph& sub, BalancedColoring local) {
  local.compact();
  const int base = out.num_colors();
  for (int p = 0; p < sub.graph.num_parts(); ++p) {
    const auto& back = sub.to_parent[static_cast<std::size_t>(p)];
    for (Vertex v = 0; v < back.size(); ++v) {
      int c = local.color({p, v});
      if (c != kUncolored) out.set({p, back[v]}, base + c);
    }
  }
  return local.num_colors();
}

// Per-part indices (local to sub) of the k highest-degree vertices, ties to
// the lower index.
inline std::vector<std::vector<Vertex>> highest_degree(const PartiteHypergraph& sub, Vertex k) {
  std::vector<std::vector<Vertex>> out;
  for (int p = 0; p < sub.num_parts(); ++p) {
    std::vector<Vertex> idx(sub.part_size(p));
    std::iota(idx.begin(), idx.end(), Vertex{0});
    std::stable_sort(idx.begin(), idx.end(), [&](Vertex a, Vertex b) { return degree(sub, {p, a}) > degree(sub, {p, b}); });
    idx.resize(std::min<std::size_t>(k, idx.size()));
    std::sort(idx.begin(), idx.end());
    out.push_back(std::move(idx));
  }
  return out;
}

}  // namespace detail

/**
 * Peel-and-color. While the current s-balanced set is larger than n/d, the
 * ceil(s d^(-delta/2)) highest-degree vertices per part are set aside for the
 * next round and the rest is colored with a fresh palette of
 * ceil(d^((1-delta/2)/(r-1))) colors: greedy first, then degree+fk on what
 * greedy left, then degree+fk on the whole rest. The final small set must
 * satisfy Delta_{r-1} <= s/2; it is colored by degree+fk within
 * ceil(r^2 ln d) colors.
 */
inline IterativeResult iterative_sparse_color(const PartiteHypergraph& h, const BalancedSubset& u, const IterativeOptions& opt) {
  const Vertex n = h.balanced_size();
  IterativeResult out;
  out.schedule = PeelSchedule::make(h.num_parts(), opt.d, opt.eps, opt.ambient_n.value_or(n));
  out.coloring = BalancedColoring(h);
  const auto& sched = out.schedule;
  const int r = h.num_parts();

  if (static_cast<int>(u.per_part.size()) != r) throw input_error("subset has the wrong number of parts");
  std::vector<std::vector<Vertex>> current = u.per_part;
  auto fail = [&](std::string why) {
    out.failure = std::move(why);
    out.colors_used = out.coloring.colors_used();
    return out;
  };

  for (int round = 0;; ++round) {
    auto sub = induced(h, BalancedSubset{current});
    const Vertex s = sub.graph.balanced_size();
    if (s == 0) break;
    if (sub.graph.num_edges() == 0) {
      BalancedColoring one(sub.graph);
      for (int p = 0; p < r; ++p) {
        for (Vertex v = 0; v < s; ++v) one.set({p, v}, 0);
      }
      detail::append_classes(out.coloring, sub, one);
      out.rounds.push_back({s, 0, 1, 1, "edgeless"});
      break;
    }
    const Vertex keep = sched.peel_count(s);
    if (s <= sched.final_threshold() || keep >= s) {
      auto& fin = out.final_stage;
      fin = {true, s, max_codegree(sub.graph, r - 1), sub.graph.num_edges(), 0, sched.final_palette()};
      if (2 * fin.max_codegree > s) {
        return fail("final stage: max (r-1)-codegree " + std::to_string(fin.max_codegree) + " exceeds s/2 at s = " +
                    std::to_string(s));
      }
      auto phi = color_by_degree_and_reduce(sub.graph, opt.budget);
      fin.colors_used = phi->num_colors();
      if (fin.colors_used > fin.palette) {
        return fail("final stage needs " + std::to_string(fin.colors_used) + " colors, budget " + std::to_string(fin.palette));
      }
      detail::append_classes(out.coloring, sub, std::move(*phi));
      break;
    }

    auto peeled = detail::highest_degree(sub.graph, keep);
    std::vector<std::vector<Vertex>> rest_local(static_cast<std::size_t>(r));
    for (int p = 0; p < r; ++p) {
      const auto& pl = peeled[static_cast<std::size_t>(p)];
      for (Vertex v = 0; v < s; ++v) {
        if (!std::binary_search(pl.begin(), pl.end(), v)) rest_local[static_cast<std::size_t>(p)].push_back(v);
      }
    }
    auto rest = induced(sub.graph, BalancedSubset{rest_local});
    const int palette = sched.round_palette();

    Rng rng(derive_seed(opt.seed, static_cast<std::uint64_t>(round)));
    BalancedColoring local(rest.graph);
    greedy_extend(rest.graph, local, {palette, 0}, rng);
    std::string method = "greedy";
    if (!local.is_total()) {
      // degree+fk on the part greedy left uncolored
      BalancedSubset left;
      bool balanced = true;
      for (int p = 0; p < r; ++p) {
        std::vector<Vertex> idx;
        for (Vertex v = 0; v < rest.graph.part_size(p); ++v) {
          if (!local.is_colored({p, v})) idx.push_back(v);
        }
        left.per_part.push_back(std::move(idx));
        balanced &= left.per_part.back().size() == left.per_part.front().size();
      }
      std::optional<BalancedColoring> best;
      if (balanced) {
        auto tail = induced(rest.graph, left);
        if (auto phi = color_by_degree_and_reduce(tail.graph, opt.budget);
            phi && local.num_colors() + phi->num_colors() <= palette) {
          BalancedColoring merged = local;
          for (int p = 0; p < r; ++p) {
            const auto& back = tail.to_parent[static_cast<std::size_t>(p)];
            for (Vertex v = 0; v < back.size(); ++v) merged.set({p, back[v]}, local.num_colors() + phi->color({p, v}));
          }
          best = std::move(merged);
          method = "degree+fk (remainder)";
        }
      }
      if (auto phi = color_by_degree_and_reduce(rest.graph, opt.budget);
          phi && phi->num_colors() <= palette && (!best || phi->num_colors() < best->num_colors())) {
        best = std::move(*phi);
        method = "degree+fk";
      }
      if (!best) {
        // keep the valid partial classes for inspection
        BalancedColoring partial(sub.graph);
        for (int p = 0; p < r; ++p) {
          for (Vertex v = 0; v < rest.graph.part_size(p); ++v) {
            int c = local.color({p, v});
            if (c != kUncolored) partial.set({p, rest.to_parent[static_cast<std::size_t>(p)][v]}, c);
          }
        }
        detail::append_classes(out.coloring, sub, std::move(partial));
        return fail("round " + std::to_string(round) + " at s = " + std::to_string(s) + ": no coloring within palette " +
                    std::to_string(palette));
      }
      local = std::move(*best);
    }

    BalancedColoring lifted(sub.graph);
    for (int p = 0; p < r; ++p) {
      for (Vertex v = 0; v < rest.graph.part_size(p); ++v) {
        lifted.set({p, rest.to_parent[static_cast<std::size_t>(p)][v]}, local.color({p, v}));
      }
    }
    int used = detail::append_classes(out.coloring, sub, std::move(lifted));
    out.rounds.push_back({s, keep, palette, used, method});

    std::vector<std::vector<Vertex>> next(static_cast<std::size_t>(r));
    for (int p = 0; p < r; ++p) {
      for (Vertex v : peeled[static_cast<std::size_t>(p)]) next[static_cast<std::size_t>(p)].push_back(sub.to_parent[static_cast<std::size_t>(p)][v]);
    }
    current = std::move(next);
  }

  out.exceeded_round_cap = static_cast<int>(out.rounds.size()) > sched.max_rounds();
  out.success = true;
  out.colors_used = out.coloring.colors_used();
  return out;
}

}  // namespace bhc

#endif
