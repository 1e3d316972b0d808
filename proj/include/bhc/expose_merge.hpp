#ifndef BHC_EXPOSE_MERGE_HPP
#define BHC_EXPOSE_MERGE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <vector>

#include "bhc/coloring.hpp"
#include "bhc/errors.hpp"
#include "bhc/greedy.hpp"
#include "bhc/hypergraph.hpp"
#include "bhc/random.hpp"

namespace bhc {

/// Parameter bundle of the expose-and-merge algorithm. The real-valued fields
/// are exact; the `*_rounded` fields are what the algorithm runs with and may
/// be adjusted by callers.
struct EMParams {
  Vertex n = 0;
  double d = 0.0;
  int r = 2;
  double eps = 0.0;
  double p = 0.0;

  double beta = 0.0;
  double xi = 0.0;
  double gamma = 0.0;
  double n_bar = 0.0;
  double d_bar = 0.0;
  double q_bar = 0.0;
  double T = 0.0;
  double k_fam = 0.0;
  double q = 0.0;

  /// T n_bar d_bar^(-xi/(r-1)) - n (1 - d^-gamma / 2); zero up to fp error.
  double coverage_residual = 0.0;
  /// q - T q_bar; nonnegative when the palette inequality holds.
  double palette_slack = 0.0;

  Vertex n_bar_rounded = 0;
  /// Vertices per iteration over all parts; a multiple of r.
  std::size_t k_fam_rounded = 0;
  int q_bar_rounded = 0;
  int T_rounded = 0;
  /// T_rounded * k_fam_rounded / r - n (1 - d^-gamma / 2)
  double rounded_coverage_drift = 0.0;
  /// T_rounded * q_bar_rounded <= q
  bool within_main_palette = false;

  int palette_bound() const { return T_rounded * q_bar_rounded; }
};

inline EMParams compute_params(Vertex n, double d, int r, double eps) {
  if (r < 2) throw parameter_error("r must be at least 2");
  if (n < static_cast<Vertex>(r)) throw parameter_error("n must be at least r");
  if (!(d >= 2.0)) throw parameter_error("d must be at least 2");
  if (!(eps > 0.0 && eps < 1.0)) throw parameter_error("eps must lie in (0, 1)");
  const double nr = static_cast<double>(n);
  const double rm1 = r - 1;
  EMParams e;
  e.n = n;
  e.d = d;
  e.r = r;
  e.eps = eps;
  e.p = d / std::pow(nr, rm1);
  if (e.p > 1.0) throw parameter_error("d exceeds n^(r-1)");
  e.beta = 5.0 * eps / (12.0 * rm1);
  e.xi = eps / 12.0;
  e.gamma = eps / (12.0 * r);
  e.n_bar = nr * std::pow(d, -e.beta);
  e.d_bar = std::pow(d, 1.0 - rm1 * e.beta);
  if (!(e.d_bar > 1.0)) throw parameter_error("d too small for eps, r (d_bar <= 1)");
  const double ratio = rm1 / r;
  e.q_bar = std::pow((1.0 + e.xi) * ratio * std::pow(e.d_bar, 1.0 - e.xi) / std::log(e.d_bar), 1.0 / rm1);
  const double cover = 1.0 - std::pow(d, -e.gamma) / 2.0;
  e.T = std::pow(d, e.beta) * std::pow(e.d_bar, e.xi / rm1) * cover;
  e.k_fam = r * e.n_bar * std::pow(e.d_bar, -e.xi / rm1);
  e.q = std::pow((1.0 + eps) * ratio * d / std::log(d), 1.0 / rm1);

  e.coverage_residual = e.T * e.n_bar * std::pow(e.d_bar, -e.xi / rm1) - nr * cover;
  e.palette_slack = e.q - e.T * e.q_bar;

  e.n_bar_rounded = static_cast<Vertex>(std::floor(e.n_bar));
  e.k_fam_rounded = static_cast<std::size_t>(r) * static_cast<std::size_t>(std::ceil(e.k_fam / r - 1e-9));
  e.q_bar_rounded = static_cast<int>(std::ceil(e.q_bar - 1e-9));
  e.T_rounded = static_cast<int>(std::ceil(e.T - 1e-9));
  e.rounded_coverage_drift = e.T_rounded * static_cast<double>(e.k_fam_rounded) / r - nr * cover;
  e.within_main_palette = e.palette_bound() <= e.q;
  return e;
}

/// One pass of the main loop.
struct EMIteration {
  /// A_{i,j}: sorted vertex indices per part.
  std::vector<std::vector<Vertex>> exposed;
  /// H_i on local indices (position k of part j is exposed[j][k]).
  PartiteHypergraph sample;
  /// Edges of H_i that were not already decided by an earlier region.
  std::size_t new_edges = 0;
  /// R_1^i .. R_q^i in global indices, before cleanup.
  std::vector<BalancedSubset> family;
  bool family_found = false;
  int attempts = 0;
};

struct EMOutcome {
  PartiteHypergraph graph;
  /// Partial coloring of `graph`: one color per surviving nonempty class.
  BalancedColoring coloring;
  double uncolored_fraction = 1.0;
  /// Edges of `graph` inside some class, counted per class.
  std::size_t conflicts = 0;
  bool failed = false;
  /// 0-based iteration whose family extraction failed.
  int fail_iteration = -1;
  std::vector<EMIteration> iterations;
  std::size_t final_exposure_edges = 0;
  std::size_t family_total = 0;
  std::size_t surviving_total = 0;
  int colors_used = 0;
  bool within_main_palette = false;
};

namespace detail {

inline constexpr std::uint64_t kFinalStream = ~std::uint64_t{0};

inline std::uint64_t em_stream(int iteration, int k) { return static_cast<std::uint64_t>(iteration) * 4 + static_cast<std::uint64_t>(k); }

// Bitmaps of the product regions A_{i,1} x ... x A_{i,r}.
class ExposedRegions {
 public:
  ExposedRegions(int r, Vertex n) : r_(r), n_(n) {}

  void add(const std::vector<std::vector<Vertex>>& a) {
    std::vector<std::vector<char>> bits(static_cast<std::size_t>(r_), std::vector<char>(n_, 0));
    for (int p = 0; p < r_; ++p) {
      for (Vertex v : a[static_cast<std::size_t>(p)]) bits[static_cast<std::size_t>(p)][v] = 1;
    }
    regions_.push_back(std::move(bits));
  }

  /// First region containing the tuple, or -1.
  int first_containing(std::span<const Vertex> t) const {
    for (std::size_t i = 0; i < regions_.size(); ++i) {
      bool inside = true;
      for (int p = 0; p < r_ && inside; ++p) inside = regions_[i][static_cast<std::size_t>(p)][t[static_cast<std::size_t>(p)]] != 0;
      if (inside) return static_cast<int>(i);
    }
    return -1;
  }

  std::size_t size() const { return regions_.size(); }

 private:
  int r_;
  Vertex n_;
  std::vector<std::vector<std::vector<char>>> regions_;
};

// Removes the r vertices of every edge of h inside a class, then trims parts
// to a common size by dropping the highest indices. Returns the edge count.
inline std::size_t clean_class(const PartiteHypergraph& h, BalancedSubset& cls) {
  auto sub = induced(h, cls);
  const std::size_t bad = sub.graph.num_edges();
  if (bad == 0) return 0;
  const int r = h.num_parts();
  std::vector<std::vector<char>> drop(static_cast<std::size_t>(r), std::vector<char>(sub.graph.part_size(0), 0));
  for (std::size_t e = 0; e < bad; ++e) {
    auto t = sub.graph.edge(e);
    for (int p = 0; p < r; ++p) drop[static_cast<std::size_t>(p)][t[static_cast<std::size_t>(p)]] = 1;
  }
  std::size_t keep = cls.size();
  for (int p = 0; p < r; ++p) {
    auto& part = cls.per_part[static_cast<std::size_t>(p)];
    std::vector<Vertex> kept;
    for (Vertex k = 0; k < part.size(); ++k) {
      if (!drop[static_cast<std::size_t>(p)][k]) kept.push_back(part[k]);
    }
    part = std::move(kept);
    keep = std::min(keep, part.size());
  }
  for (auto& part : cls.per_part) part.resize(keep);
  return bad;
}

inline bool em_logging() {
  const char* v = std::getenv("BHC_LOG");
  return v != nullptr && *v != '\0' && std::string(v) != "0";
}

// Main loop shared by the sampling and fixed-hypergraph variants. `expose`
// returns H_i on local indices for the given A sets.
inline EMOutcome expose_merge_core(const EMParams& params, std::uint64_t seed,
                                   const std::function<PartiteHypergraph(int, const std::vector<std::vector<Vertex>>&)>& expose) {
  const int r = params.r;
  const Vertex n = params.n;
  EMOutcome out;
  std::vector<std::vector<char>> used(static_cast<std::size_t>(r), std::vector<char>(n, 0));
  for (int i = 0; i < params.T_rounded; ++i) {
    Rng rng(derive_seed(seed, em_stream(i, 0)));
    EMIteration it;
    for (int p = 0; p < r; ++p) {
      std::vector<Vertex> pool;
      for (Vertex v = 0; v < n; ++v) {
        if (!used[static_cast<std::size_t>(p)][v]) pool.push_back(v);
      }
      it.exposed.push_back(choose_subset(std::move(pool), params.n_bar_rounded, rng));
    }
    it.sample = expose(i, it.exposed);
    auto fam = extract_family(it.sample, params.q_bar_rounded, params.k_fam_rounded, derive_seed(seed, em_stream(i, 2)));
    it.family_found = fam.success;
    it.attempts = fam.attempts;
    for (auto& set : fam.sets) {
      BalancedSubset global;
      for (int p = 0; p < r; ++p) {
        std::vector<Vertex> g;
        for (Vertex k : set.per_part[static_cast<std::size_t>(p)]) {
          g.push_back(it.exposed[static_cast<std::size_t>(p)][k]);
          used[static_cast<std::size_t>(p)][g.back()] = 1;
        }
        global.per_part.push_back(std::move(g));
      }
      out.family_total += global.total();
      it.family.push_back(std::move(global));
    }
    out.iterations.push_back(std::move(it));
    if (!fam.success) {
      out.failed = true;
      out.fail_iteration = i;
      break;
    }
  }
  return out;
}

}  // namespace detail

/**
 * Expose and merge on a fresh random hypergraph. Each iteration exposes an
 * n_bar-balanced set A_i of so far unused vertices, samples H_i on it, and
 * extracts q_bar disjoint balanced independent sets with k_fam vertices in
 * total. Edges of H_i inside an earlier region keep the earlier decision.
 * Tuples outside every region are exposed at the end with probability p, so
 * the merged hypergraph is a sample of H(r, n, p). Classes are then cleaned
 * of merged edges inside them.
 *
 * FAIL stops the loop but the exposure is still completed; the outcome then
 * has an empty coloring.
 */
inline EMOutcome run_expose_merge(const EMParams& params, std::uint64_t seed) {
  const int r = params.r;
  const Vertex n = params.n;
  const std::vector<Vertex> sizes(static_cast<std::size_t>(r), n);
  auto expose = [&](int i, const std::vector<std::vector<Vertex>>& a) {
    ModelParams mp{r, static_cast<Vertex>(a.front().size()), params.p, derive_seed(seed, detail::em_stream(i, 1)), std::nullopt};
    return sample(mp);
  };
  EMOutcome out = detail::expose_merge_core(params, seed, expose);
  const bool log = detail::em_logging();

  detail::ExposedRegions regions(r, n);
  std::vector<Vertex> flat;
  std::vector<Vertex> tuple(static_cast<std::size_t>(r));
  for (std::size_t i = 0; i < out.iterations.size(); ++i) {
    auto& it = out.iterations[i];
    for (std::size_t e = 0; e < it.sample.num_edges(); ++e) {
      auto t = it.sample.edge(e);
      for (int p = 0; p < r; ++p) tuple[static_cast<std::size_t>(p)] = it.exposed[static_cast<std::size_t>(p)][t[static_cast<std::size_t>(p)]];
      int earlier = regions.first_containing(tuple);
      if (earlier >= 0) continue;
      ++it.new_edges;
      flat.insert(flat.end(), tuple.begin(), tuple.end());
      if (log) {
        std::cerr << "bhc: edge";
        for (Vertex v : tuple) std::cerr << ' ' << v;
        std::cerr << " decided at iteration " << i << '\n';
      }
    }
    regions.add(it.exposed);
  }
  ModelParams final_mp{r, n, params.p, derive_seed(seed, detail::kFinalStream), std::nullopt};
  auto final_sample = sample(final_mp);
  for (std::size_t e = 0; e < final_sample.num_edges(); ++e) {
    auto t = final_sample.edge(e);
    if (regions.first_containing(t) >= 0) continue;
    ++out.final_exposure_edges;
    flat.insert(flat.end(), t.begin(), t.end());
    if (log) {
      std::cerr << "bhc: edge";
      for (Vertex v : t) std::cerr << ' ' << v;
      std::cerr << " decided at final exposure\n";
    }
  }
  out.graph = PartiteHypergraph(sizes, std::move(flat));
  out.coloring = BalancedColoring(out.graph);

  if (!out.failed) {
    int next = 0;
    for (auto& it : out.iterations) {
      for (auto cls : it.family) {
        out.conflicts += detail::clean_class(out.graph, cls);
        if (cls.size() == 0) continue;
        for (int p = 0; p < r; ++p) {
          for (Vertex v : cls.per_part[static_cast<std::size_t>(p)]) out.coloring.set({p, v}, next);
        }
        out.surviving_total += cls.total();
        ++next;
      }
    }
  }
  out.colors_used = out.coloring.colors_used();
  out.uncolored_fraction = n == 0 ? 0.0 : 1.0 - static_cast<double>(out.coloring.colored_count()) / (static_cast<double>(r) * n);
  out.within_main_palette = params.within_main_palette;
  return out;
}

/// Expose and merge against a given hypergraph: H_i is H[A_i], so every
/// extracted class is independent in H and no cleanup is needed. `graph` in
/// the outcome is left empty.
inline EMOutcome expose_merge_color(const PartiteHypergraph& h, const EMParams& params, std::uint64_t seed) {
  if (h.num_parts() != params.r || h.balanced_size() != params.n) throw input_error("hypergraph does not match the parameters");
  auto expose = [&](int, const std::vector<std::vector<Vertex>>& a) { return induced(h, BalancedSubset{a}).graph; };
  EMOutcome out = detail::expose_merge_core(params, seed, expose);
  out.coloring = BalancedColoring(h);
  if (!out.failed) {
    int next = 0;
    for (const auto& it : out.iterations) {
      for (const auto& cls : it.family) {
        if (cls.size() == 0) continue;
        for (int p = 0; p < params.r; ++p) {
          for (Vertex v : cls.per_part[static_cast<std::size_t>(p)]) out.coloring.set({p, v}, next);
        }
        out.surviving_total += cls.total();
        ++next;
      }
    }
  }
  out.colors_used = out.coloring.colors_used();
  out.uncolored_fraction = 1.0 - static_cast<double>(out.coloring.colored_count()) / (static_cast<double>(params.r) * params.n);
  out.within_main_palette = params.within_main_palette;
  return out;
}

}  // namespace bhc

#endif
