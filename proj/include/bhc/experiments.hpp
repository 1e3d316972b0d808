#ifndef BHC_EXPERIMENTS_HPP
#define BHC_EXPERIMENTS_HPP

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "bhc/coloring.hpp"
#include "bhc/expose_merge.hpp"
#include "bhc/greedy.hpp"
#include "bhc/hypergraph.hpp"
#include "bhc/iterative.hpp"
#include "bhc/random.hpp"

namespace bhc {

// Reference curves. `eps` may be negative to get the (1 - eps) side.

inline double q_main(double d, int r, double eps) {
  if (!(d > 1.0)) return std::numeric_limits<double>::quiet_NaN();
  return std::pow((1.0 + eps) * (r - 1.0) / r * d / std::log(d), 1.0 / (r - 1));
}

inline double alpha_ref(double n, double d, int r, double eps) {
  if (!(d > 1.0)) return std::numeric_limits<double>::quiet_NaN();
  return (1.0 + eps) * r * n * std::pow(r / (r - 1.0) * std::log(d) / d, 1.0 / (r - 1));
}

inline double fk_bound(int r, double d) { return std::max(2.0, r * (r - 1.0) * d + 1.0); }

struct ExperimentRecord {
  int r = 2;
  Vertex n = 0;
  double d = 0.0;
  double p = 0.0;
  double eps = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
  std::string algorithm;
  int colors_used = 0;
  std::size_t alpha_b_lower_bound = 0;
  double uncolored_fraction = 0.0;
  std::size_t conflict_count = 0;
  std::optional<double> wall_ms;
  bool valid = false;
  std::string note;

  double colors_over_q_main() const { return colors_used / q_main(d, r, 0.0); }
  double alpha_over_ref() const { return static_cast<double>(alpha_b_lower_bound) / alpha_ref(n, d, r, 0.0); }
};

inline constexpr const char* kCsvHeader =
    "r,n,d,p,eps,seed,trial,algorithm,colors_used,alpha_b_lower_bound,uncolored_fraction,conflict_count,wall_ms,valid,"
    "colors_over_q_main,alpha_lb_over_alpha_ref,note";

inline std::string format_number(double x) {
  if (!std::isfinite(x)) return "NA";
  std::ostringstream s;
  s << std::setprecision(10) << x;
  return s.str();
}

inline std::string csv_row(const ExperimentRecord& rec) {
  std::ostringstream s;
  std::string note = rec.note;
  std::replace(note.begin(), note.end(), ',', ';');
  std::replace(note.begin(), note.end(), '\n', ' ');
  s << rec.r << ',' << rec.n << ',' << format_number(rec.d) << ',' << format_number(rec.p) << ',' << format_number(rec.eps) << ','
    << rec.seed << ',' << rec.trial << ',' << rec.algorithm << ',' << rec.colors_used << ',' << rec.alpha_b_lower_bound << ','
    << format_number(rec.uncolored_fraction) << ',' << rec.conflict_count << ','
    << (rec.wall_ms ? format_number(*rec.wall_ms) : std::string("NA")) << ',' << (rec.valid ? "true" : "false") << ','
    << format_number(rec.colors_over_q_main()) << ',' << format_number(rec.alpha_over_ref()) << ',' << note;
  return s.str();
}

struct PipelineResult {
  BalancedColoring coloring;
  bool em_used = false;
  bool em_failed = false;
  int em_colors = 0;
  int greedy_colors = 0;
  int final_colors = 0;
  /// Greedy classes handed back because the remainder was too dense.
  int returned_classes = 0;
  std::string failure;
};

/**
 * Constructive coloring of a sparse n-balanced hypergraph of average degree d:
 * expose and merge on H itself (dropped if it fails), greedy classes until
 * at most floor(n/d) vertices per part are left, then the remainder by
 * degree+fk. If the remainder's (r-1)-codegree exceeds half its size, greedy
 * classes are returned to it one at a time, newest first; as a last resort
 * greedy colors everything.
 */
inline PipelineResult constructive_color(const PartiteHypergraph& h, double d, double eps, std::uint64_t seed) {
  const Vertex n = h.balanced_size();
  const int r = h.num_parts();
  PipelineResult out;
  out.coloring = BalancedColoring(h);
  if (n == 0) return out;

  std::optional<EMParams> params;
  try {
    params = compute_params(n, d, r, eps);
  } catch (const parameter_error&) {
  }
  if (params && params->n_bar_rounded > 0) {
    out.em_used = true;
    auto em = expose_merge_color(h, *params, derive_seed(seed, 0));
    out.em_failed = em.failed;
    if (!em.failed) {
      out.coloring = std::move(em.coloring);
      out.em_colors = out.coloring.num_colors();
    }
  }

  const Vertex threshold = static_cast<Vertex>(std::floor(n / std::max(d, 1.0) + 1e-9));
  Rng rng(derive_seed(seed, 1));
  const int before = out.coloring.num_colors();
  greedy_extend(h, out.coloring, {std::numeric_limits<int>::max(), threshold}, rng);
  out.greedy_colors = out.coloring.num_colors() - before;

  for (;;) {
    BalancedSubset rest;
    for (int p = 0; p < r; ++p) {
      std::vector<Vertex> idx;
      for (Vertex v = 0; v < n; ++v) {
        if (!out.coloring.is_colored({p, v})) idx.push_back(v);
      }
      rest.per_part.push_back(std::move(idx));
    }
    if (rest.size() == 0) break;
    auto sub = induced(h, rest);
    std::optional<BalancedColoring> phi;
    try {
      phi = color_by_degree_and_reduce(sub.graph);
    } catch (const resource_error&) {
    }
    if (phi) {
      out.final_colors = detail::append_classes(out.coloring, sub, std::move(*phi));
      break;
    }
    const int last = out.coloring.num_colors() - 1;
    if (out.returned_classes < out.greedy_colors) {
      for (int p = 0; p < r; ++p) {
        for (Vertex v = 0; v < n; ++v) {
          if (out.coloring.color({p, v}) == last) out.coloring.clear({p, v});
        }
      }
      out.coloring.compact();
      ++out.returned_classes;
      continue;
    }
    Rng finish(derive_seed(seed, 2));
    const int at = out.coloring.num_colors();
    greedy_extend(h, out.coloring, {}, finish);
    out.final_colors = out.coloring.num_colors() - at;
    if (!out.coloring.is_total()) out.failure = "greedy stalled with vertices left";
    break;
  }
  out.coloring.compact();
  return out;
}

struct SweepConfig {
  int r = 2;
  Vertex n = 100;
  double eps = 0.5;
  std::vector<double> d_list;
  int trials = 1;
  std::uint64_t seed = 0;
  int jobs = 1;
  /// pipeline, heuristic or em
  std::string algorithm = "pipeline";
  bool timing = false;
};

inline std::uint64_t trial_seed(std::uint64_t seed, std::uint64_t trial) { return derive_seed(seed, trial); }

/// One row of a sweep, reproducible from (config, d, trial seed) alone.
inline ExperimentRecord run_trial(const SweepConfig& cfg, double d, std::uint64_t trial, std::uint64_t tseed) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentRecord rec;
  rec.r = cfg.r;
  rec.n = cfg.n;
  rec.d = d;
  rec.eps = cfg.eps;
  rec.seed = tseed;
  rec.trial = trial;
  rec.algorithm = cfg.algorithm;
  try {
    if (cfg.algorithm == "em") {
      auto params = compute_params(cfg.n, d, cfg.r, cfg.eps);
      rec.p = params.p;
      auto em = run_expose_merge(params, tseed);
      rec.colors_used = em.colors_used;
      rec.uncolored_fraction = em.uncolored_fraction;
      rec.conflict_count = em.conflicts;
      rec.alpha_b_lower_bound = greedy_balanced_independent_set(em.graph, derive_seed(tseed, 2)).total();
      rec.valid = validate_coloring(em.graph, em.coloring, ValidationMode::partial).valid();
      if (em.failed) rec.note = "FAIL at iteration " + std::to_string(em.fail_iteration);
    } else {
      auto model = ModelParams::from_degree(cfg.r, cfg.n, d, tseed);
      rec.p = model.p;
      auto h = sample(model);
      rec.alpha_b_lower_bound = greedy_balanced_independent_set(h, derive_seed(tseed, 2)).total();
      BalancedColoring phi;
      if (cfg.algorithm == "pipeline") {
        auto res = constructive_color(h, d, cfg.eps, derive_seed(tseed, 1));
        phi = std::move(res.coloring);
        rec.note = res.failure;
      } else if (cfg.algorithm == "heuristic") {
        auto res = heuristic_balanced_color(h, std::numeric_limits<int>::max(), derive_seed(tseed, 1));
        phi = std::move(res.coloring);
        if (!res.success) rec.note = "greedy stalled with vertices left";
      } else {
        throw input_error("unknown sweep algorithm: " + cfg.algorithm);
      }
      rec.colors_used = phi.colors_used();
      rec.uncolored_fraction = 1.0 - static_cast<double>(phi.colored_count()) / static_cast<double>(phi.vertex_count());
      rec.valid = validate_coloring(h, phi, ValidationMode::total).valid();
    }
  } catch (const input_error&) {
    throw;
  } catch (const std::exception& e) {
    rec.valid = false;
    rec.note = e.what();
  }
  if (cfg.timing) rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

/// All trials of a sweep in (d, trial) order. Trial k uses
/// derive_seed(seed, k) with k = d_index * trials + t.
inline std::vector<ExperimentRecord> run_sweep(const SweepConfig& cfg) {
  if (cfg.trials < 0) throw input_error("trials must be nonnegative");
  if (cfg.algorithm != "pipeline" && cfg.algorithm != "heuristic" && cfg.algorithm != "em") {
    throw input_error("unknown sweep algorithm: " + cfg.algorithm);
  }
  const std::size_t total = cfg.d_list.size() * static_cast<std::size_t>(cfg.trials);
  std::vector<ExperimentRecord> rows(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < total; k = next++) {
      const double d = cfg.d_list[k / static_cast<std::size_t>(cfg.trials)];
      rows[k] = run_trial(cfg, d, k, trial_seed(cfg.seed, k));
    }
  };
  const int jobs = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(std::max<std::size_t>(total, 1))));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return rows;
}

inline void write_csv(std::ostream& out, const std::vector<ExperimentRecord>& rows) {
  out << kCsvHeader << '\n';
  for (const auto& row : rows) out << csv_row(row) << '\n';
}

}  // namespace bhc

#endif
