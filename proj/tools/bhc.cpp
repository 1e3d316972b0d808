// bhc: generate, color and verify balanced colorings of r-partite hypergraphs.
#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "bhc/bhc.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitResource = 2;
constexpr int kExitVerify = 3;

bhc::PartiteHypergraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw bhc::input_error("cannot open " + path);
  return bhc::read_hpg(in);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw bhc::input_error("cannot write " + path);
  return out;
}

bhc::OracleBudget make_budget(std::optional<std::uint64_t> nodes, std::optional<double> secs) { return {nodes, secs}; }

double average_degree(const bhc::PartiteHypergraph& h) {
  const auto n = h.balanced_size();
  return n == 0 ? 0.0 : static_cast<double>(h.num_edges()) / n;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw bhc::input_error("bad number in list: " + item);
    }
  }
  return out;
}

// --- gen -------------------------------------------------------------------

struct GenArgs {
  int r = 2;
  bhc::Vertex n = 0;
  std::optional<double> p;
  std::optional<double> d;
  std::uint64_t seed = 0;
  std::string out;
};

int run_gen(const GenArgs& a) {
  if (a.p.has_value() == a.d.has_value()) throw bhc::input_error("give exactly one of --p and --d");
  auto params = a.d ? bhc::ModelParams::from_degree(a.r, a.n, *a.d, a.seed) : bhc::ModelParams{a.r, a.n, *a.p, a.seed, std::nullopt};
  params.validate();
  auto h = bhc::sample(params);
  std::vector<std::string> comments{"model H(r,n,p) r=" + std::to_string(a.r) + " n=" + std::to_string(a.n) +
                                    " p=" + bhc::format_number(params.p)};
  if (params.d) comments.push_back("d=" + bhc::format_number(*params.d) + " p=d/n^(r-1)");
  comments.push_back("seed=" + std::to_string(a.seed) + " rng=" + std::string(bhc::kRngName));
  if (a.out.empty() || a.out == "-") {
    bhc::write_hpg(std::cout, h, comments);
  } else {
    auto out = open_out(a.out);
    bhc::write_hpg(out, h, comments);
  }
  return kExitOk;
}

// --- color -----------------------------------------------------------------

struct ColorArgs {
  std::string input;
  std::string algorithm = "fk";
  std::string out;
  std::optional<double> d;
  double eps = 0.5;
  std::uint64_t seed = 0;
  std::optional<int> palette;
  std::optional<std::uint64_t> budget_nodes;
  std::optional<double> budget_secs;
};

// Total coloring to start triple merging from.
bhc::BalancedColoring initial_coloring(const bhc::PartiteHypergraph& h, const bhc::OracleBudget& budget) {
  const auto n = h.balanced_size();
  if (2 * bhc::max_codegree(h, h.num_parts() - 1) <= n) return bhc::colorability_by_degree(h, budget);
  auto m = bhc::complement_matching(h, budget);
  if (m.verdict == bhc::Verdict::no) throw bhc::input_error("not balanced colorable");
  if (m.verdict == bhc::Verdict::unknown) throw bhc::resource_error("matching search exhausted its budget");
  return bhc::matching_to_coloring(h, std::move(m.matching));
}

int run_color(const ColorArgs& a) {
  auto h = load_graph(a.input);
  const auto n = h.balanced_size();
  const auto budget = make_budget(a.budget_nodes, a.budget_secs);
  const double d = a.d.value_or(average_degree(h));
  bhc::BalancedColoring phi(h);
  auto mode = bhc::ValidationMode::total;
  bhc::ExperimentRecord rec;
  rec.r = h.num_parts();
  rec.n = n;
  rec.d = d;
  rec.p = n == 0 ? 0.0 : static_cast<double>(h.num_edges()) / std::pow(static_cast<double>(n), h.num_parts());
  rec.eps = a.eps;
  rec.seed = a.seed;
  rec.algorithm = a.algorithm;
  int code = kExitOk;

  if (a.algorithm == "oracle") {
    auto res = bhc::chi_b_exact(h, budget);
    if (res.status == bhc::ChiResult::Status::not_colorable) throw bhc::input_error("not balanced colorable");
    if (res.status == bhc::ChiResult::Status::unknown) throw bhc::resource_error("oracle exhausted its budget");
    phi = std::move(res.witness);
  } else if (a.algorithm == "fk") {
    auto res = bhc::fk_reduce(h, initial_coloring(h, budget));
    phi = std::move(res.coloring);
    const double bound = std::max(2.0, std::floor(h.num_parts() * (h.num_parts() - 1.0) * h.num_edges() / std::max<double>(n, 1)) + 1);
    rec.note = "fk bound " + bhc::format_number(bound) + " after " + std::to_string(res.steps.size()) + " merges";
  } else if (a.algorithm == "degree") {
    phi = bhc::colorability_by_degree(h, budget);
  } else if (a.algorithm == "heuristic") {
    auto res = bhc::heuristic_balanced_color(h, a.palette.value_or(std::numeric_limits<int>::max()), a.seed);
    phi = std::move(res.coloring);
    if (!res.success) {
      mode = bhc::ValidationMode::partial;
      rec.note = "palette budget exhausted";
      code = kExitResource;
    }
  } else if (a.algorithm == "iterative") {
    if (d < 2.0) throw bhc::input_error("iterative needs d >= 2");
    auto sched = bhc::PeelSchedule::make(h.num_parts(), d, a.eps, n);
    bhc::Rng rng(bhc::derive_seed(a.seed, 7));
    std::vector<bhc::Vertex> all(n);
    for (bhc::Vertex v = 0; v < n; ++v) all[v] = v;
    bhc::BalancedSubset u;
    for (int p = 0; p < h.num_parts(); ++p) u.per_part.push_back(bhc::choose_subset(all, sched.start_threshold(), rng));
    auto res = bhc::iterative_sparse_color(h, u, {d, a.eps, n, a.seed, budget});
    phi = std::move(res.coloring);
    mode = bhc::ValidationMode::partial;
    rec.note = "subset size " + std::to_string(u.size()) + ", " + std::to_string(res.rounds.size()) + " rounds";
    if (!res.success) {
      rec.note += "; " + res.failure;
      code = kExitResource;
    }
  } else if (a.algorithm == "em") {
    auto params = bhc::compute_params(n, d, h.num_parts(), a.eps);
    auto res = bhc::expose_merge_color(h, params, a.seed);
    phi = std::move(res.coloring);
    mode = bhc::ValidationMode::partial;
    if (res.failed) {
      rec.note = "FAIL at iteration " + std::to_string(res.fail_iteration);
      code = kExitResource;
    }
  } else {
    throw bhc::input_error("unknown algorithm " + a.algorithm);
  }

  auto report = bhc::validate_coloring(h, phi, mode);
  rec.valid = report.valid();
  rec.colors_used = phi.colors_used();
  rec.uncolored_fraction = phi.vertex_count() == 0 ? 0.0 : 1.0 - static_cast<double>(phi.colored_count()) / phi.vertex_count();
  if (!a.out.empty()) {
    auto out = open_out(a.out);
    bhc::write_coloring(out, phi);
  }
  std::cout << bhc::kCsvHeader << '\n' << bhc::csv_row(rec) << '\n';
  if (!rec.valid) {
    std::cerr << report.describe(h);
    return kExitVerify;
  }
  return code;
}

// --- verify ----------------------------------------------------------------

int run_verify(const std::string& graph, const std::string& coloring, const std::string& mode) {
  auto h = load_graph(graph);
  std::ifstream in(coloring);
  if (!in) throw bhc::input_error("cannot open " + coloring);
  auto phi = bhc::read_coloring(in, h.part_sizes());
  if (mode != "total" && mode != "partial") throw bhc::input_error("mode must be total or partial");
  auto report = bhc::validate_coloring(h, phi, mode == "total" ? bhc::ValidationMode::total : bhc::ValidationMode::partial);
  if (!report.valid()) {
    std::cout << "INVALID\n" << report.describe(h);
    return kExitVerify;
  }
  std::cout << "VALID colors=" << phi.colors_used() << " colored=" << phi.colored_count() << '/' << phi.vertex_count() << '\n';
  return kExitOk;
}

// --- em --------------------------------------------------------------------

struct EmArgs {
  int r = 2;
  bhc::Vertex n = 0;
  double d = 0;
  double eps = 0.5;
  std::uint64_t seed = 0;
  std::string out;
  std::string graph_out;
};

int run_em(const EmArgs& a) {
  auto params = bhc::compute_params(a.n, a.d, a.r, a.eps);
  std::cout << "beta=" << bhc::format_number(params.beta) << " xi=" << bhc::format_number(params.xi)
            << " gamma=" << bhc::format_number(params.gamma) << '\n'
            << "n_bar=" << bhc::format_number(params.n_bar) << " d_bar=" << bhc::format_number(params.d_bar)
            << " q_bar=" << bhc::format_number(params.q_bar) << " T=" << bhc::format_number(params.T)
            << " k_fam=" << bhc::format_number(params.k_fam) << " q=" << bhc::format_number(params.q) << '\n'
            << "coverage_residual=" << bhc::format_number(params.coverage_residual)
            << " palette_slack=" << bhc::format_number(params.palette_slack) << '\n'
            << "rounded: n_bar=" << params.n_bar_rounded << " k_fam=" << params.k_fam_rounded << " q_bar=" << params.q_bar_rounded
            << " T=" << params.T_rounded << " drift=" << bhc::format_number(params.rounded_coverage_drift)
            << " within_main_palette=" << (params.within_main_palette ? "yes" : "no") << '\n';
  auto res = bhc::run_expose_merge(params, a.seed);
  auto report = bhc::validate_coloring(res.graph, res.coloring, bhc::ValidationMode::partial);
  std::cout << "outcome=" << (res.failed ? "FAIL" : "ok");
  if (res.failed) std::cout << " fail_iteration=" << res.fail_iteration;
  std::cout << " edges=" << res.graph.num_edges() << " colors=" << res.colors_used
            << " uncolored_fraction=" << bhc::format_number(res.uncolored_fraction) << " conflicts=" << res.conflicts
            << " valid=" << (report.valid() ? "true" : "false") << '\n';
  if (!a.out.empty()) {
    auto out = open_out(a.out);
    bhc::write_coloring(out, res.coloring);
  }
  if (!a.graph_out.empty()) {
    auto out = open_out(a.graph_out);
    bhc::write_hpg(out, res.graph, {"expose-and-merge sample seed=" + std::to_string(a.seed)});
  }
  if (!report.valid()) return kExitVerify;
  return res.failed ? kExitResource : kExitOk;
}

// --- oracle ----------------------------------------------------------------

int run_oracle(const std::string& input, const std::string& kind, const std::string& out_path, const bhc::OracleBudget& budget) {
  auto h = load_graph(input);
  std::ofstream file;
  if (!out_path.empty()) file = open_out(out_path);
  if (kind == "alpha") {
    auto res = bhc::alpha_b_exact(h, budget);
    std::cout << (res.decided ? "alpha_b=" : "alpha_b>=") << res.alpha_b << " per_part=" << res.per_part << " nodes=" << res.nodes << '\n';
    if (file.is_open()) {
      bhc::BalancedColoring phi(h);
      for (int p = 0; p < h.num_parts() && res.per_part > 0; ++p) {
        for (auto v : res.witness.per_part[static_cast<std::size_t>(p)]) phi.set({p, v}, 0);
      }
      bhc::write_coloring(file, phi);
    }
    return res.decided ? kExitOk : kExitResource;
  }
  if (kind == "chi") {
    auto res = bhc::chi_b_exact(h, budget);
    switch (res.status) {
      case bhc::ChiResult::Status::colorable:
        std::cout << "chi_b=" << res.colors << " nodes=" << res.nodes << '\n';
        if (file.is_open()) bhc::write_coloring(file, res.witness);
        return kExitOk;
      case bhc::ChiResult::Status::not_colorable:
        std::cout << "chi_b=not_balanced_colorable nodes=" << res.nodes << '\n';
        return kExitOk;
      default:
        std::cout << "chi_b=unknown refuted_below=" << res.refuted_below << " nodes=" << res.nodes << '\n';
        return kExitResource;
    }
  }
  if (kind == "matching" || kind == "colorable") {
    auto res = kind == "matching" ? bhc::perfect_matching_exists(h, budget) : bhc::complement_matching(h, budget);
    const char* label = kind == "matching" ? "perfect_matching=" : "balanced_colorable=";
    std::cout << label << (res.verdict == bhc::Verdict::yes ? "yes" : res.verdict == bhc::Verdict::no ? "no" : "unknown")
              << " nodes=" << res.nodes << '\n';
    if (file.is_open() && res.verdict == bhc::Verdict::yes) bhc::write_tuples(file, res.matching);
    return res.verdict == bhc::Verdict::unknown ? kExitResource : kExitOk;
  }
  throw bhc::input_error("unknown oracle kind " + kind);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Balanced colorings of r-partite hypergraphs"};
  app.require_subcommand(1);

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "sample H(r,n,p) and write it in HPG v1 format");
  gen_cmd->add_option("--r", gen.r, "uniformity")->default_val(2);
  gen_cmd->add_option("--n", gen.n, "part size")->required();
  gen_cmd->add_option("--p", gen.p, "edge probability");
  gen_cmd->add_option("--d", gen.d, "expected degree, p = d / n^(r-1)");
  gen_cmd->add_option("--seed", gen.seed)->default_val(0);
  gen_cmd->add_option("--out", gen.out, "output path (stdout if absent)");

  ColorArgs color;
  auto* color_cmd = app.add_subcommand("color", "color an HPG instance");
  color_cmd->add_option("input", color.input)->required();
  color_cmd->add_option("--algorithm", color.algorithm)
      ->check(CLI::IsMember({"oracle", "fk", "degree", "heuristic", "iterative", "em"}))
      ->default_val("fk");
  color_cmd->add_option("--out", color.out, "coloring output path");
  color_cmd->add_option("--d", color.d, "degree parameter (default |E|/n)");
  color_cmd->add_option("--eps", color.eps)->default_val(0.5);
  color_cmd->add_option("--seed", color.seed)->default_val(0);
  color_cmd->add_option("--palette", color.palette, "heuristic palette budget");
  color_cmd->add_option("--budget-nodes", color.budget_nodes);
  color_cmd->add_option("--budget-secs", color.budget_secs);

  std::string verify_graph, verify_coloring, verify_mode = "total";
  auto* verify_cmd = app.add_subcommand("verify", "check a coloring against an instance");
  verify_cmd->add_option("graph", verify_graph)->required();
  verify_cmd->add_option("coloring", verify_coloring)->required();
  verify_cmd->add_option("--mode", verify_mode)->check(CLI::IsMember({"total", "partial"}))->default_val("total");

  bhc::SweepConfig sweep;
  std::string d_list, sweep_out;
  auto* sweep_cmd = app.add_subcommand("sweep", "Monte Carlo sweep over d, CSV output");
  sweep_cmd->add_option("--r", sweep.r)->default_val(2);
  sweep_cmd->add_option("--n", sweep.n)->required();
  sweep_cmd->add_option("--eps", sweep.eps)->default_val(0.5);
  sweep_cmd->add_option("--d", d_list, "comma-separated degrees")->required();
  sweep_cmd->add_option("--trials", sweep.trials)->default_val(1);
  sweep_cmd->add_option("--seed", sweep.seed)->default_val(0);
  sweep_cmd->add_option("--jobs", sweep.jobs)->default_val(1);
  sweep_cmd->add_option("--algorithm", sweep.algorithm)
      ->check(CLI::IsMember({"pipeline", "heuristic", "em"}))
      ->default_val("pipeline");
  sweep_cmd->add_option("--out", sweep_out, "CSV path (stdout if absent)");
  sweep_cmd->add_flag("--timing", sweep.timing, "record wall_ms (makes output nondeterministic)");

  EmArgs em;
  auto* em_cmd = app.add_subcommand("em", "run expose-and-merge on a fresh sample");
  em_cmd->add_option("--r", em.r)->default_val(2);
  em_cmd->add_option("--n", em.n)->required();
  em_cmd->add_option("--d", em.d)->required();
  em_cmd->add_option("--eps", em.eps)->default_val(0.5);
  em_cmd->add_option("--seed", em.seed)->default_val(0);
  em_cmd->add_option("--out", em.out, "coloring output path");
  em_cmd->add_option("--graph-out", em.graph_out, "merged hypergraph output path");

  std::string oracle_input, oracle_kind = "chi", oracle_out;
  std::optional<std::uint64_t> oracle_nodes;
  std::optional<double> oracle_secs;
  auto* oracle_cmd = app.add_subcommand("oracle", "exact alpha_b, chi_b or perfect matching");
  oracle_cmd->add_option("input", oracle_input)->required();
  oracle_cmd->add_option("--kind", oracle_kind)->check(CLI::IsMember({"alpha", "chi", "matching", "colorable"}))->default_val("chi");
  oracle_cmd->add_option("--out", oracle_out, "witness output path");
  oracle_cmd->add_option("--budget-nodes", oracle_nodes);
  oracle_cmd->add_option("--budget-secs", oracle_secs);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*gen_cmd) return run_gen(gen);
    if (*color_cmd) return run_color(color);
    if (*verify_cmd) return run_verify(verify_graph, verify_coloring, verify_mode);
    if (*sweep_cmd) {
      sweep.d_list = parse_list(d_list);
      auto rows = bhc::run_sweep(sweep);
      if (sweep_out.empty() || sweep_out == "-") {
        bhc::write_csv(std::cout, rows);
      } else {
        auto out = open_out(sweep_out);
        bhc::write_csv(out, rows);
      }
      return kExitOk;
    }
    if (*em_cmd) return run_em(em);
    if (*oracle_cmd) return run_oracle(oracle_input, oracle_kind, oracle_out, make_budget(oracle_nodes, oracle_secs));
  } catch (const bhc::input_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const bhc::parameter_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const bhc::capacity_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitResource;
  } catch (const bhc::resource_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitResource;
  }
  return kExitOk;
}
