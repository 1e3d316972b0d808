#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "bhc/experiments.hpp"
#include "support.hpp"

using namespace bhc;

namespace {

std::string csv(const std::vector<ExperimentRecord>& rows) {
  std::ostringstream out;
  write_csv(out, rows);
  return out.str();
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream s(line);
  std::string cell;
  while (std::getline(s, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

TEST(Formulas, ReferenceCurves) {
  // d = e^2: q = ((1/2) e^2 / 2) for r = 2
  EXPECT_NEAR(q_main(std::exp(2.0), 2, 0.0), std::exp(2.0) / 4.0, 1e-12);
  EXPECT_NEAR(q_main(64.0, 2, 0.5), 11.541560327111709, 1e-12);
  EXPECT_NEAR(q_main(64.0, 3, 0.0), std::sqrt(2.0 / 3.0 * 64.0 / std::log(64.0)), 1e-12);
  EXPECT_TRUE(std::isnan(q_main(1.0, 2, 0.0)));
  EXPECT_NEAR(alpha_ref(1000, 64.0, 2, 0.0), 2 * 1000 * 2 * std::log(64.0) / 64.0, 1e-9);
  EXPECT_NEAR(alpha_ref(1000, 64.0, 3, 0.0), 3 * 1000 * std::sqrt(1.5 * std::log(64.0) / 64.0), 1e-9);
  EXPECT_TRUE(std::isnan(alpha_ref(10, 0.5, 2, 0.0)));
  EXPECT_DOUBLE_EQ(fk_bound(2, 0.1), 2.0);
  EXPECT_DOUBLE_EQ(fk_bound(3, 2.0), 13.0);
}

TEST(Csv, HeaderAndFormatting) {
  EXPECT_EQ(std::string(kCsvHeader),
            "r,n,d,p,eps,seed,trial,algorithm,colors_used,alpha_b_lower_bound,uncolored_fraction,conflict_count,wall_ms,"
            "valid,colors_over_q_main,alpha_lb_over_alpha_ref,note");
  EXPECT_EQ(format_number(std::nan("")), "NA");
  EXPECT_EQ(format_number(0.25), "0.25");
  ExperimentRecord rec;
  rec.d = 1.0;
  rec.note = "a,b";
  auto cells = split(csv_row(rec), ',');
  ASSERT_EQ(cells.size(), 17u);
  EXPECT_EQ(cells[12], "NA");
  EXPECT_EQ(cells[14], "NA");
  EXPECT_EQ(cells[16], "a;b");
}

TEST(Sweep, ZeroTrialsGivesHeaderOnly) {
  SweepConfig cfg;
  cfg.d_list = {4.0, 8.0};
  cfg.trials = 0;
  EXPECT_EQ(csv(run_sweep(cfg)), std::string(kCsvHeader) + "\n");
}

TEST(Sweep, RowsAreFiniteAndValid) {
  for (std::string algo : {"pipeline", "heuristic", "em"}) {
    SweepConfig cfg;
    cfg.n = 50;
    cfg.d_list = {4.0};
    cfg.trials = 5;
    cfg.seed = 3;
    cfg.algorithm = algo;
    auto rows = run_sweep(cfg);
    ASSERT_EQ(rows.size(), 5u);
    for (const auto& row : rows) {
      EXPECT_TRUE(std::isfinite(row.colors_over_q_main())) << algo;
      EXPECT_TRUE(std::isfinite(row.alpha_over_ref())) << algo;
      EXPECT_TRUE(row.valid) << algo << ": " << row.note;
      EXPECT_GT(row.alpha_b_lower_bound, 0u);
      EXPECT_EQ(row.alpha_b_lower_bound % 2, 0u);
      if (algo != "em") {
        EXPECT_DOUBLE_EQ(row.uncolored_fraction, 0.0);
        EXPECT_GT(row.colors_used, 0);
      }
    }
  }
  SweepConfig bad;
  bad.d_list = {4.0};
  bad.algorithm = "nope";
  EXPECT_THROW(run_sweep(bad), input_error);
}

TEST(Sweep, ThreadCountDoesNotChangeOutput) {
  SweepConfig cfg;
  cfg.n = 200;
  cfg.d_list = {4.0, 16.0};
  cfg.trials = 4;
  cfg.seed = 11;
  cfg.jobs = 1;
  auto one = csv(run_sweep(cfg));
  cfg.jobs = 3;
  EXPECT_EQ(csv(run_sweep(cfg)), one);
  cfg.seed = 12;
  EXPECT_NE(csv(run_sweep(cfg)), one);
}

TEST(Sweep, RowsReproduceFromTheirSeed) {
  SweepConfig cfg;
  cfg.n = 100;
  cfg.d_list = {4.0, 8.0};
  cfg.trials = 3;
  cfg.seed = 5;
  auto rows = run_sweep(cfg);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    EXPECT_EQ(rows[k].seed, derive_seed(5, k));
    EXPECT_EQ(csv_row(run_trial(cfg, rows[k].d, rows[k].trial, rows[k].seed)), csv_row(rows[k]));
  }
}

TEST(Pipeline, ColorsRandomGraphsCompletely) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    for (int r : {2, 3}) {
      Vertex n = r == 2 ? 400 : 100;
      double d = 8.0;
      auto h = sample(ModelParams::from_degree(r, n, d, seed));
      auto res = constructive_color(h, d, 0.5, seed);
      EXPECT_TRUE(res.failure.empty());
      EXPECT_TRUE(validate_coloring(h, res.coloring, ValidationMode::total).valid());
      EXPECT_EQ(res.coloring.colors_used(), res.coloring.num_colors());
    }
  }
}

TEST(Pipeline, SmallInstancesAgainstExactChi) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto h = bhc_test::random_graph(2, 6, 0.15, seed);
    auto chi = bhc_test::brute_chi(h);
    auto res = constructive_color(h, 0.9, 0.5, seed);
    if (!res.failure.empty()) continue;
    ASSERT_TRUE(validate_coloring(h, res.coloring, ValidationMode::total).valid());
    ASSERT_TRUE(chi.has_value());
    EXPECT_GE(res.coloring.colors_used(), *chi);
  }
}
