#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "bhc/expose_merge.hpp"
#include "support.hpp"

using namespace bhc;

namespace {

EMParams relaxed(Vertex n, double d, int r, double eps, double share) {
  auto p = compute_params(n, d, r, eps);
  p.k_fam_rounded = static_cast<std::size_t>(r) * static_cast<std::size_t>(std::floor(share * p.n_bar_rounded));
  return p;
}

std::vector<Vertex> to_global(const EMIteration& it, std::span<const Vertex> t) {
  std::vector<Vertex> g;
  for (std::size_t p = 0; p < t.size(); ++p) g.push_back(it.exposed[p][t[p]]);
  return g;
}

bool in_region(const EMIteration& it, const std::vector<Vertex>& t) {
  for (std::size_t p = 0; p < t.size(); ++p) {
    if (!std::binary_search(it.exposed[p].begin(), it.exposed[p].end(), t[p])) return false;
  }
  return true;
}

}  // namespace

TEST(EMParams, DerivedExponents) {
  auto p = compute_params(10000, 64.0, 2, 0.5);
  EXPECT_DOUBLE_EQ(p.beta, 5.0 / 24.0);
  EXPECT_DOUBLE_EQ(p.xi, 1.0 / 24.0);
  EXPECT_DOUBLE_EQ(p.gamma, 1.0 / 48.0);
  auto p3 = compute_params(10000, 64.0, 3, 0.5);
  EXPECT_DOUBLE_EQ(p3.beta, 5.0 / 48.0);
  EXPECT_DOUBLE_EQ(p3.gamma, 1.0 / 72.0);
}

TEST(EMParams, GoldenValues) {
  auto p = compute_params(10000, 64.0, 2, 0.5);
  EXPECT_NEAR(p.n_bar, 4204.482076268572, 1e-9);
  EXPECT_NEAR(p.d_bar, 26.90868528811886, 1e-11);
  EXPECT_NEAR(p.q_bar, 3.71102027173013, 1e-11);
  EXPECT_NEAR(p.T, 1.4772812560694744, 1e-12);
  EXPECT_NEAR(p.k_fam, 7331.007229299042, 1e-8);
  EXPECT_NEAR(p.q, 11.541560327111709, 1e-11);
  EXPECT_DOUBLE_EQ(p.p, 0.0064);
  EXPECT_EQ(p.n_bar_rounded, 4204u);
  EXPECT_EQ(p.k_fam_rounded, 7332u);
  EXPECT_EQ(p.q_bar_rounded, 4);
  EXPECT_EQ(p.T_rounded, 2);
  EXPECT_EQ(p.palette_bound(), 8);
  EXPECT_TRUE(p.within_main_palette);

  auto p3 = compute_params(10000, 64.0, 3, 0.5);
  EXPECT_NEAR(p3.n_bar, 6484.197773255049, 1e-9);
  EXPECT_NEAR(p3.q_bar, 2.2244161096731667, 1e-11);
  EXPECT_NEAR(p3.T, 0.8722054258768175, 1e-12);
  EXPECT_NEAR(p3.k_fam, 18163.020820294652, 1e-8);
  EXPECT_NEAR(p3.q, 3.922849360199243, 1e-11);
  EXPECT_EQ(p3.k_fam_rounded % 3, 0u);
}

TEST(EMParams, CoverageIdentityHolds) {
  for (int r : {2, 3, 4}) {
    for (double eps : {0.1, 0.3, 0.5, 0.9}) {
      for (double d : {8.0, 64.0, 1000.0}) {
        for (Vertex n : {1000u, 100000u}) {
          if (d > std::pow(static_cast<double>(n), r - 1)) continue;
          auto p = compute_params(n, d, r, eps);
          EXPECT_NEAR(p.coverage_residual / n, 0.0, 1e-12) << r << ' ' << eps << ' ' << d;
          EXPECT_NEAR(p.palette_slack, p.q - p.T * p.q_bar, 1e-12);
        }
      }
    }
  }
}

TEST(EMParams, RejectsBadParameters) {
  EXPECT_THROW(compute_params(100, 8.0, 1, 0.5), parameter_error);
  EXPECT_THROW(compute_params(1, 8.0, 2, 0.5), parameter_error);
  EXPECT_THROW(compute_params(100, 1.5, 2, 0.5), parameter_error);
  EXPECT_THROW(compute_params(100, 8.0, 2, 0.0), parameter_error);
  EXPECT_THROW(compute_params(100, 8.0, 2, 1.0), parameter_error);
  EXPECT_THROW(compute_params(5, 8.0, 2, 0.5), parameter_error);
}

TEST(ExposeMerge, FailureStillYieldsMergedGraph) {
  auto params = compute_params(2000, 64.0, 2, 0.5);
  auto out = run_expose_merge(params, 1);
  ASSERT_TRUE(out.failed);
  EXPECT_EQ(out.fail_iteration, 0);
  EXPECT_EQ(out.coloring.colored_count(), 0u);
  EXPECT_DOUBLE_EQ(out.uncolored_fraction, 1.0);
  EXPECT_EQ(out.graph.balanced_size(), 2000u);
  EXPECT_NEAR(static_cast<double>(out.graph.num_edges()), 64.0 * 2000, 2000.0);
  std::size_t new_edges = 0;
  for (const auto& it : out.iterations) new_edges += it.new_edges;
  EXPECT_EQ(new_edges + out.final_exposure_edges, out.graph.num_edges());
}

TEST(ExposeMerge, RelaxedFamiliesGiveValidColoring) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto params = relaxed(3000, 32.0, 2, 0.5, 0.3);
    auto out = run_expose_merge(params, seed);
    ASSERT_FALSE(out.failed) << seed;
    EXPECT_EQ(static_cast<int>(out.iterations.size()), params.T_rounded);
    EXPECT_TRUE(validate_coloring(out.graph, out.coloring, ValidationMode::partial).valid());
    EXPECT_LE(out.colors_used, params.palette_bound());
    EXPECT_GE(out.surviving_total + params.r * out.conflicts, out.family_total);
    EXPECT_LE(out.surviving_total, out.family_total);
    EXPECT_EQ(out.coloring.colored_count(), out.surviving_total);

    // A_i avoids every vertex placed in an earlier family
    std::vector<std::set<Vertex>> used(2);
    for (const auto& it : out.iterations) {
      for (int p = 0; p < 2; ++p) {
        EXPECT_EQ(it.exposed[p].size(), params.n_bar_rounded);
        for (Vertex v : it.exposed[p]) EXPECT_EQ(used[p].count(v), 0u);
      }
      for (const auto& cls : it.family) {
        for (int p = 0; p < 2; ++p) used[p].insert(cls.per_part[p].begin(), cls.per_part[p].end());
      }
      EXPECT_EQ(it.family.size(), static_cast<std::size_t>(params.q_bar_rounded));
    }

    // every merged edge was decided by the first region containing it, or
    // by the final exposure when no region does
    std::size_t from_iterations = 0;
    for (std::size_t i = 0; i < out.iterations.size(); ++i) {
      const auto& it = out.iterations[i];
      for (std::size_t e = 0; e < it.sample.num_edges(); ++e) {
        auto g = to_global(it, it.sample.edge(e));
        bool earlier = false;
        for (std::size_t j = 0; j < i; ++j) earlier |= in_region(out.iterations[j], g);
        if (!earlier) {
          EXPECT_TRUE(out.graph.contains(g));
          ++from_iterations;
        }
      }
    }
    for (std::size_t e = 0; e < out.graph.num_edges(); ++e) {
      auto t = out.graph.edge(e);
      std::vector<Vertex> g(t.begin(), t.end());
      for (std::size_t i = 0; i < out.iterations.size(); ++i) {
        const auto& it = out.iterations[i];
        if (!in_region(it, g)) continue;
        std::vector<Vertex> local;
        for (int p = 0; p < 2; ++p) {
          local.push_back(static_cast<Vertex>(std::lower_bound(it.exposed[p].begin(), it.exposed[p].end(), g[p]) - it.exposed[p].begin()));
        }
        EXPECT_TRUE(it.sample.contains(local));
        break;
      }
    }
    EXPECT_EQ(from_iterations + out.final_exposure_edges, out.graph.num_edges());
  }
}

TEST(ExposeMerge, MergedGraphHasModelLaw) {
  auto params = compute_params(6, 2.0, 2, 0.5);
  std::vector<double> freq(36, 0.0);
  const int trials = 5000;
  for (int t = 0; t < trials; ++t) {
    auto out = run_expose_merge(params, derive_seed(555, static_cast<std::uint64_t>(t)));
    for (std::size_t e = 0; e < out.graph.num_edges(); ++e) freq[out.graph.edge(e)[0] * 6 + out.graph.edge(e)[1]] += 1.0 / trials;
  }
  for (double f : freq) EXPECT_NEAR(f, 1.0 / 3.0, 0.03);
}

TEST(ExposeMerge, Deterministic) {
  auto params = relaxed(1000, 16.0, 2, 0.5, 0.3);
  auto a = run_expose_merge(params, 9);
  auto b = run_expose_merge(params, 9);
  EXPECT_EQ(a.graph, b.graph);
  EXPECT_EQ(a.coloring, b.coloring);
  auto c = run_expose_merge(params, 10);
  EXPECT_NE(a.graph, c.graph);
}

TEST(ExposeMerge, FixedGraphModeIsConflictFree) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    auto h = sample(ModelParams::from_degree(2, 2000, 16.0, seed));
    auto params = relaxed(2000, 16.0, 2, 0.5, 0.3);
    auto out = expose_merge_color(h, params, seed);
    ASSERT_FALSE(out.failed);
    EXPECT_EQ(out.conflicts, 0u);
    EXPECT_TRUE(validate_coloring(h, out.coloring, ValidationMode::partial).valid());
    EXPECT_EQ(out.surviving_total, out.family_total);
    EXPECT_LE(out.colors_used, params.palette_bound());
  }
  auto h = PartiteHypergraph::empty(2, 50);
  EXPECT_THROW(expose_merge_color(h, compute_params(60, 4.0, 2, 0.5), 0), input_error);
}
