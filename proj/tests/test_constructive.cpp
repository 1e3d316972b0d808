#include <gtest/gtest.h>

#include "bhc/matching_coloring.hpp"
#include "bhc/oracles.hpp"
#include "bhc/sparse_two_coloring.hpp"
#include "bhc/triple_reduction.hpp"
#include "support.hpp"

using namespace bhc;

namespace {

bool valid_total(const PartiteHypergraph& h, const BalancedColoring& phi) {
  return validate_coloring(h, phi, ValidationMode::total).valid();
}

// Edges inside the union of classes i, j, k, counted directly.
std::size_t union_edges(const PartiteHypergraph& h, const BalancedColoring& phi, int i, int j, int k) {
  std::size_t count = 0;
  for (std::size_t e = 0; e < h.num_edges(); ++e) {
    auto t = h.edge(e);
    bool inside = true;
    for (int p = 0; p < h.num_parts(); ++p) {
      int c = phi.color({p, t[p]});
      inside &= c == i || c == j || c == k;
    }
    count += inside;
  }
  return count;
}

std::size_t first_part_size(const BalancedColoring& phi, int c) {
  std::size_t s = 0;
  for (int x : phi.part(0)) s += x == c;
  return s;
}

std::optional<std::array<int, 3>> first_sparse_triple(const PartiteHypergraph& h, const BalancedColoring& phi) {
  const int q = phi.num_colors();
  for (int i = 0; i < q; ++i) {
    for (int j = i + 1; j < q; ++j) {
      for (int k = j + 1; k < q; ++k) {
        if (union_edges(h, phi, i, j, k) < first_part_size(phi, i) + first_part_size(phi, j) + first_part_size(phi, k)) {
          return std::array<int, 3>{i, j, k};
        }
      }
    }
  }
  return std::nullopt;
}

// Colors vertex (p, v) with (v + shift_p) mod n, a valid coloring iff no edge
// is hit monochromatically.
BalancedColoring latin_coloring(const PartiteHypergraph& h, const std::vector<Vertex>& shift) {
  const Vertex n = h.balanced_size();
  BalancedColoring phi(h);
  for (int p = 0; p < h.num_parts(); ++p) {
    for (Vertex v = 0; v < n; ++v) phi.set({p, v}, static_cast<int>((v + shift[p]) % n));
  }
  return phi;
}

}  // namespace

TEST(TwoColorSparse, SingleEdgeExample) {
  auto h = PartiteHypergraph::from_edges({2, 2}, {{0, 0}});
  auto phi = two_color_sparse(h);
  EXPECT_TRUE(valid_total(h, phi));
  EXPECT_EQ(phi.num_colors(), 2);
  EXPECT_EQ(phi.color({0, 0}), 0);
  EXPECT_EQ(phi.color({1, 1}), 0);
  EXPECT_EQ(phi.color({0, 1}), 1);
  EXPECT_EQ(phi.color({1, 0}), 1);
}

TEST(TwoColorSparse, EdgesSpanningPartsBeyondTheFirstTwo) {
  auto h = PartiteHypergraph::from_edges({3, 3, 3}, {{0, 0, 0}, {1, 1, 0}});
  auto phi = two_color_sparse(h);
  EXPECT_TRUE(valid_total(h, phi));
  EXPECT_LE(phi.colors_used(), 2);
}

TEST(TwoColorSparse, RandomSparseInstances) {
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    int r = 2 + static_cast<int>(seed % 3);
    Vertex n = 2 + static_cast<Vertex>(seed % 6);
    std::mt19937_64 gen(seed);
    std::vector<std::vector<Vertex>> edges;
    const std::size_t m = gen() % n;
    for (std::size_t i = 0; i < m; ++i) {
      std::vector<Vertex> t;
      for (int p = 0; p < r; ++p) t.push_back(static_cast<Vertex>(gen() % n));
      edges.push_back(t);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    auto h = PartiteHypergraph::from_edges(std::vector<Vertex>(static_cast<std::size_t>(r), n), edges);
    auto phi = two_color_sparse(h);
    ASSERT_TRUE(valid_total(h, phi)) << seed;
    EXPECT_LE(phi.colors_used(), 2);
    EXPECT_EQ(phi.colors_used(), phi.num_colors());
    ++checked;
  }
  EXPECT_EQ(checked, 400);
}

TEST(TwoColorSparse, RejectsTooManyEdges) {
  EXPECT_THROW(two_color_sparse(PartiteHypergraph::from_edges({2, 2}, {{0, 0}, {1, 1}})), input_error);
  EXPECT_EQ(two_color_sparse(PartiteHypergraph::empty(3, 0)).num_colors(), 0);
}

TEST(MatchingToColoring, Examples) {
  auto h = PartiteHypergraph::from_edges({2, 2}, {{0, 0}, {1, 1}});
  auto phi = matching_to_coloring(h, {{1, 0}, {0, 1}});
  EXPECT_TRUE(valid_total(h, phi));
  EXPECT_EQ(phi.color({0, 0}), 0);
  EXPECT_EQ(phi.color({1, 1}), 0);
  EXPECT_EQ(phi.color({0, 1}), 1);

  EXPECT_THROW(matching_to_coloring(h, {{1, 0}}), input_error);
  EXPECT_THROW(matching_to_coloring(h, {{0, 1}, {0, 0}}), input_error);
  EXPECT_THROW(matching_to_coloring(h, {{0, 1}, {1, 1}}), input_error);
  EXPECT_THROW(matching_to_coloring(h, {{0, 1}, {1, 2}}), input_error);
}

TEST(ColorabilityByDegree, Examples) {
  auto empty = PartiteHypergraph::empty(3, 4);
  auto phi = colorability_by_degree(empty);
  EXPECT_TRUE(valid_total(empty, phi));
  EXPECT_EQ(phi.colors_used(), 4);

  EXPECT_THROW(colorability_by_degree(PartiteHypergraph::complete(2, 3)), input_error);

  int used = 0;
  for (std::uint64_t seed = 0; seed < 300 && used < 100; ++seed) {
    int r = 2 + static_cast<int>(seed % 2);
    Vertex n = 4 + static_cast<Vertex>(seed % 4);
    auto h = bhc_test::random_graph(r, n, 0.15, seed);
    if (2 * bhc_test::brute_max_codegree(h) > n) {
      EXPECT_THROW(colorability_by_degree(h), input_error);
      continue;
    }
    ++used;
    auto c = colorability_by_degree(h);
    EXPECT_TRUE(valid_total(h, c)) << seed;
    EXPECT_EQ(c.colors_used(), static_cast<int>(n));
  }
  EXPECT_GE(used, 50);
}

TEST(TripleReduction, EmptyGraphCollapses) {
  auto h = PartiteHypergraph::empty(2, 3);
  auto res = fk_reduce(h, latin_coloring(h, {0, 0}));
  EXPECT_EQ(res.initial_colors, 3);
  EXPECT_LE(res.coloring.colors_used(), 2);
  EXPECT_TRUE(valid_total(h, res.coloring));
}

TEST(TripleReduction, PerfectMatchingIsStuckAtThree) {
  auto h = PartiteHypergraph::from_edges({3, 3}, {{0, 0}, {1, 1}, {2, 2}});
  auto res = fk_reduce(h, latin_coloring(h, {0, 1}));
  EXPECT_TRUE(res.steps.empty());
  EXPECT_EQ(res.coloring.colors_used(), 3);
  EXPECT_EQ(bhc_test::brute_chi(h), 3);
}

TEST(TripleReduction, RejectsInvalidInput) {
  auto h = PartiteHypergraph::from_edges({2, 2}, {{0, 0}});
  EXPECT_THROW(fk_reduce(h, latin_coloring(h, {0, 0})), input_error);
}

TEST(TripleReduction, FirstSparseTripleMatchesRecount) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    int r = 2 + static_cast<int>(seed % 2);
    Vertex n = 4 + static_cast<Vertex>(seed % 4);
    std::mt19937_64 gen(seed);
    std::vector<Vertex> shift;
    for (int p = 0; p < r; ++p) shift.push_back(static_cast<Vertex>(gen() % n));
    auto h0 = bhc_test::random_graph(r, n, 0.05 + 0.002 * seed, seed + 11);
    // drop edges the coloring would make monochromatic
    std::vector<std::vector<Vertex>> keep;
    for (std::size_t e = 0; e < h0.num_edges(); ++e) {
      auto t = h0.edge(e);
      bool mono = true;
      for (int p = 1; p < r; ++p) mono &= (t[p] + shift[p]) % n == (t[0] + shift[0]) % n;
      if (!mono) keep.emplace_back(t.begin(), t.end());
    }
    auto h = PartiteHypergraph::from_edges(std::vector<Vertex>(static_cast<std::size_t>(r), n), keep);
    auto phi = latin_coloring(h, shift);
    auto lib = find_reducible_triple(h, phi);
    auto ref = first_sparse_triple(h, phi);
    ASSERT_EQ(lib.has_value(), ref.has_value()) << seed;
    if (lib) {
      EXPECT_EQ((std::array<int, 3>{lib->first, lib->second, lib->third}), *ref);
      EXPECT_EQ(lib->induced_edges, union_edges(h, phi, lib->first, lib->second, lib->third));
    }
  }
}

TEST(TripleReduction, ReachesBoundWithValidSteps) {
  int reduced = 0;
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    int r = 2 + static_cast<int>(seed % 2);
    Vertex n = 5 + static_cast<Vertex>(seed % 5);
    auto h = bhc_test::random_graph(r, n, 0.02 + 0.001 * seed, seed + 500);
    if (2 * bhc_test::brute_max_codegree(h) > n) continue;
    auto initial = colorability_by_degree(h);
    auto res = fk_reduce(h, initial);
    ASSERT_TRUE(valid_total(h, res.coloring)) << seed;
    const int q = res.coloring.colors_used();
    const double d = static_cast<double>(h.num_edges()) / n;
    EXPECT_LE(q, std::max(2.0, r * (r - 1) * d + 1)) << seed;
    EXPECT_EQ(res.steps.size(), res.colors_after.size());
    int prev = res.initial_colors;
    for (int c : res.colors_after) {
      EXPECT_LT(c, prev);
      EXPECT_GE(c, prev - 2);
      prev = c;
    }
    EXPECT_FALSE(first_sparse_triple(h, res.coloring).has_value());
    if (r * n <= 14) {
      if (auto chi = bhc_test::brute_chi(h)) {
        EXPECT_GE(q, *chi);
      }
    }
    reduced += !res.steps.empty();
  }
  EXPECT_GT(reduced, 100);
}
