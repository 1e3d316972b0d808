#ifndef BHC_ORACLES_HPP
#define BHC_ORACLES_HPP

#include <bit>
#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "bhc/coloring.hpp"
#include "bhc/hypergraph.hpp"

namespace bhc {

/// Limits for the exponential searches. Absent fields mean unlimited.
struct OracleBudget {
  std::optional<std::uint64_t> node_limit;
  std::optional<double> time_limit;  // wall seconds
};

enum class Verdict { yes, no, unknown };

class BudgetMeter {
 public:
  explicit BudgetMeter(const OracleBudget& budget) : budget_(budget), start_(std::chrono::steady_clock::now()) {
    if (budget_.node_limit && *budget_.node_limit == 0) throw input_error("node budget must be positive");
    if (budget_.time_limit && !(*budget_.time_limit > 0.0)) throw input_error("time budget must be positive");
  }

  /// Counts one search node; false once the budget is spent.
  bool tick() {
    ++nodes_;
    if (exhausted_) return false;
    if (budget_.node_limit && nodes_ > *budget_.node_limit) exhausted_ = true;
    if (budget_.time_limit && (nodes_ & 1023) == 0) {
      std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start_;
      if (elapsed.count() > *budget_.time_limit) exhausted_ = true;
    }
    return !exhausted_;
  }

  bool exhausted() const { return exhausted_; }
  std::uint64_t nodes() const { return nodes_; }

 private:
  OracleBudget budget_;
  std::chrono::steady_clock::time_point start_;
  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;
};

namespace detail {

inline constexpr Vertex kMaskOracleLimit = 64;

inline void require_small_balanced(const PartiteHypergraph& h) {
  Vertex n = h.balanced_size();
  if (n > kMaskOracleLimit) throw input_error("exact oracles support at most 64 vertices per part");
}

}  // namespace detail

struct AlphaResult {
  /// False when the budget ran out; `per_part` is then only a proven lower bound.
  bool decided = false;
  Vertex per_part = 0;
  std::size_t alpha_b = 0;
  BalancedSubset witness;
  std::uint64_t nodes = 0;
};

namespace detail {

class AlphaSearch {
 public:
  AlphaSearch(const PartiteHypergraph& h, BudgetMeter& meter)
      : h_(h), meter_(meter), r_(h.num_parts()), n_(h.balanced_size()), masks_(static_cast<std::size_t>(r_), 0) {}

  // 1 found, 0 none, -1 budget exhausted. On success `masks_` holds the witness.
  int find(Vertex s) {
    s_ = s;
    std::fill(masks_.begin(), masks_.end(), 0);
    return choose(0, 0, s);
  }

  BalancedSubset witness() const {
    BalancedSubset u;
    for (auto m : masks_) {
      std::vector<Vertex> idx;
      for (Vertex v = 0; v < n_; ++v) {
        if (m >> v & 1) idx.push_back(v);
      }
      u.per_part.push_back(std::move(idx));
    }
    return u;
  }

 private:
  int choose(int part, Vertex start, Vertex need) {
    if (need == 0) {
      if (part + 1 == r_ - 1) return close_last_part();
      return choose(part + 1, 0, s_);
    }
    auto& mask = masks_[static_cast<std::size_t>(part)];
    for (Vertex v = start; v + need <= n_; ++v) {
      if (!meter_.tick()) return -1;
      mask |= std::uint64_t{1} << v;
      int res = choose(part, v + 1, need - 1);
      if (res != 0) return res;
      mask &= ~(std::uint64_t{1} << v);
    }
    return 0;
  }

  int close_last_part() {
    const std::size_t last = static_cast<std::size_t>(r_ - 1);
    std::uint64_t blocked = 0;
    for (std::size_t e = 0; e < h_.num_edges(); ++e) {
      auto t = h_.edge(e);
      bool inside = true;
      for (std::size_t p = 0; p < last && inside; ++p) inside = masks_[p] >> t[p] & 1;
      if (inside) blocked |= std::uint64_t{1} << t[last];
    }
    std::uint64_t allowed = ~blocked & (n_ == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n_) - 1));
    if (static_cast<Vertex>(std::popcount(allowed)) < s_) return 0;
    std::uint64_t pick = 0;
    for (Vertex k = 0; k < s_; ++k) {
      std::uint64_t low = allowed & (~allowed + 1);
      pick |= low;
      allowed ^= low;
    }
    masks_[last] = pick;
    return 1;
  }

  const PartiteHypergraph& h_;
  BudgetMeter& meter_;
  int r_;
  Vertex n_;
  Vertex s_ = 0;
  std::vector<std::uint64_t> masks_;
};

}  // namespace detail

/**
 * Balanced independence number by exhaustive search. Sizes s = 1, 2, ... are
 * tried in turn (feasibility is monotone in s); per size the per-part index
 * sets are enumerated in lexicographic order, so the witness is the
 * lexicographically smallest largest balanced independent set.
 */
inline AlphaResult alpha_b_exact(const PartiteHypergraph& h, const OracleBudget& budget = {}) {
  detail::require_small_balanced(h);
  BudgetMeter meter(budget);
  const Vertex n = h.balanced_size();
  AlphaResult out;
  out.witness.per_part.assign(static_cast<std::size_t>(h.num_parts()), {});
  detail::AlphaSearch search(h, meter);
  out.decided = true;
  for (Vertex s = 1; s <= n; ++s) {
    int res = search.find(s);
    if (res == 1) {
      out.per_part = s;
      out.witness = search.witness();
      continue;
    }
    out.decided = res == 0;
    break;
  }
  out.alpha_b = out.per_part * static_cast<std::size_t>(h.num_parts());
  out.nodes = meter.nodes();
  return out;
}

struct ChiResult {
  enum class Status { colorable, not_colorable, unknown };
  Status status = Status::unknown;
  /// Minimum number of colors, meaningful when colorable.
  int colors = 0;
  /// Every q below this value was refuted.
  int refuted_below = 1;
  BalancedColoring witness;
  std::uint64_t nodes = 0;
};

namespace detail {

class ChiSearch {
 public:
  ChiSearch(const PartiteHypergraph& h, BudgetMeter& meter)
      : h_(h), meter_(meter), r_(h.num_parts()), n_(h.balanced_size()), phi_(h) {}

  // 1 found, 0 none, -1 budget exhausted.
  int find(int q) {
    q_ = q;
    phi_ = BalancedColoring(h_);
    count_.assign(static_cast<std::size_t>(q) * static_cast<std::size_t>(r_), 0);
    return assign(0, -1);
  }

  const BalancedColoring& witness() const { return phi_; }

 private:
  Vertex& count(int c, int p) { return count_[static_cast<std::size_t>(c) * static_cast<std::size_t>(r_) + static_cast<std::size_t>(p)]; }

  bool blocks(VertexRef v, int c) const {
    for (EdgeId e : h_.incident_edges(v)) {
      auto t = h_.edge(e);
      bool mono = true;
      for (int p = 0; p < r_ - 1 && mono; ++p) mono = phi_.color({p, t[static_cast<std::size_t>(p)]}) == c;
      if (mono) return true;
    }
    return false;
  }

  int assign(std::size_t g, int max_used) {
    if (g == h_.num_vertices()) return 1;
    const VertexRef v = h_.vertex_at(g);
    // Part 0 fixes class sizes; later parts must fill each class to that size.
    const int limit = v.part == 0 ? std::min(q_ - 1, max_used + 1) : q_ - 1;
    for (int c = 0; c <= limit; ++c) {
      if (v.part > 0 && count(c, v.part) >= count(c, 0)) continue;
      if (v.part == r_ - 1 && blocks(v, c)) continue;
      if (!meter_.tick()) return -1;
      phi_.set(v, c);
      ++count(c, v.part);
      int res = assign(g + 1, v.part == 0 ? std::max(max_used, c) : max_used);
      if (res != 0) return res;
      --count(c, v.part);
      phi_.clear(v);
    }
    return 0;
  }

  const PartiteHypergraph& h_;
  BudgetMeter& meter_;
  int r_;
  Vertex n_;
  int q_ = 0;
  BalancedColoring phi_;
  std::vector<Vertex> count_;
};

}  // namespace detail

/**
 * Balanced chromatic number by backtracking over q = 1, 2, ..., n. Vertices
 * are assigned in part order; colors in part 0 are introduced in increasing
 * order (class symmetry), and every later part must fill each class up to the
 * size it has in part 0. A hypergraph with no coloring for q = n is reported
 * not_colorable, since a nonempty balanced class meets every part.
 */
inline ChiResult chi_b_exact(const PartiteHypergraph& h, const OracleBudget& budget = {}) {
  detail::require_small_balanced(h);
  BudgetMeter meter(budget);
  ChiResult out;
  const Vertex n = h.balanced_size();
  if (n == 0) {
    out.status = ChiResult::Status::colorable;
    out.witness = BalancedColoring(h);
    return out;
  }
  detail::ChiSearch search(h, meter);
  for (int q = 1; q <= static_cast<int>(n); ++q) {
    int res = search.find(q);
    if (res == -1) {
      out.status = ChiResult::Status::unknown;
      out.nodes = meter.nodes();
      return out;
    }
    if (res == 1) {
      out.status = ChiResult::Status::colorable;
      out.colors = q;
      out.witness = search.witness();
      out.witness.compact();
      out.nodes = meter.nodes();
      return out;
    }
    out.refuted_below = q + 1;
  }
  out.status = ChiResult::Status::not_colorable;
  out.nodes = meter.nodes();
  return out;
}

struct MatchingResult {
  Verdict verdict = Verdict::unknown;
  /// Edges of the matching, sorted lexicographically.
  std::vector<std::vector<Vertex>> matching;
  std::uint64_t nodes = 0;
};

namespace detail {

class MatchingSearch {
 public:
  MatchingSearch(const PartiteHypergraph& h, BudgetMeter& meter)
      : h_(h), meter_(meter), r_(h.num_parts()), n_(h.balanced_size()),
        covered_(static_cast<std::size_t>(r_), std::vector<char>(n_, 0)) {}

  int run() { return extend(0); }

  std::vector<std::vector<Vertex>> matching() const {
    std::vector<std::vector<Vertex>> out;
    for (EdgeId e : chosen_) {
      auto t = h_.edge(e);
      out.emplace_back(t.begin(), t.end());
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  bool available(EdgeId e) const {
    auto t = h_.edge(e);
    for (std::size_t p = 1; p < t.size(); ++p) {
      if (covered_[p][t[p]]) return false;
    }
    return true;
  }

  int extend(Vertex matched) {
    if (matched == n_) return 1;
    // Fail-first: branch on the uncovered part-0 vertex with the fewest usable edges.
    Vertex best = n_;
    std::size_t best_count = static_cast<std::size_t>(-1);
    for (Vertex u = 0; u < n_; ++u) {
      if (covered_[0][u]) continue;
      std::size_t cnt = 0;
      for (EdgeId e : h_.incident_edges({0, u})) cnt += available(e) ? 1 : 0;
      if (cnt == 0) return 0;
      if (cnt < best_count) {
        best_count = cnt;
        best = u;
      }
    }
    for (EdgeId e : h_.incident_edges({0, best})) {
      if (!available(e)) continue;
      if (!meter_.tick()) return -1;
      set_cover(e, 1);
      chosen_.push_back(e);
      int res = extend(matched + 1);
      if (res != 0) return res;
      chosen_.pop_back();
      set_cover(e, 0);
    }
    return 0;
  }

  void set_cover(EdgeId e, char value) {
    auto t = h_.edge(e);
    for (std::size_t p = 0; p < t.size(); ++p) covered_[p][t[p]] = value;
  }

  const PartiteHypergraph& h_;
  BudgetMeter& meter_;
  int r_;
  Vertex n_;
  std::vector<std::vector<char>> covered_;
  std::vector<EdgeId> chosen_;
};

}  // namespace detail

/// Backtracking search for n pairwise disjoint edges covering every vertex.
inline MatchingResult perfect_matching_exists(const PartiteHypergraph& h, const OracleBudget& budget = {}) {
  BudgetMeter meter(budget);
  MatchingResult out;
  const Vertex n = h.balanced_size();
  for (int p = 0; p < h.num_parts(); ++p) {
    for (Vertex v = 0; v < n; ++v) {
      if (h.incident_edges({p, v}).empty()) {
        out.verdict = Verdict::no;
        return out;
      }
    }
  }
  detail::MatchingSearch search(h, meter);
  int res = search.run();
  out.verdict = res == 1 ? Verdict::yes : res == 0 ? Verdict::no : Verdict::unknown;
  if (res == 1) out.matching = search.matching();
  out.nodes = meter.nodes();
  return out;
}

/// A balanced coloring exists iff the r-partite complement has a perfect matching.
inline MatchingResult complement_matching(const PartiteHypergraph& h, const OracleBudget& budget = {},
                                          std::uint64_t cap = kDefaultComplementCap) {
  h.balanced_size();
  return perfect_matching_exists(complement(h, cap), budget);
}

inline Verdict is_balanced_colorable(const PartiteHypergraph& h, const OracleBudget& budget = {},
                                     std::uint64_t cap = kDefaultComplementCap) {
  return complement_matching(h, budget, cap).verdict;
}

}  // namespace bhc

#endif
