#ifndef BHC_COLORING_HPP
#define BHC_COLORING_HPP

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bhc/hypergraph.hpp"

namespace bhc {

inline constexpr int kUncolored = -1;

/**
 * Vertex -> color map over a partite vertex set. Vertices may be uncolored.
 * `num_colors` is the palette size; every assigned color is in [0, num_colors).
 */
class BalancedColoring {
 public:
  BalancedColoring() = default;

  explicit BalancedColoring(const std::vector<Vertex>& part_sizes) {
    for (Vertex s : part_sizes) colors_.emplace_back(s, kUncolored);
  }

  explicit BalancedColoring(const PartiteHypergraph& h) : BalancedColoring(h.part_sizes()) {}

  int num_parts() const { return static_cast<int>(colors_.size()); }
  Vertex part_size(int j) const { return static_cast<Vertex>(colors_[static_cast<std::size_t>(j)].size()); }
  int num_colors() const { return num_colors_; }

  int color(VertexRef v) const { return colors_[static_cast<std::size_t>(v.part)][v.index]; }
  bool is_colored(VertexRef v) const { return color(v) != kUncolored; }

  void set(VertexRef v, int c) {
    colors_[static_cast<std::size_t>(v.part)][v.index] = c;
    if (c >= num_colors_) num_colors_ = c + 1;
  }

  void clear(VertexRef v) { colors_[static_cast<std::size_t>(v.part)][v.index] = kUncolored; }

  const std::vector<int>& part(int j) const { return colors_[static_cast<std::size_t>(j)]; }

  std::size_t colored_count() const {
    std::size_t c = 0;
    for (const auto& p : colors_) c += static_cast<std::size_t>(std::count_if(p.begin(), p.end(), [](int x) { return x != kUncolored; }));
    return c;
  }

  std::size_t vertex_count() const {
    std::size_t c = 0;
    for (const auto& p : colors_) c += p.size();
    return c;
  }

  bool is_total() const { return colored_count() == vertex_count(); }

  /// Number of distinct colors actually assigned.
  int colors_used() const {
    std::vector<char> used(static_cast<std::size_t>(num_colors_), 0);
    for (const auto& p : colors_) {
      for (int c : p) {
        if (c >= 0 && c < num_colors_) used[static_cast<std::size_t>(c)] = 1;
      }
    }
    return static_cast<int>(std::count(used.begin(), used.end(), 1));
  }

  /// Renumbers the used colors to 0..k-1, preserving their relative order.
  void compact() {
    std::vector<int> remap(static_cast<std::size_t>(num_colors_), kUncolored);
    for (const auto& p : colors_) {
      for (int c : p) {
        if (c >= 0) remap[static_cast<std::size_t>(c)] = 0;
      }
    }
    int next = 0;
    for (auto& m : remap) {
      if (m == 0) m = next++;
    }
    for (auto& p : colors_) {
      for (int& c : p) {
        if (c >= 0) c = remap[static_cast<std::size_t>(c)];
      }
    }
    num_colors_ = next;
  }

  /// Per-part member lists of color c, in index order.
  std::vector<std::vector<Vertex>> color_class(int c) const {
    std::vector<std::vector<Vertex>> out(colors_.size());
    for (std::size_t j = 0; j < colors_.size(); ++j) {
      for (Vertex v = 0; v < colors_[j].size(); ++v) {
        if (colors_[j][v] == c) out[j].push_back(v);
      }
    }
    return out;
  }

  friend bool operator==(const BalancedColoring&, const BalancedColoring&) = default;

 private:
  std::vector<std::vector<int>> colors_;
  int num_colors_ = 0;
};

enum class ValidationMode { partial, total };

struct ValidationReport {
  bool shape_mismatch = false;
  std::vector<EdgeId> monochromatic_edges;
  std::vector<int> unbalanced_colors;
  std::vector<VertexRef> uncolored;
  std::vector<VertexRef> out_of_range;

  bool valid() const {
    return !shape_mismatch && monochromatic_edges.empty() && unbalanced_colors.empty() && uncolored.empty() &&
           out_of_range.empty();
  }

  std::string describe(const PartiteHypergraph& h) const {
    std::ostringstream os;
    if (shape_mismatch) os << "coloring does not match the hypergraph's parts\n";
    for (EdgeId e : monochromatic_edges) {
      os << "monochromatic edge:";
      for (Vertex v : h.edge(e)) os << ' ' << v;
      os << '\n';
    }
    for (int c : unbalanced_colors) os << "unbalanced class: " << c << '\n';
    for (const auto& v : out_of_range) os << "color out of range at " << v.part << ' ' << v.index << '\n';
    if (!uncolored.empty()) os << "uncolored vertices: " << uncolored.size() << '\n';
    return os.str();
  }
};

/**
 * Checks that every color class is a balanced independent set. An edge is a
 * violation only when all r of its vertices carry one common color. In total
 * mode every vertex must also be colored.
 */
inline ValidationReport validate_coloring(const PartiteHypergraph& h, const BalancedColoring& phi,
                                          ValidationMode mode) {
  ValidationReport report;
  if (phi.num_parts() != h.num_parts()) {
    report.shape_mismatch = true;
    return report;
  }
  for (int p = 0; p < h.num_parts(); ++p) {
    if (phi.part_size(p) != h.part_size(p)) {
      report.shape_mismatch = true;
      return report;
    }
  }
  const int q = phi.num_colors();
  std::vector<std::vector<std::size_t>> counts(static_cast<std::size_t>(q), std::vector<std::size_t>(static_cast<std::size_t>(h.num_parts()), 0));
  for (int p = 0; p < h.num_parts(); ++p) {
    for (Vertex v = 0; v < h.part_size(p); ++v) {
      int c = phi.color({p, v});
      if (c == kUncolored) {
        if (mode == ValidationMode::total) report.uncolored.push_back({p, v});
      } else if (c < 0 || c >= q) {
        report.out_of_range.push_back({p, v});
      } else {
        ++counts[static_cast<std::size_t>(c)][static_cast<std::size_t>(p)];
      }
    }
  }
  for (int c = 0; c < q; ++c) {
    const auto& row = counts[static_cast<std::size_t>(c)];
    if (std::adjacent_find(row.begin(), row.end(), std::not_equal_to<>()) != row.end()) report.unbalanced_colors.push_back(c);
  }
  for (std::size_t e = 0; e < h.num_edges(); ++e) {
    auto t = h.edge(e);
    int c = phi.color({0, t[0]});
    if (c == kUncolored) continue;
    bool mono = true;
    for (int p = 1; p < h.num_parts() && mono; ++p) mono = phi.color({p, t[static_cast<std::size_t>(p)]}) == c;
    if (mono) report.monochromatic_edges.push_back(static_cast<EdgeId>(e));
  }
  return report;
}

}  // namespace bhc

#endif
