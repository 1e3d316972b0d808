#ifndef BHC_IO_HPP
#define BHC_IO_HPP

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "bhc/coloring.hpp"
#include "bhc/hypergraph.hpp"

namespace bhc {

// HPG v1:
//   r n_1 ... n_r
//   m
//   m lines of r space-separated 0-based indices (position = part)
// Lines starting with '#' and blank lines are ignored on input.

namespace detail {

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  bool next(std::istringstream& fields) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      fields.clear();
      fields.str(line);
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw input_error("line " + std::to_string(line_no_) + ": " + what);
  }

  std::size_t line() const { return line_no_; }

 private:
  std::istream& in_;
  std::size_t line_no_ = 0;
};

template <class T>
bool read_exact(std::istringstream& fields, std::vector<T>& out, std::size_t count) {
  out.clear();
  long long x = 0;
  for (std::size_t k = 0; k < count; ++k) {
    if (!(fields >> x) || x < 0) return false;
    out.push_back(static_cast<T>(x));
  }
  std::string rest;
  return !(fields >> rest);
}

}  // namespace detail

inline PartiteHypergraph read_hpg(std::istream& in) {
  detail::LineReader reader(in);
  std::istringstream fields;
  if (!reader.next(fields)) throw input_error("HPG: missing header line");
  long long r = 0;
  if (!(fields >> r) || r < 2 || r > 64) reader.fail("HPG: bad uniformity");
  std::vector<Vertex> sizes;
  if (!detail::read_exact(fields, sizes, static_cast<std::size_t>(r))) reader.fail("HPG: expected r part sizes");
  if (!reader.next(fields)) throw input_error("HPG: missing edge count");
  std::vector<std::uint64_t> m;
  if (!detail::read_exact(fields, m, 1)) reader.fail("HPG: bad edge count");
  std::vector<Vertex> flat;
  std::vector<Vertex> tuple;
  for (std::uint64_t e = 0; e < m[0]; ++e) {
    if (!reader.next(fields)) throw input_error("HPG: expected " + std::to_string(m[0]) + " edges, got " + std::to_string(e));
    if (!detail::read_exact(fields, tuple, static_cast<std::size_t>(r))) reader.fail("HPG: expected r indices");
    flat.insert(flat.end(), tuple.begin(), tuple.end());
  }
  if (reader.next(fields)) reader.fail("HPG: trailing data after the last edge");
  try {
    return PartiteHypergraph(std::move(sizes), std::move(flat));
  } catch (const input_error& e) {
    throw input_error(std::string("HPG: ") + e.what());
  }
}

inline void write_hpg(std::ostream& out, const PartiteHypergraph& h, const std::vector<std::string>& comments = {}) {
  for (const auto& c : comments) out << "# " << c << '\n';
  out << h.num_parts();
  for (Vertex s : h.part_sizes()) out << ' ' << s;
  out << '\n' << h.num_edges() << '\n';
  for (std::size_t e = 0; e < h.num_edges(); ++e) {
    auto t = h.edge(e);
    for (std::size_t j = 0; j < t.size(); ++j) out << (j ? " " : "") << t[j];
    out << '\n';
  }
}

/// One line `part index color` per colored vertex, in (part, index) order.
inline void write_coloring(std::ostream& out, const BalancedColoring& phi) {
  for (int p = 0; p < phi.num_parts(); ++p) {
    for (Vertex v = 0; v < phi.part_size(p); ++v) {
      int c = phi.color({p, v});
      if (c != kUncolored) out << p << ' ' << v << ' ' << c << '\n';
    }
  }
}

inline BalancedColoring read_coloring(std::istream& in, const std::vector<Vertex>& part_sizes) {
  detail::LineReader reader(in);
  std::istringstream fields;
  BalancedColoring phi(part_sizes);
  std::vector<long long> row;
  while (reader.next(fields)) {
    if (!detail::read_exact(fields, row, 3)) reader.fail("coloring: expected `part index color`");
    VertexRef v{static_cast<int>(row[0]), static_cast<Vertex>(row[1])};
    if (row[0] >= static_cast<long long>(part_sizes.size()) || row[1] >= static_cast<long long>(part_sizes[static_cast<std::size_t>(row[0])])) {
      reader.fail("coloring: vertex outside the hypergraph");
    }
    if (row[2] > 1'000'000'000) reader.fail("coloring: color id too large");
    if (phi.is_colored(v)) reader.fail("coloring: vertex colored twice");
    phi.set(v, static_cast<int>(row[2]));
  }
  return phi;
}

/// A list of r-tuples: `k`, then k lines of r indices.
inline void write_tuples(std::ostream& out, const std::vector<std::vector<Vertex>>& tuples) {
  out << tuples.size() << '\n';
  for (const auto& t : tuples) {
    for (std::size_t j = 0; j < t.size(); ++j) out << (j ? " " : "") << t[j];
    out << '\n';
  }
}

}  // namespace bhc

#endif
