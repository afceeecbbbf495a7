#include "khtile/graph.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "khtile/error.hpp"

namespace khtile {

BipartiteGraph::BipartiteGraph(std::size_t n_a, std::size_t n_b, std::span<const Edge> edges)
    : n_a_(n_a), n_b_(n_b), rows_a_(n_a, Bitset(n_b)) {
  for (const auto& [a, b] : edges) {
    if (a >= n_a || b >= n_b) {
      throw InputError("edge (" + std::to_string(a) + ", " + std::to_string(b) + ") out of range for sides " +
                       std::to_string(n_a) + " x " + std::to_string(n_b));
    }
    rows_a_[a].set(b);
  }
  finish();
}

BipartiteGraph BipartiteGraph::from_rows(std::size_t n_b, std::vector<Bitset> rows) {
  for (const auto& r : rows)
    if (r.size() != n_b) throw InputError("adjacency row has width " + std::to_string(r.size()) +
                                          ", expected " + std::to_string(n_b));
  BipartiteGraph g;
  g.n_a_ = rows.size();
  g.n_b_ = n_b;
  g.rows_a_ = std::move(rows);
  g.finish();
  return g;
}

void BipartiteGraph::finish() {
  rows_b_.assign(n_b_, Bitset(n_a_));
  edge_count_ = 0;
  for (std::size_t a = 0; a < n_a_; ++a) {
    edge_count_ += rows_a_[a].count();
    rows_a_[a].for_each([&](std::size_t b) { rows_b_[b].set(a); });
  }
}

std::size_t BipartiteGraph::degree(VertexRef v) const {
  if (v.side == Side::A) {
    if (v.index >= n_a_) throw InputError("A-vertex " + std::to_string(v.index) + " out of range");
    return degree_a(v.index);
  }
  if (v.index >= n_b_) throw InputError("B-vertex " + std::to_string(v.index) + " out of range");
  return degree_b(v.index);
}

std::vector<Edge> BipartiteGraph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (std::size_t a = 0; a < n_a_; ++a) rows_a_[a].for_each([&](std::size_t b) { out.emplace_back(a, b); });
  return out;
}

BipartiteGraph graph_union(const BipartiteGraph& g1, const BipartiteGraph& g2) {
  if (g1.n_a() != g2.n_a() || g1.n_b() != g2.n_b()) {
    throw InputError("union of graphs with different side sizes (" + std::to_string(g1.n_a()) + "x" +
                     std::to_string(g1.n_b()) + " vs " + std::to_string(g2.n_a()) + "x" +
                     std::to_string(g2.n_b()) + ")");
  }
  std::vector<Bitset> rows;
  rows.reserve(g1.n_a());
  for (std::size_t a = 0; a < g1.n_a(); ++a) rows.push_back(g1.neighbors_of_a(a) | g2.neighbors_of_a(a));
  return BipartiteGraph::from_rows(g1.n_b(), std::move(rows));
}

std::size_t min_degree(const BipartiteGraph& g) {
  if (g.n_a() == 0 || g.n_b() == 0) throw InputError("min_degree of a graph with an empty side");
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (std::size_t a = 0; a < g.n_a(); ++a) best = std::min(best, g.degree_a(a));
  for (std::size_t b = 0; b < g.n_b(); ++b) best = std::min(best, g.degree_b(b));
  return best;
}

Bitset neighborhood(const BipartiteGraph& g, std::span<const std::size_t> a_set) {
  Bitset out(g.n_b());
  for (std::size_t a : a_set) {
    if (a >= g.n_a()) throw InputError("A-vertex " + std::to_string(a) + " out of range");
    out |= g.neighbors_of_a(a);
  }
  return out;
}

BipartiteGraph induced_subgraph(const BipartiteGraph& g, std::span<const std::size_t> a_set,
                                std::span<const std::size_t> b_set) {
  for (std::size_t b : b_set)
    if (b >= g.n_b()) throw InputError("B-vertex " + std::to_string(b) + " out of range");
  std::vector<Bitset> rows;
  rows.reserve(a_set.size());
  for (std::size_t a : a_set) {
    if (a >= g.n_a()) throw InputError("A-vertex " + std::to_string(a) + " out of range");
    Bitset row(b_set.size());
    for (std::size_t j = 0; j < b_set.size(); ++j)
      if (g.has_edge(a, b_set[j])) row.set(j);
    rows.push_back(std::move(row));
  }
  return BipartiteGraph::from_rows(b_set.size(), std::move(rows));
}

BipartiteGraph complete_graph(std::size_t n_a, std::size_t n_b) {
  return BipartiteGraph::from_rows(n_b, std::vector<Bitset>(n_a, Bitset::full(n_b)));
}

namespace {

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
  throw InputError("graph text line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

ParsedGraph read_graph_text(std::istream& in) {
  ParsedGraph out;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  std::vector<Edge> edges;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      out.comments.push_back(line.substr(1));
      continue;
    }
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "p") {
      if (have_header) parse_fail(line_no, "duplicate 'p' line");
      long long x = -1;
      long long y = -1;
      if (!(ls >> x >> y) || x < 0 || y < 0) parse_fail(line_no, "expected 'p <n_a> <n_b>'");
      n_a = static_cast<std::size_t>(x);
      n_b = static_cast<std::size_t>(y);
      have_header = true;
    } else if (tag == "e") {
      if (!have_header) parse_fail(line_no, "'e' before 'p'");
      long long a = -1;
      long long b = -1;
      if (!(ls >> a >> b) || a < 0 || b < 0) parse_fail(line_no, "expected 'e <a> <b>'");
      edges.emplace_back(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
    } else {
      parse_fail(line_no, "unknown record '" + tag + "'");
    }
    std::string rest;
    if (ls >> rest) parse_fail(line_no, "trailing content '" + rest + "'");
  }
  if (!have_header) throw InputError("graph text: missing 'p' line");
  out.graph = BipartiteGraph(n_a, n_b, edges);
  return out;
}

void write_graph_text(std::ostream& out, const BipartiteGraph& g, std::span<const std::string> comment_lines) {
  for (const auto& c : comment_lines) out << '#' << c << '\n';
  out << "p " << g.n_a() << ' ' << g.n_b() << '\n';
  for (std::size_t a = 0; a < g.n_a(); ++a)
    g.neighbors_of_a(a).for_each([&](std::size_t b) { out << "e " << a << ' ' << b << '\n'; });
}

}  // namespace khtile
