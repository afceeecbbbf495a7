#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "khtile/bitset.hpp"

namespace khtile {

enum class Side : std::uint8_t { A, B };

struct VertexRef {
  Side side = Side::A;
  std::size_t index = 0;
  friend bool operator==(const VertexRef&, const VertexRef&) = default;
};

// (a-index, b-index)
using Edge = std::pair<std::size_t, std::size_t>;

// Bipartite graph on sides A = [0, n_a) and B = [0, n_b). Adjacency is held
// as one bitset over B per A-vertex, plus the transposed rows for B-side
// queries. Values are immutable once built and safe to share across threads.
class BipartiteGraph {
 public:
  BipartiteGraph() = default;

  // Duplicate edges collapse. Throws InputError naming the first pair with
  // an out-of-range endpoint.
  BipartiteGraph(std::size_t n_a, std::size_t n_b, std::span<const Edge> edges);

  // Builds from A-side rows; every row must have size n_b.
  static BipartiteGraph from_rows(std::size_t n_b, std::vector<Bitset> rows);

  std::size_t n_a() const { return n_a_; }
  std::size_t n_b() const { return n_b_; }
  std::size_t edge_count() const { return edge_count_; }

  bool has_edge(std::size_t a, std::size_t b) const { return rows_a_[a].test(b); }

  // B-neighbors of A-vertex a.
  const Bitset& neighbors_of_a(std::size_t a) const { return rows_a_[a]; }
  // A-neighbors of B-vertex b.
  const Bitset& neighbors_of_b(std::size_t b) const { return rows_b_[b]; }

  std::size_t degree_a(std::size_t a) const { return rows_a_[a].count(); }
  std::size_t degree_b(std::size_t b) const { return rows_b_[b].count(); }
  std::size_t degree(VertexRef v) const;

  // Sorted by (a, b).
  std::vector<Edge> edges() const;

  friend bool operator==(const BipartiteGraph& x, const BipartiteGraph& y) {
    return x.n_a_ == y.n_a_ && x.n_b_ == y.n_b_ && x.rows_a_ == y.rows_a_;
  }

 private:
  void finish();

  std::size_t n_a_ = 0;
  std::size_t n_b_ = 0;
  std::size_t edge_count_ = 0;
  std::vector<Bitset> rows_a_;
  std::vector<Bitset> rows_b_;
};

// Edge-set union of two graphs with identical side sizes.
BipartiteGraph graph_union(const BipartiteGraph& g1, const BipartiteGraph& g2);

// Minimum degree over all vertices of both sides. Throws on an empty side.
std::size_t min_degree(const BipartiteGraph& g);

// N(S) for S a set of A-indices, as a bitset over B.
Bitset neighborhood(const BipartiteGraph& g, std::span<const std::size_t> a_set);

// Subgraph induced on the given A- and B-indices, relabelled densely in the
// order given.
BipartiteGraph induced_subgraph(const BipartiteGraph& g, std::span<const std::size_t> a_set,
                                std::span<const std::size_t> b_set);

BipartiteGraph complete_graph(std::size_t n_a, std::size_t n_b);

// Text format:
//   p <n_a> <n_b>
//   e <a> <b>        (one per edge, 0-indexed)
// Lines starting with '#' are comments.
struct ParsedGraph {
  BipartiteGraph graph;
  std::vector<std::string> comments;  // without the leading '#', in file order
};

ParsedGraph read_graph_text(std::istream& in);
void write_graph_text(std::ostream& out, const BipartiteGraph& g,
                      std::span<const std::string> comment_lines = {});

}  // namespace khtile
