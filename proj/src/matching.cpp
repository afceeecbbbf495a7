#include "khtile/matching.hpp"

#include <deque>
#include <limits>

namespace khtile {

namespace {

constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();

class HopcroftKarp {
 public:
  explicit HopcroftKarp(const BipartiteGraph& g)
      : g_(g), mate_a_(g.n_a(), kUnmatched), mate_b_(g.n_b(), kUnmatched), dist_(g.n_a(), kInf) {}

  Matching run() {
    std::size_t size = 0;
    // Greedy warm start.
    for (std::size_t a = 0; a < g_.n_a(); ++a) {
      const Bitset& row = g_.neighbors_of_a(a);
      for (std::size_t b = row.find_first(); b < row.size(); b = row.find_next(b + 1)) {
        if (mate_b_[b] == kUnmatched) {
          mate_a_[a] = b;
          mate_b_[b] = a;
          ++size;
          break;
        }
      }
    }
    while (bfs()) {
      for (std::size_t a = 0; a < g_.n_a(); ++a)
        if (mate_a_[a] == kUnmatched && dfs(a)) ++size;
    }
    return {std::move(mate_a_), std::move(mate_b_), size};
  }

 private:
  bool bfs() {
    std::deque<std::size_t> queue;
    for (std::size_t a = 0; a < g_.n_a(); ++a) {
      if (mate_a_[a] == kUnmatched) {
        dist_[a] = 0;
        queue.push_back(a);
      } else {
        dist_[a] = kInf;
      }
    }
    bool found = false;
    while (!queue.empty()) {
      const std::size_t a = queue.front();
      queue.pop_front();
      g_.neighbors_of_a(a).for_each([&](std::size_t b) {
        const std::size_t next = mate_b_[b];
        if (next == kUnmatched) {
          found = true;
        } else if (dist_[next] == kInf) {
          dist_[next] = dist_[a] + 1;
          queue.push_back(next);
        }
      });
    }
    return found;
  }

  bool dfs(std::size_t a) {
    const Bitset& row = g_.neighbors_of_a(a);
    for (std::size_t b = row.find_first(); b < row.size(); b = row.find_next(b + 1)) {
      const std::size_t next = mate_b_[b];
      if (next == kUnmatched || (dist_[next] == dist_[a] + 1 && dfs(next))) {
        mate_a_[a] = b;
        mate_b_[b] = a;
        return true;
      }
    }
    dist_[a] = kInf;
    return false;
  }

  const BipartiteGraph& g_;
  std::vector<std::size_t> mate_a_;
  std::vector<std::size_t> mate_b_;
  std::vector<std::size_t> dist_;
};

}  // namespace

Matching maximum_matching(const BipartiteGraph& g) { return HopcroftKarp(g).run(); }

HallDeficiency hall_deficiency(const BipartiteGraph& g) {
  const Matching m = maximum_matching(g);
  std::vector<char> seen_a(g.n_a(), 0);
  std::vector<char> seen_b(g.n_b(), 0);
  std::deque<std::size_t> queue;
  for (std::size_t a = 0; a < g.n_a(); ++a) {
    if (m.mate_of_a[a] == kUnmatched) {
      seen_a[a] = 1;
      queue.push_back(a);
    }
  }
  while (!queue.empty()) {
    const std::size_t a = queue.front();
    queue.pop_front();
    g.neighbors_of_a(a).for_each([&](std::size_t b) {
      if (seen_b[b]) return;
      seen_b[b] = 1;
      // Maximality: b is matched, otherwise an augmenting path would exist.
      const std::size_t next = m.mate_of_b[b];
      if (next != kUnmatched && !seen_a[next]) {
        seen_a[next] = 1;
        queue.push_back(next);
      }
    });
  }
  HallDeficiency out;
  out.deficiency = g.n_a() - m.size;
  for (std::size_t a = 0; a < g.n_a(); ++a)
    if (seen_a[a]) out.witness.push_back(a);
  return out;
}

}  // namespace khtile
