#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <vector>

#include "khtile/bitset.hpp"

namespace khtile::detail {

// Does the bipartite graph with A-rows `allowed` (over B), restricted to
// the vertex sets `left` (A) and `right` (B), contain a spanning subgraph in
// which every vertex of left and right has degree exactly h? Needs
// |left| == |right|; solved as a max flow with unit edge capacities and
// vertex capacities h, by BFS augmenting paths.
inline bool has_regular_factor(const std::vector<Bitset>& allowed, const Bitset& left, const Bitset& right,
                               std::size_t h) {
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  const std::size_t n_a = left.size();
  const std::size_t n_b = right.size();
  const std::size_t need = left.count();
  if (need != right.count()) return false;
  if (need == 0) return true;

  std::vector<Bitset> used(n_a, Bitset(n_b));
  std::vector<Bitset> used_by_b(n_b, Bitset(n_a));
  std::vector<std::size_t> load_a(n_a, 0);
  std::vector<std::size_t> load_b(n_b, 0);
  std::size_t flow = 0;

  std::vector<Bitset> avail(n_a);
  bool short_row = false;
  left.for_each([&](std::size_t a) {
    avail[a] = allowed[a] & right;
    if (avail[a].count() < h) short_row = true;
  });
  if (short_row) return false;

  left.for_each([&](std::size_t a) {
    avail[a].for_each([&](std::size_t b) {
      if (load_a[a] < h && load_b[b] < h) {
        used[a].set(b);
        used_by_b[b].set(a);
        ++load_a[a];
        ++load_b[b];
        ++flow;
      }
    });
  });

  std::vector<std::size_t> parent_of_b(n_b);
  std::vector<std::size_t> parent_of_a(n_a);
  std::vector<char> seen_a(n_a);
  std::vector<char> seen_b(n_b);
  std::vector<std::size_t> queue;
  while (flow < need * h) {
    std::fill(seen_a.begin(), seen_a.end(), 0);
    std::fill(seen_b.begin(), seen_b.end(), 0);
    queue.clear();
    left.for_each([&](std::size_t a) {
      if (load_a[a] < h) {
        seen_a[a] = 1;
        parent_of_a[a] = kNone;
        queue.push_back(a);
      }
    });
    std::size_t end_b = kNone;
    for (std::size_t qi = 0; qi < queue.size() && end_b == kNone; ++qi) {
      const std::size_t a = queue[qi];
      const Bitset open = avail[a] - used[a];
      for (std::size_t b = open.find_first(); b < n_b; b = open.find_next(b + 1)) {
        if (seen_b[b]) continue;
        seen_b[b] = 1;
        parent_of_b[b] = a;
        if (load_b[b] < h) {
          end_b = b;
          break;
        }
        used_by_b[b].for_each([&](std::size_t a2) {
          if (!seen_a[a2]) {
            seen_a[a2] = 1;
            parent_of_a[a2] = b;
            queue.push_back(a2);
          }
        });
      }
    }
    if (end_b == kNone) return false;
    ++load_b[end_b];
    std::size_t b = end_b;
    while (true) {
      const std::size_t a = parent_of_b[b];
      used[a].set(b);
      used_by_b[b].set(a);
      const std::size_t prev_b = parent_of_a[a];
      if (prev_b == kNone) {
        ++load_a[a];
        break;
      }
      used[a].reset(prev_b);
      used_by_b[prev_b].reset(a);
      b = prev_b;
    }
    ++flow;
  }
  return true;
}

}  // namespace khtile::detail
