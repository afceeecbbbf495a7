#pragma once

// Private helpers shared by the copy enumerator and the search routines.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "khtile/bitset.hpp"

namespace khtile::detail {

// Calls fn(subset) for every k-subset of `items` in lexicographic order of
// positions. Stops early and returns false once fn returns false.
template <typename Fn>
bool for_each_subset(const std::vector<std::size_t>& items, std::size_t k, std::vector<std::size_t>& subset, Fn&& fn) {
  const std::size_t n = items.size();
  if (k > n) return true;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  subset.resize(k);
  while (true) {
    for (std::size_t i = 0; i < k; ++i) subset[i] = items[idx[i]];
    if (!fn(subset)) return false;
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return true;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Enumerates complete bipartite h x h pieces with the "left" h-set drawn from
// left_universe and the "right" h-set from right_universe, where rows(x)
// gives the right-side neighbourhood of left vertex x. When `anchor` is set,
// only left sets containing it are produced. Left and right sets are passed
// to fn sorted ascending. Returns false if fn asked to stop.
template <typename Rows, typename Fn>
bool for_each_biclique(std::size_t h, const Bitset& left_universe, const Bitset& right_universe, Rows&& rows,
                       std::optional<std::size_t> anchor, Fn&& fn) {
  std::vector<std::size_t> left;
  std::vector<std::size_t> sorted_left;
  std::vector<std::size_t> right;
  std::vector<Bitset> common_stack;
  common_stack.reserve(h + 1);

  const auto emit = [&](const Bitset& common) {
    const std::vector<std::size_t> items = common.indices();
    sorted_left = left;
    std::sort(sorted_left.begin(), sorted_left.end());
    return for_each_subset(items, h, right, [&](const std::vector<std::size_t>& r) { return fn(sorted_left, r); });
  };

  // Extends `left` with vertices from index `start` onward.
  const auto extend = [&](auto&& self, std::size_t start, const Bitset& common) -> bool {
    if (left.size() == h) return emit(common);
    for (std::size_t x = left_universe.find_next(start); x < left_universe.size();
         x = left_universe.find_next(x + 1)) {
      if (anchor && x == *anchor) continue;
      Bitset next = common & rows(x);
      if (next.count() < h) continue;
      left.push_back(x);
      const bool go_on = self(self, x + 1, next);
      left.pop_back();
      if (!go_on) return false;
    }
    return true;
  };

  if (anchor) {
    Bitset common = right_universe & rows(*anchor);
    if (common.count() < h) return true;
    left.push_back(*anchor);
    return extend(extend, 0, common);
  }
  return extend(extend, 0, right_universe);
}

}  // namespace khtile::detail
