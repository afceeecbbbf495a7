#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "khtile/graph.hpp"

namespace khtile {

inline constexpr std::size_t kUnmatched = std::numeric_limits<std::size_t>::max();

struct Matching {
  std::vector<std::size_t> mate_of_a;  // B-index or kUnmatched
  std::vector<std::size_t> mate_of_b;  // A-index or kUnmatched
  std::size_t size = 0;
};

// Hopcroft-Karp maximum matching.
Matching maximum_matching(const BipartiteGraph& g);

struct HallDeficiency {
  std::size_t deficiency = 0;
  std::vector<std::size_t> witness;  // S subset of A, sorted, with |S| - |N(S)| = deficiency
};

// max over S of |S| - |N(S)|, computed as n_a - |maximum matching|. The
// witness is the A-side of the set reachable from unmatched A-vertices by
// alternating paths; its neighborhood is exactly the B-side of that set, all
// of which is matched back into it.
HallDeficiency hall_deficiency(const BipartiteGraph& g);

}  // namespace khtile
