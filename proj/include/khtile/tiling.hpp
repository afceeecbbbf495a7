#pragma once

#include <chrono>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "khtile/graph.hpp"

namespace khtile {

// One K_{h,h}: h A-indices and h B-indices, each list sorted ascending.
struct KhhCopy {
  std::vector<std::size_t> a_set;
  std::vector<std::size_t> b_set;
  friend auto operator<=>(const KhhCopy&, const KhhCopy&) = default;
};

struct Tiling {
  std::vector<KhhCopy> copies;
  Bitset covered_a;
  Bitset covered_b;

  // Fills the covered sets from the copies. Does not check validity.
  static Tiling from_copies(std::size_t n_a, std::size_t n_b, std::vector<KhhCopy> copies);

  std::size_t covered_vertices() const { return covered_a.count() + covered_b.count(); }
  bool spans(const BipartiteGraph& g) const {
    return covered_a.count() == g.n_a() && covered_b.count() == g.n_b();
  }
};

struct KhhEnumeration {
  std::vector<KhhCopy> copies;
  bool truncated = false;  // stopped at the cap; more copies may exist
};

// All copies of K_{h,h}, each unordered pair of h-sets exactly once, in
// lexicographic order of (a_set, b_set). With a cap, stops after that many.
KhhEnumeration enumerate_khh(const BipartiteGraph& g, std::size_t h,
                             std::optional<std::size_t> cap = std::nullopt);

enum class Verdict { kExists, kNone, kUndecided };
std::string_view to_string(Verdict v);

struct SolveBudget {
  std::uint64_t max_nodes = 20'000'000;
  std::chrono::milliseconds max_time{60'000};
};

struct SolverOptions {
  SolveBudget budget;
  // Above this many copies, copies are generated per branching vertex
  // instead of being materialized up front.
  std::size_t copy_cap = 10'000'000;
};

struct SolveOutcome {
  Verdict verdict = Verdict::kUndecided;
  std::optional<Tiling> tiling;  // present iff verdict == kExists
  std::uint64_t nodes_explored = 0;
  std::chrono::nanoseconds elapsed{0};
  bool lazy_copies = false;

  bool exists() const { return verdict == Verdict::kExists; }
  bool undecided() const { return verdict == Verdict::kUndecided; }
};

// Decides whether g has a perfect K_{h,h}-tiling.
//
// h = 1 is maximum matching. For h >= 2 the search is exact cover over the
// copies: branch on the uncovered vertex with the fewest usable copies
// (lowest index on ties), take each of its copies in turn, and drop copies
// that now overlap. A node is also cut when the union of usable copies has no
// spanning h-regular subgraph, which every perfect tiling would provide; that
// test is a capacitated matching. Exceeding the budget gives kUndecided.
//
// Throws InputError if n_a != n_b or h == 0, DivisibilityError if h does not
// divide n.
SolveOutcome has_perfect_tiling(const BipartiteGraph& g, std::size_t h, const SolverOptions& options = {});

struct PartialOptions {
  std::uint64_t effort = 5000;  // local-search iterations
  std::size_t copy_cap = 2'000'000;
};

// Large vertex-disjoint K_{h,h}-tiling: fail-first greedy seeding, then
// single-copy ejection moves (remove one copy, refill its freed vertices
// greedily). The best tiling seen is returned, so the size never decreases
// as effort grows.
Tiling max_partial_tiling(const BipartiteGraph& g, std::size_t h, const PartialOptions& options = {});

enum class TilingDefect {
  kNone,
  kWrongCopySize,
  kIndexOutOfRange,
  kRepeatedVertexInCopy,
  kMissingEdge,
  kOverlap,
  kCoverageMismatch,
};
std::string_view to_string(TilingDefect d);

struct TilingCheck {
  TilingDefect defect = TilingDefect::kNone;
  std::size_t copy_index = 0;  // first offending copy, where applicable
  bool ok() const { return defect == TilingDefect::kNone; }
  explicit operator bool() const { return ok(); }
};

// Certificate checker; looks only at g and t.
TilingCheck verify_tiling(const BipartiteGraph& g, const Tiling& t, std::size_t h);

// Bookkeeping for tilings of a lower-extremal host with A1 = B1 = [0, part1).
struct PartOneUsage {
  std::size_t copies_touching_part1 = 0;
  std::size_t part2_vertices_in_those = 0;
};
PartOneUsage part_one_usage(const Tiling& t, std::size_t part1_size);

// Index of the first copy whose random edges inside (A1, B1) contain a
// K_{2,2}, or a K_{1,h} with its h leaves in one side's part 1.
std::optional<std::size_t> find_part_one_trace(const Tiling& t, const BipartiteGraph& random_part,
                                               std::size_t part1_size, std::size_t h);

}  // namespace khtile
