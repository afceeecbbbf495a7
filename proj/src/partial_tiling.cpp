#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <span>

#include "khtile/error.hpp"
#include "khtile/tiling.hpp"

namespace khtile {

namespace {

constexpr std::size_t kNoPick = std::numeric_limits<std::size_t>::max();

// Packing state over a fixed copy list. Vertex ids: a for A, n_a + b for B.
// A copy is free when none of its vertices is covered.
class Packing {
 public:
  Packing(const BipartiteGraph& g, std::size_t h, const std::vector<KhhCopy>& copies)
      : n_a_(g.n_a()),
        width_(2 * h),
        verts_(copies.size() * 2 * h),
        incident_(g.n_a() + g.n_b()),
        blocked_(copies.size(), 0),
        free_count_(g.n_a() + g.n_b(), 0),
        covered_(g.n_a() + g.n_b(), 0),
        slot_(copies.size(), kNoPick) {
    for (std::size_t c = 0; c < copies.size(); ++c) {
      std::uint32_t* v = &verts_[c * width_];
      for (std::size_t i = 0; i < h; ++i) {
        v[i] = static_cast<std::uint32_t>(copies[c].a_set[i]);
        v[h + i] = static_cast<std::uint32_t>(n_a_ + copies[c].b_set[i]);
      }
      for (std::size_t i = 0; i < width_; ++i) {
        incident_[v[i]].push_back(static_cast<std::uint32_t>(c));
        ++free_count_[v[i]];
      }
    }
  }

  std::size_t vertex_count() const { return covered_.size(); }
  const std::vector<std::uint32_t>& placed() const { return placed_; }
  std::size_t free_count(std::size_t v) const { return free_count_[v]; }
  bool covered(std::size_t v) const { return covered_[v] != 0; }
  bool is_free(std::uint32_t c) const { return blocked_[c] == 0; }
  const std::vector<std::uint32_t>& incident(std::size_t v) const { return incident_[v]; }
  std::span<const std::uint32_t> verts(std::uint32_t c) const { return {&verts_[c * width_], width_}; }

  // Sum of free-copy counts over the copy's vertices; small means the copy
  // competes with few alternatives.
  std::size_t score(std::uint32_t c) const {
    std::size_t s = 0;
    for (std::uint32_t v : verts(c)) s += free_count_[v];
    return s;
  }

  void place(std::uint32_t c) {
    for (std::uint32_t v : verts(c)) cover(v);
    slot_[c] = placed_.size();
    placed_.push_back(c);
  }

  void remove(std::uint32_t c) {
    const std::size_t s = slot_[c];
    placed_[s] = placed_.back();
    slot_[placed_[s]] = s;
    placed_.pop_back();
    slot_[c] = kNoPick;
    for (std::uint32_t v : verts(c)) uncover(v);
  }

 private:
  void cover(std::uint32_t v) {
    covered_[v] = 1;
    for (std::uint32_t c : incident_[v]) {
      if (blocked_[c]++ == 0)
        for (std::uint32_t w : verts(c)) --free_count_[w];
    }
  }

  void uncover(std::uint32_t v) {
    covered_[v] = 0;
    for (std::uint32_t c : incident_[v]) {
      if (--blocked_[c] == 0)
        for (std::uint32_t w : verts(c)) ++free_count_[w];
    }
  }

  std::size_t n_a_;
  std::size_t width_;
  std::vector<std::uint32_t> verts_;
  std::vector<std::vector<std::uint32_t>> incident_;
  std::vector<std::uint32_t> blocked_;
  std::vector<std::size_t> free_count_;
  std::vector<char> covered_;
  std::vector<std::size_t> slot_;
  std::vector<std::uint32_t> placed_;
};

// Fail-first: the uncovered vertex with the fewest free copies, then its
// lowest-scoring free copy.
void greedy_fill(Packing& p) {
  while (true) {
    std::size_t pick = kNoPick;
    std::size_t fewest = std::numeric_limits<std::size_t>::max();
    for (std::size_t v = 0; v < p.vertex_count(); ++v) {
      const std::size_t f = p.free_count(v);
      if (f > 0 && f < fewest) {
        fewest = f;
        pick = v;
      }
    }
    if (pick == kNoPick) return;
    std::uint32_t best = 0;
    std::size_t best_score = std::numeric_limits<std::size_t>::max();
    for (std::uint32_t c : p.incident(pick)) {
      if (!p.is_free(c)) continue;
      const std::size_t s = p.score(c);
      if (s < best_score) {
        best_score = s;
        best = c;
      }
    }
    p.place(best);
  }
}

// Refill after an ejection. Only copies touching the freed vertices can have
// become free, because the packing was maximal before.
std::size_t refill(Packing& p, std::span<const std::uint32_t> freed, std::uint32_t ejected, std::mt19937_64& rng) {
  std::size_t placed = 0;
  std::vector<std::uint32_t> candidates;
  while (true) {
    candidates.clear();
    for (std::uint32_t v : freed)
      for (std::uint32_t c : p.incident(v))
        if (c != ejected && p.is_free(c)) candidates.push_back(c);
    if (candidates.empty()) return placed;
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    std::size_t best_score = std::numeric_limits<std::size_t>::max();
    std::size_t ties = 0;
    std::uint32_t best = 0;
    for (std::uint32_t c : candidates) {
      const std::size_t s = p.score(c);
      if (s < best_score) {
        best_score = s;
        best = c;
        ties = 1;
      } else if (s == best_score && std::uniform_int_distribution<std::size_t>(0, ties++)(rng) == 0) {
        best = c;  // reservoir choice among equal scores
      }
    }
    p.place(best);
    ++placed;
  }
}

}  // namespace

Tiling max_partial_tiling(const BipartiteGraph& g, std::size_t h, const PartialOptions& options) {
  if (h == 0) throw InputError("max_partial_tiling needs h >= 1");
  const KhhEnumeration en = enumerate_khh(g, h, options.copy_cap);
  Packing packing(g, h, en.copies);
  greedy_fill(packing);

  std::vector<std::uint32_t> best = packing.placed();
  std::mt19937_64 rng(0x7A11D5EEDULL);
  std::vector<std::uint32_t> freed;
  for (std::uint64_t it = 0; it < options.effort && !packing.placed().empty(); ++it) {
    const auto& placed = packing.placed();
    const std::uint32_t victim = placed[std::uniform_int_distribution<std::size_t>(0, placed.size() - 1)(rng)];
    const auto vs = packing.verts(victim);
    freed.assign(vs.begin(), vs.end());
    packing.remove(victim);
    if (refill(packing, freed, victim, rng) == 0) packing.place(victim);
    if (packing.placed().size() > best.size()) best = packing.placed();
  }

  std::vector<KhhCopy> copies;
  copies.reserve(best.size());
  for (std::uint32_t c : best) copies.push_back(en.copies[c]);
  std::sort(copies.begin(), copies.end());
  return Tiling::from_copies(g.n_a(), g.n_b(), std::move(copies));
}

}  // namespace khtile
