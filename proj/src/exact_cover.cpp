#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <span>

#include "copy_enum.hpp"
#include "degree_factor.hpp"
#include "khtile/error.hpp"
#include "khtile/matching.hpp"
#include "khtile/tiling.hpp"

namespace khtile {

namespace {

using Clock = std::chrono::steady_clock;

class BudgetClock {
 public:
  explicit BudgetClock(const SolveBudget& b) : max_nodes_(b.max_nodes), deadline_(Clock::now() + b.max_time) {}

  // Counts one search node; false once the budget is gone.
  bool tick() {
    if (exhausted_) return false;
    ++nodes_;
    if (nodes_ > max_nodes_ || ((nodes_ & 0xFF) == 0 && Clock::now() > deadline_)) exhausted_ = true;
    return !exhausted_;
  }
  bool exhausted() const { return exhausted_; }
  std::uint64_t nodes() const { return nodes_; }

 private:
  std::uint64_t max_nodes_;
  Clock::time_point deadline_;
  std::uint64_t nodes_ = 0;
  bool exhausted_ = false;
};

// Vertices with identical neighbourhoods are interchangeable. Among the
// copies through the branching vertex, only those that use the lowest
// uncovered members of each twin class need to be tried: any other copy
// leads to an isomorphic residual problem. Vertex ids as in the searches.
class TwinClasses {
 public:
  explicit TwinClasses(const BipartiteGraph& g) : n_(g.n_a()), class_of_(2 * g.n_a()) {
    group(g.n_a(), [&](std::size_t a) -> const Bitset& { return g.neighbors_of_a(a); }, 0);
    group(g.n_b(), [&](std::size_t b) -> const Bitset& { return g.neighbors_of_b(b); }, n_);
  }

  bool any() const { return any_; }

  // `in_copy` and `uncovered` are predicates on vertex ids; `pick` is the
  // branching vertex.
  template <typename InCopy, typename Uncovered>
  bool canonical(std::span<const std::uint32_t> verts, std::size_t pick, InCopy&& in_copy,
                 Uncovered&& uncovered) const {
    for (std::uint32_t u : verts) {
      if (u == pick) continue;
      for (std::size_t w : members_[class_of_[u]]) {
        if (w >= u) break;
        if (w != pick && uncovered(w) && !in_copy(w)) return false;
      }
    }
    return true;
  }

 private:
  template <typename Rows>
  void group(std::size_t count, Rows&& rows, std::size_t offset) {
    std::vector<std::size_t> order(count);
    for (std::size_t i = 0; i < count; ++i) order[i] = i;
    const auto less = [&](std::size_t x, std::size_t y) {
      const Bitset& rx = rows(x);
      const Bitset& ry = rows(y);
      for (std::size_t k = 0; k < rx.word_count(); ++k)
        if (rx.data()[k] != ry.data()[k]) return rx.data()[k] < ry.data()[k];
      return x < y;
    };
    std::sort(order.begin(), order.end(), less);
    for (std::size_t i = 0; i < count; ++i) {
      if (i == 0 || !(rows(order[i]) == rows(order[i - 1]))) members_.emplace_back();
      else any_ = true;
      members_.back().push_back(offset + order[i]);
      class_of_[offset + order[i]] = members_.size() - 1;
    }
    for (auto& m : members_) std::sort(m.begin(), m.end());
  }

  std::size_t n_;
  std::vector<std::size_t> class_of_;
  std::vector<std::vector<std::size_t>> members_;
  bool any_ = false;
};

// Exact cover over a materialized copy list. Vertices are numbered a for
// A-side and n + b for B-side.
class MaterializedSearch {
 public:
  MaterializedSearch(std::size_t n, std::size_t h, const std::vector<KhhCopy>& copies, const TwinClasses& twins,
                     BudgetClock& clock)
      : n_(n),
        h_(h),
        width_(2 * h),
        verts_(copies.size() * 2 * h),
        incident_(2 * n),
        alive_(copies.size(), 1),
        usable_(2 * n, 0),
        uncovered_a_(Bitset::full(n)),
        uncovered_b_(Bitset::full(n)),
        twins_(twins),
        clock_(clock) {
    for (std::size_t c = 0; c < copies.size(); ++c) {
      std::uint32_t* v = &verts_[c * width_];
      for (std::size_t i = 0; i < h; ++i) {
        v[i] = static_cast<std::uint32_t>(copies[c].a_set[i]);
        v[h + i] = static_cast<std::uint32_t>(n + copies[c].b_set[i]);
      }
      for (std::size_t i = 0; i < width_; ++i) {
        incident_[v[i]].push_back(static_cast<std::uint32_t>(c));
        ++usable_[v[i]];
      }
    }
  }

  bool run() { return search(); }
  const std::vector<std::uint32_t>& chosen() const { return chosen_; }

 private:
  const std::uint32_t* copy_verts(std::size_t c) const { return &verts_[c * width_]; }

  bool is_uncovered(std::size_t v) const { return v < n_ ? uncovered_a_.test(v) : uncovered_b_.test(v - n_); }

  void set_covered(std::size_t v, bool covered) {
    Bitset& side = v < n_ ? uncovered_a_ : uncovered_b_;
    const std::size_t i = v < n_ ? v : v - n_;
    if (covered) {
      side.reset(i);
    } else {
      side.set(i);
    }
  }

  void kill(std::uint32_t c) {
    alive_[c] = 0;
    const std::uint32_t* v = copy_verts(c);
    for (std::size_t i = 0; i < width_; ++i) --usable_[v[i]];
    trail_.push_back(c);
  }

  void select(std::uint32_t c) {
    const std::uint32_t* v = copy_verts(c);
    for (std::size_t i = 0; i < width_; ++i) {
      set_covered(v[i], true);
      for (std::uint32_t other : incident_[v[i]])
        if (alive_[other]) kill(other);
    }
    chosen_.push_back(c);
  }

  void unselect(std::size_t trail_mark) {
    const std::uint32_t c = chosen_.back();
    chosen_.pop_back();
    while (trail_.size() > trail_mark) {
      const std::uint32_t k = trail_.back();
      trail_.pop_back();
      alive_[k] = 1;
      const std::uint32_t* v = copy_verts(k);
      for (std::size_t i = 0; i < width_; ++i) ++usable_[v[i]];
    }
    const std::uint32_t* v = copy_verts(c);
    for (std::size_t i = 0; i < width_; ++i) set_covered(v[i], false);
  }

  // Union of usable copies must carry an h-regular spanning subgraph.
  bool factor_feasible() const {
    std::vector<Bitset> rows(n_, Bitset(n_));
    uncovered_a_.for_each([&](std::size_t a) {
      for (std::uint32_t c : incident_[a]) {
        if (!alive_[c]) continue;
        const std::uint32_t* v = copy_verts(c);
        for (std::size_t i = h_; i < width_; ++i) rows[a].set(v[i] - n_);
      }
    });
    return detail::has_regular_factor(rows, uncovered_a_, uncovered_b_, h_);
  }

  bool search() {
    if (!clock_.tick()) return false;
    std::size_t best = std::numeric_limits<std::size_t>::max();
    std::size_t pick = 0;
    for (std::size_t v = 0; v < 2 * n_; ++v) {
      if (is_uncovered(v) && usable_[v] < best) {
        best = usable_[v];
        pick = v;
      }
    }
    if (best == std::numeric_limits<std::size_t>::max()) return true;  // everything covered
    if (best == 0) return false;
    if (!factor_feasible()) return false;

    std::vector<std::uint32_t> branch;
    branch.reserve(best);
    for (std::uint32_t c : incident_[pick]) {
      if (!alive_[c]) continue;
      if (twins_.any()) {
        const std::span<const std::uint32_t> vs(copy_verts(c), width_);
        const auto in_copy = [&](std::size_t w) { return std::find(vs.begin(), vs.end(), w) != vs.end(); };
        if (!twins_.canonical(vs, pick, in_copy, [&](std::size_t w) { return is_uncovered(w); })) continue;
      }
      branch.push_back(c);
    }
    for (std::uint32_t c : branch) {
      const std::size_t mark = trail_.size();
      select(c);
      if (search()) return true;
      unselect(mark);
      if (clock_.exhausted()) return false;
    }
    return false;
  }

  std::size_t n_;
  std::size_t h_;
  std::size_t width_;
  std::vector<std::uint32_t> verts_;
  std::vector<std::vector<std::uint32_t>> incident_;
  std::vector<char> alive_;
  std::vector<std::size_t> usable_;
  Bitset uncovered_a_;
  Bitset uncovered_b_;
  std::vector<std::uint32_t> trail_;
  std::vector<std::uint32_t> chosen_;
  const TwinClasses& twins_;
  BudgetClock& clock_;
};

// Same search without a global copy list: copies through the branching
// vertex are generated on demand. The branching vertex is the uncovered
// vertex of least degree into the uncovered opposite side.
class LazySearch {
 public:
  LazySearch(const BipartiteGraph& g, std::size_t h, const TwinClasses& twins, BudgetClock& clock)
      : g_(g),
        h_(h),
        uncovered_a_(Bitset::full(g.n_a())),
        uncovered_b_(Bitset::full(g.n_b())),
        twins_(twins),
        clock_(clock) {}

  bool run() { return search(); }
  const std::vector<KhhCopy>& chosen() const { return chosen_; }

 private:
  bool search() {
    if (!clock_.tick()) return false;
    if (uncovered_a_.none()) return true;
    std::size_t best = std::numeric_limits<std::size_t>::max();
    Side side = Side::A;
    std::size_t pick = 0;
    uncovered_a_.for_each([&](std::size_t a) {
      const std::size_t d = g_.neighbors_of_a(a).and_count(uncovered_b_);
      if (d < best) {
        best = d;
        side = Side::A;
        pick = a;
      }
    });
    uncovered_b_.for_each([&](std::size_t b) {
      const std::size_t d = g_.neighbors_of_b(b).and_count(uncovered_a_);
      if (d < best) {
        best = d;
        side = Side::B;
        pick = b;
      }
    });
    if (best < h_) return false;

    std::vector<Bitset> rows(g_.n_a(), Bitset(g_.n_b()));
    uncovered_a_.for_each([&](std::size_t a) { rows[a] = g_.neighbors_of_a(a) & uncovered_b_; });
    if (!detail::has_regular_factor(rows, uncovered_a_, uncovered_b_, h_)) return false;

    bool found = false;
    const std::size_t n = g_.n_a();
    const std::size_t pick_id = side == Side::A ? pick : n + pick;
    std::vector<std::uint32_t> ids;
    const auto try_copy = [&](const std::vector<std::size_t>& as, const std::vector<std::size_t>& bs) {
      if (twins_.any()) {
        ids.clear();
        for (std::size_t a : as) ids.push_back(static_cast<std::uint32_t>(a));
        for (std::size_t b : bs) ids.push_back(static_cast<std::uint32_t>(n + b));
        const auto in_copy = [&](std::size_t w) { return std::find(ids.begin(), ids.end(), w) != ids.end(); };
        const auto uncovered = [&](std::size_t w) { return w < n ? uncovered_a_.test(w) : uncovered_b_.test(w - n); };
        if (!twins_.canonical(std::span<const std::uint32_t>(ids), pick_id, in_copy, uncovered)) return true;
      }
      for (std::size_t a : as) uncovered_a_.reset(a);
      for (std::size_t b : bs) uncovered_b_.reset(b);
      chosen_.push_back({as, bs});
      if (search()) {
        found = true;
        return false;
      }
      chosen_.pop_back();
      for (std::size_t a : as) uncovered_a_.set(a);
      for (std::size_t b : bs) uncovered_b_.set(b);
      return !clock_.exhausted();
    };
    // The universes are snapshots: the callback mutates the live sets.
    const Bitset ua = uncovered_a_;
    const Bitset ub = uncovered_b_;
    if (side == Side::A) {
      const auto rows_a = [&](std::size_t a) -> const Bitset& { return g_.neighbors_of_a(a); };
      detail::for_each_biclique(h_, ua, ub, rows_a, pick, try_copy);
    } else {
      const auto rows_b = [&](std::size_t b) -> const Bitset& { return g_.neighbors_of_b(b); };
      detail::for_each_biclique(h_, ub, ua, rows_b, pick,
                                [&](const std::vector<std::size_t>& bs, const std::vector<std::size_t>& as) {
                                  return try_copy(as, bs);
                                });
    }
    return found;
  }

  const BipartiteGraph& g_;
  std::size_t h_;
  Bitset uncovered_a_;
  Bitset uncovered_b_;
  std::vector<KhhCopy> chosen_;
  const TwinClasses& twins_;
  BudgetClock& clock_;
};

SolveOutcome solve_by_matching(const BipartiteGraph& g) {
  SolveOutcome out;
  const Matching m = maximum_matching(g);
  if (m.size == g.n_a()) {
    std::vector<KhhCopy> copies;
    copies.reserve(m.size);
    for (std::size_t a = 0; a < g.n_a(); ++a) copies.push_back({{a}, {m.mate_of_a[a]}});
    out.verdict = Verdict::kExists;
    out.tiling = Tiling::from_copies(g.n_a(), g.n_b(), std::move(copies));
  } else {
    out.verdict = Verdict::kNone;
  }
  return out;
}

}  // namespace

SolveOutcome has_perfect_tiling(const BipartiteGraph& g, std::size_t h, const SolverOptions& options) {
  if (h == 0) throw InputError("has_perfect_tiling needs h >= 1");
  if (g.n_a() != g.n_b())
    throw InputError("perfect tiling needs balanced sides, got " + std::to_string(g.n_a()) + " x " +
                     std::to_string(g.n_b()));
  const std::size_t n = g.n_a();
  if (n % h != 0) throw DivisibilityError(n, h);

  const auto start = Clock::now();
  SolveOutcome out;
  if (h == 1) {
    out = solve_by_matching(g);
  } else {
    BudgetClock clock(options.budget);
    const TwinClasses twins(g);
    KhhEnumeration en = enumerate_khh(g, h, options.copy_cap);
    bool found = false;
    std::vector<KhhCopy> chosen;
    if (!en.truncated) {
      MaterializedSearch search(n, h, en.copies, twins, clock);
      found = search.run();
      if (found)
        for (std::uint32_t c : search.chosen()) chosen.push_back(en.copies[c]);
    } else {
      en.copies.clear();
      en.copies.shrink_to_fit();
      out.lazy_copies = true;
      LazySearch search(g, h, twins, clock);
      found = search.run();
      if (found) chosen = search.chosen();
    }
    out.nodes_explored = clock.nodes();
    if (found) {
      std::sort(chosen.begin(), chosen.end());
      out.verdict = Verdict::kExists;
      out.tiling = Tiling::from_copies(n, n, std::move(chosen));
    } else {
      out.verdict = clock.exhausted() ? Verdict::kUndecided : Verdict::kNone;
    }
  }
  out.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - start);
  return out;
}

}  // namespace khtile
