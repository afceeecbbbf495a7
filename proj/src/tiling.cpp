#include "khtile/tiling.hpp"

#include <algorithm>

#include "copy_enum.hpp"
#include "khtile/counting.hpp"
#include "khtile/error.hpp"

namespace khtile {

Tiling Tiling::from_copies(std::size_t n_a, std::size_t n_b, std::vector<KhhCopy> copies) {
  Tiling t{std::move(copies), Bitset(n_a), Bitset(n_b)};
  for (const auto& c : t.copies) {
    for (std::size_t a : c.a_set)
      if (a < n_a) t.covered_a.set(a);
    for (std::size_t b : c.b_set)
      if (b < n_b) t.covered_b.set(b);
  }
  return t;
}

KhhEnumeration enumerate_khh(const BipartiteGraph& g, std::size_t h, std::optional<std::size_t> cap) {
  if (h == 0) throw InputError("enumerate_khh needs h >= 1");
  KhhEnumeration out;
  if (cap && *cap == 0) {
    out.truncated = true;
    return out;
  }
  const auto rows = [&](std::size_t a) -> const Bitset& { return g.neighbors_of_a(a); };
  detail::for_each_biclique(h, Bitset::full(g.n_a()), Bitset::full(g.n_b()), rows, std::nullopt,
                            [&](const std::vector<std::size_t>& as, const std::vector<std::size_t>& bs) {
                              if (cap && out.copies.size() == *cap) {
                                out.truncated = true;
                                return false;
                              }
                              out.copies.push_back({as, bs});
                              return true;
                            });
  return out;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::kExists: return "exists";
    case Verdict::kNone: return "none";
    case Verdict::kUndecided: return "undecided";
  }
  return "?";
}

std::string_view to_string(TilingDefect d) {
  switch (d) {
    case TilingDefect::kNone: return "ok";
    case TilingDefect::kWrongCopySize: return "wrong_copy_size";
    case TilingDefect::kIndexOutOfRange: return "index_out_of_range";
    case TilingDefect::kRepeatedVertexInCopy: return "repeated_vertex_in_copy";
    case TilingDefect::kMissingEdge: return "missing_edge";
    case TilingDefect::kOverlap: return "overlap";
    case TilingDefect::kCoverageMismatch: return "coverage_mismatch";
  }
  return "?";
}

TilingCheck verify_tiling(const BipartiteGraph& g, const Tiling& t, std::size_t h) {
  Bitset seen_a(g.n_a());
  Bitset seen_b(g.n_b());
  for (std::size_t i = 0; i < t.copies.size(); ++i) {
    const KhhCopy& c = t.copies[i];
    if (h == 0 || c.a_set.size() != h || c.b_set.size() != h) return {TilingDefect::kWrongCopySize, i};
    for (std::size_t a : c.a_set)
      if (a >= g.n_a()) return {TilingDefect::kIndexOutOfRange, i};
    for (std::size_t b : c.b_set)
      if (b >= g.n_b()) return {TilingDefect::kIndexOutOfRange, i};
    Bitset own_a(g.n_a());
    Bitset own_b(g.n_b());
    for (std::size_t a : c.a_set) {
      if (own_a.test(a)) return {TilingDefect::kRepeatedVertexInCopy, i};
      own_a.set(a);
    }
    for (std::size_t b : c.b_set) {
      if (own_b.test(b)) return {TilingDefect::kRepeatedVertexInCopy, i};
      own_b.set(b);
    }
    for (std::size_t a : c.a_set)
      for (std::size_t b : c.b_set)
        if (!g.has_edge(a, b)) return {TilingDefect::kMissingEdge, i};
    if (own_a.and_count(seen_a) != 0 || own_b.and_count(seen_b) != 0) return {TilingDefect::kOverlap, i};
    seen_a |= own_a;
    seen_b |= own_b;
  }
  if (!(t.covered_a == seen_a) || !(t.covered_b == seen_b)) return {TilingDefect::kCoverageMismatch, 0};
  return {};
}

PartOneUsage part_one_usage(const Tiling& t, std::size_t part1_size) {
  PartOneUsage out;
  for (const auto& c : t.copies) {
    const auto in_part1 = [&](std::size_t x) { return x < part1_size; };
    const std::size_t hits = static_cast<std::size_t>(std::count_if(c.a_set.begin(), c.a_set.end(), in_part1) +
                                                      std::count_if(c.b_set.begin(), c.b_set.end(), in_part1));
    if (hits == 0) continue;
    ++out.copies_touching_part1;
    out.part2_vertices_in_those += c.a_set.size() + c.b_set.size() - hits;
  }
  return out;
}

std::optional<std::size_t> find_part_one_trace(const Tiling& t, const BipartiteGraph& random_part,
                                               std::size_t part1_size, std::size_t h) {
  for (std::size_t i = 0; i < t.copies.size(); ++i) {
    const KhhCopy& c = t.copies[i];
    std::vector<std::size_t> xs;
    std::vector<std::size_t> ys;
    for (std::size_t a : c.a_set)
      if (a < part1_size) xs.push_back(a);
    for (std::size_t b : c.b_set)
      if (b < part1_size) ys.push_back(b);
    if (xs.empty() || ys.empty()) continue;
    const BipartiteGraph trace = induced_subgraph(random_part, xs, ys);
    if (count_k22(trace) > 0 || count_k1h(trace, h, Side::A) > 0 || count_k1h(trace, h, Side::B) > 0) return i;
  }
  return std::nullopt;
}

}  // namespace khtile
