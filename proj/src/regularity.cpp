#include "khtile/regularity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <iterator>
#include <numeric>
#include <random>
#include <string>

#include "khtile/error.hpp"

namespace khtile {

std::string_view to_string(RegVerdict v) {
  switch (v) {
    case RegVerdict::kRegular: return "regular";
    case RegVerdict::kIrregular: return "irregular";
    case RegVerdict::kUnknown: return "unknown";
  }
  return "?";
}

std::string_view to_string(CheckMode m) { return m == CheckMode::kExact ? "exact" : "sampled"; }

CheckMode parse_check_mode(std::string_view s) {
  if (s == "exact") return CheckMode::kExact;
  if (s == "sampled") return CheckMode::kSampled;
  throw InputError("unknown mode '" + std::string(s) + "' (expected exact or sampled)");
}

namespace {

// Real-valued comparisons against eps and d treat differences below this as
// ties, so that e.g. |0.5 - 0.4| counts as reaching eps = 0.1.
constexpr double kTieTolerance = 1e-12;

void check_subset(std::span<const std::size_t> s, std::size_t limit, const char* name) {
  if (s.empty()) throw InputError(std::string("empty vertex set ") + name);
  std::vector<std::size_t> sorted(s.begin(), s.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.back() >= limit) throw InputError(std::string("index out of range in ") + name);
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InputError(std::string("repeated index in ") + name);
}

std::size_t edges_between(const BipartiteGraph& g, std::span<const std::size_t> x, std::span<const std::size_t> y) {
  std::size_t e = 0;
  for (std::size_t a : x)
    for (std::size_t b : y) e += g.has_edge(a, b) ? 1 : 0;
  return e;
}

// |d(A,B) - d(X,Y)| computed from integer counts.
double deviation(std::size_t e_ab, std::size_t na, std::size_t nb, std::size_t e_xy, std::size_t nx, std::size_t ny) {
  const auto lhs = static_cast<long double>(e_ab) * nx * ny;
  const auto rhs = static_cast<long double>(e_xy) * na * nb;
  return static_cast<double>(std::fabs(lhs - rhs) / (static_cast<long double>(na) * nb * nx * ny));
}

bool reaches(double dev, double epsilon) { return dev >= epsilon - kTieTolerance; }

// The pair relabelled to local indices with bitmask adjacency; requires
// sides of at most kExactSideLimit.
struct LocalPair {
  std::size_t na = 0;
  std::size_t nb = 0;
  std::vector<std::uint32_t> col;  // col[y]: mask of local A-neighbours of local y
  std::size_t edges = 0;

  LocalPair(const BipartiteGraph& g, std::span<const std::size_t> a, std::span<const std::size_t> b)
      : na(a.size()), nb(b.size()), col(b.size(), 0) {
    for (std::size_t j = 0; j < nb; ++j)
      for (std::size_t i = 0; i < na; ++i)
        if (g.has_edge(a[i], b[j])) {
          col[j] |= std::uint32_t{1} << i;
          ++edges;
        }
  }
};

std::vector<std::size_t> pick(std::span<const std::size_t> from, std::uint32_t mask) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < from.size(); ++i)
    if ((mask >> i) & 1U) out.push_back(from[i]);
  return out;
}

RegularityReport base_report(const BipartiteGraph& g, std::span<const std::size_t> a, std::span<const std::size_t> b,
                             double epsilon, CheckMode mode) {
  check_subset(a, g.n_a(), "a");
  check_subset(b, g.n_b(), "b");
  if (!(epsilon > 0.0 && epsilon <= 1.0)) throw InputError("epsilon must lie in (0, 1]");
  RegularityReport r;
  r.density = density(g, a, b);
  r.mode = mode;
  r.epsilon = epsilon;
  return r;
}

void require_exact_size(std::span<const std::size_t> a, std::span<const std::size_t> b) {
  if (a.size() > kExactSideLimit || b.size() > kExactSideLimit)
    throw InputError("exact check supports at most " + std::to_string(kExactSideLimit) +
                     " vertices per side; use sampled mode");
}

std::vector<std::size_t> sample_subset(std::span<const std::size_t> from, std::size_t k, std::mt19937_64& rng) {
  std::vector<std::size_t> out;
  out.reserve(k);
  std::sample(from.begin(), from.end(), std::back_inserter(out), k, rng);
  return out;
}

}  // namespace

double density(const BipartiteGraph& g, std::span<const std::size_t> x, std::span<const std::size_t> y) {
  if (x.empty() || y.empty()) throw InputError("density of an empty vertex set");
  for (std::size_t a : x)
    if (a >= g.n_a()) throw InputError("A-vertex " + std::to_string(a) + " out of range");
  for (std::size_t b : y)
    if (b >= g.n_b()) throw InputError("B-vertex " + std::to_string(b) + " out of range");
  return static_cast<double>(edges_between(g, x, y)) / (static_cast<double>(x.size()) * static_cast<double>(y.size()));
}

std::size_t min_qualifying_size(std::size_t set_size, double epsilon) {
  const double raw = epsilon * static_cast<double>(set_size);
  const double nearest = std::round(raw);
  const double size = std::fabs(raw - nearest) < 1e-12 ? nearest : std::ceil(raw);
  return std::max<std::size_t>(1, static_cast<std::size_t>(size));
}

RegularityReport check_regular_exact(const BipartiteGraph& g, std::span<const std::size_t> a,
                                     std::span<const std::size_t> b, double epsilon) {
  RegularityReport r = base_report(g, a, b, epsilon, CheckMode::kExact);
  require_exact_size(a, b);
  const LocalPair lp(g, a, b);
  const std::size_t mx = min_qualifying_size(lp.na, epsilon);
  const std::size_t my = min_qualifying_size(lp.nb, epsilon);

  std::vector<std::size_t> weight(lp.nb);
  std::vector<std::size_t> order(lp.nb);
  std::vector<std::size_t> prefix(lp.nb + 1);
  const std::uint32_t limit = std::uint32_t{1} << lp.na;
  for (std::uint32_t xmask = 1; xmask < limit; ++xmask) {
    const auto nx = static_cast<std::size_t>(std::popcount(xmask));
    if (nx < mx) continue;
    for (std::size_t j = 0; j < lp.nb; ++j) weight[j] = static_cast<std::size_t>(std::popcount(lp.col[j] & xmask));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return weight[i] > weight[j]; });
    prefix[0] = 0;
    for (std::size_t k = 0; k < lp.nb; ++k) prefix[k + 1] = prefix[k] + weight[order[k]];
    for (std::size_t s = my; s <= lp.nb; ++s) {
      const std::size_t hi = prefix[s];
      const std::size_t lo = prefix[lp.nb] - prefix[lp.nb - s];
      const bool hi_bad = reaches(deviation(lp.edges, lp.na, lp.nb, hi, nx, s), epsilon);
      const bool lo_bad = !hi_bad && reaches(deviation(lp.edges, lp.na, lp.nb, lo, nx, s), epsilon);
      if (!hi_bad && !lo_bad) continue;
      SubPair w;
      w.x = pick(a, xmask);
      if (hi_bad) {
        for (std::size_t k = 0; k < s; ++k) w.y.push_back(b[order[k]]);
      } else {
        for (std::size_t k = lp.nb - s; k < lp.nb; ++k) w.y.push_back(b[order[k]]);
      }
      std::sort(w.y.begin(), w.y.end());
      w.pair_density = r.density;
      w.sub_density = density(g, w.x, w.y);
      r.witness = std::move(w);
      r.verdict = RegVerdict::kIrregular;
      return r;
    }
  }
  r.verdict = RegVerdict::kRegular;
  return r;
}

RegularityReport refute_regular_sampled(const BipartiteGraph& g, std::span<const std::size_t> a,
                                        std::span<const std::size_t> b, double epsilon, std::size_t trials,
                                        std::uint64_t seed) {
  if (trials == 0) throw InputError("sampled refutation needs trials >= 1");
  RegularityReport r = base_report(g, a, b, epsilon, CheckMode::kSampled);
  r.trials = trials;
  const std::size_t mx = min_qualifying_size(a.size(), epsilon);
  const std::size_t my = min_qualifying_size(b.size(), epsilon);
  const std::size_t e_ab = edges_between(g, a, b);
  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    SubPair w;
    w.x = sample_subset(a, mx, rng);
    w.y = sample_subset(b, my, rng);
    const std::size_t e_xy = edges_between(g, w.x, w.y);
    if (!reaches(deviation(e_ab, a.size(), b.size(), e_xy, mx, my), epsilon)) continue;
    std::sort(w.x.begin(), w.x.end());
    std::sort(w.y.begin(), w.y.end());
    w.pair_density = r.density;
    w.sub_density = density(g, w.x, w.y);
    r.witness = std::move(w);
    r.verdict = RegVerdict::kIrregular;
    return r;
  }
  r.verdict = RegVerdict::kUnknown;
  return r;
}

RegularityReport check_super_regular(const BipartiteGraph& g, std::span<const std::size_t> a,
                                     std::span<const std::size_t> b, double epsilon, double d, CheckMode mode,
                                     std::size_t trials, std::uint64_t seed) {
  if (!(d >= 0.0 && d <= 1.0)) throw InputError("d must lie in [0, 1]");
  if (mode == CheckMode::kSampled && trials == 0) throw InputError("sampled check needs trials >= 1");
  RegularityReport r = base_report(g, a, b, epsilon, mode);
  if (mode == CheckMode::kExact) require_exact_size(a, b);
  r.d = d;
  r.trials = mode == CheckMode::kSampled ? trials : 0;

  // Degree bullets, strict: deg(v) > d * |other side|.
  const double floor_a = d * static_cast<double>(b.size()) + kTieTolerance;
  const double floor_b = d * static_cast<double>(a.size()) + kTieTolerance;
  for (std::size_t v : a) {
    const std::size_t deg = edges_between(g, std::span<const std::size_t>(&v, 1), b);
    if (static_cast<double>(deg) <= floor_a) {
      r.degree_violation = VertexRef{Side::A, v};
      r.verdict = RegVerdict::kIrregular;
      return r;
    }
  }
  for (std::size_t v : b) {
    const std::size_t deg = edges_between(g, a, std::span<const std::size_t>(&v, 1));
    if (static_cast<double>(deg) <= floor_b) {
      r.degree_violation = VertexRef{Side::B, v};
      r.verdict = RegVerdict::kIrregular;
      return r;
    }
  }

  const std::size_t mx = min_qualifying_size(a.size(), epsilon);
  const std::size_t my = min_qualifying_size(b.size(), epsilon);
  const auto record = [&](std::vector<std::size_t> x, std::vector<std::size_t> y) {
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    SubPair w{std::move(x), std::move(y), r.density, 0.0};
    w.sub_density = density(g, w.x, w.y);
    r.sparse_subpair = std::move(w);
    r.verdict = RegVerdict::kIrregular;
  };

  if (mode == CheckMode::kExact) {
    // For fixed X the sparsest Y of size s takes the s smallest degrees into
    // X, and that average only grows with s, so |Y| = my is the worst case.
    const LocalPair lp(g, a, b);
    std::vector<std::size_t> order(lp.nb);
    std::vector<std::size_t> weight(lp.nb);
    const std::uint32_t limit = std::uint32_t{1} << lp.na;
    for (std::uint32_t xmask = 1; xmask < limit; ++xmask) {
      const auto nx = static_cast<std::size_t>(std::popcount(xmask));
      if (nx < mx) continue;
      for (std::size_t j = 0; j < lp.nb; ++j) weight[j] = static_cast<std::size_t>(std::popcount(lp.col[j] & xmask));
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return weight[i] < weight[j]; });
      std::size_t e = 0;
      for (std::size_t k = 0; k < my; ++k) e += weight[order[k]];
      if (static_cast<double>(e) / static_cast<double>(nx * my) <= d + kTieTolerance) {
        std::vector<std::size_t> y;
        for (std::size_t k = 0; k < my; ++k) y.push_back(b[order[k]]);
        record(pick(a, xmask), std::move(y));
        return r;
      }
    }
    r.verdict = RegVerdict::kRegular;
    return r;
  }

  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    auto x = sample_subset(a, mx, rng);
    auto y = sample_subset(b, my, rng);
    if (static_cast<double>(edges_between(g, x, y)) / static_cast<double>(mx * my) <= d + kTieTolerance) {
      record(std::move(x), std::move(y));
      return r;
    }
  }
  r.verdict = RegVerdict::kUnknown;
  return r;
}

}  // namespace khtile
