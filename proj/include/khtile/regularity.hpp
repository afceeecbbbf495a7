#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "khtile/graph.hpp"

namespace khtile {

enum class RegVerdict { kRegular, kIrregular, kUnknown };
enum class CheckMode { kExact, kSampled };

std::string_view to_string(RegVerdict v);
std::string_view to_string(CheckMode m);
CheckMode parse_check_mode(std::string_view s);

// Largest side accepted by the exhaustive checks.
inline constexpr std::size_t kExactSideLimit = 16;

// A sub-pair (X, Y) with its density next to the density of the whole pair.
struct SubPair {
  std::vector<std::size_t> x;  // A-indices
  std::vector<std::size_t> y;  // B-indices
  double pair_density = 0.0;
  double sub_density = 0.0;
};

struct RegularityReport {
  double density = 0.0;
  RegVerdict verdict = RegVerdict::kUnknown;
  // Regularity failure: |X| >= eps|A|, |Y| >= eps|B|, |d(A,B) - d(X,Y)| >= eps.
  std::optional<SubPair> witness;
  // Super-regularity only: a large sub-pair with d(X,Y) <= d.
  std::optional<SubPair> sparse_subpair;
  // Super-regularity only: a vertex with deg <= d|other side|.
  std::optional<VertexRef> degree_violation;
  CheckMode mode = CheckMode::kExact;
  double epsilon = 0.0;
  std::optional<double> d;
  std::size_t trials = 0;
};

// e(X, Y) / (|X||Y|). Throws InputError on an empty set or a bad index.
double density(const BipartiteGraph& g, std::span<const std::size_t> x, std::span<const std::size_t> y);

// ceil(eps * set_size), at least 1: the smallest X that the definition
// quantifies over. Products within 1e-12 of an integer count as that integer.
std::size_t min_qualifying_size(std::size_t set_size, double epsilon);

// Decides eps-regularity of (a, b) by exhausting every X subset of a. For a
// fixed X the extreme values of d(X, Y) over |Y| = s come from the s largest
// and s smallest degrees into X, so Y need not be enumerated. Sides larger
// than kExactSideLimit are rejected.
RegularityReport check_regular_exact(const BipartiteGraph& g, std::span<const std::size_t> a,
                                     std::span<const std::size_t> b, double epsilon);

// Samples X, Y uniformly among sets of exactly the minimum qualifying sizes.
// Returns kIrregular with a witness or kUnknown; never kRegular.
RegularityReport refute_regular_sampled(const BipartiteGraph& g, std::span<const std::size_t> a,
                                        std::span<const std::size_t> b, double epsilon, std::size_t trials,
                                        std::uint64_t seed);

// (eps, d)-super-regularity: every vertex has deg > d * |other side| (always
// checked exactly), and every qualifying (X, Y) has d(X, Y) > d (exhaustive in
// exact mode, sampled in sampled mode).
RegularityReport check_super_regular(const BipartiteGraph& g, std::span<const std::size_t> a,
                                     std::span<const std::size_t> b, double epsilon, double d, CheckMode mode,
                                     std::size_t trials = 1000, std::uint64_t seed = 0);

}  // namespace khtile
