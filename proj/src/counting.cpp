#include "khtile/counting.hpp"

#include <stdexcept>

#include "khtile/error.hpp"

namespace khtile {

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > UINT64_MAX) throw std::overflow_error("binomial coefficient exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(r);
}

namespace {

std::uint64_t pairs(std::uint64_t x) { return x * (x - (x > 0 ? 1 : 0)) / 2; }

}  // namespace

std::uint64_t count_k22(const BipartiteGraph& g, Exec exec) {
  const auto n_a = static_cast<std::ptrdiff_t>(g.n_a());
  std::uint64_t total = 0;
  if (exec == Exec::kParallel) {
#pragma omp parallel for schedule(dynamic, 8) reduction(+ : total)
    for (std::ptrdiff_t i = 0; i < n_a; ++i) {
      const Bitset& row = g.neighbors_of_a(static_cast<std::size_t>(i));
      for (std::ptrdiff_t j = i + 1; j < n_a; ++j)
        total += pairs(row.and_count(g.neighbors_of_a(static_cast<std::size_t>(j))));
    }
  } else {
    for (std::ptrdiff_t i = 0; i < n_a; ++i) {
      const Bitset& row = g.neighbors_of_a(static_cast<std::size_t>(i));
      for (std::ptrdiff_t j = i + 1; j < n_a; ++j)
        total += pairs(row.and_count(g.neighbors_of_a(static_cast<std::size_t>(j))));
    }
  }
  return total;
}

std::uint64_t count_k1h(const BipartiteGraph& g, std::size_t h, Side center_side) {
  if (h == 0) throw InputError("count_k1h needs h >= 1");
  std::uint64_t total = 0;
  if (center_side == Side::A) {
    for (std::size_t a = 0; a < g.n_a(); ++a) total += binomial(g.degree_a(a), h);
  } else {
    for (std::size_t b = 0; b < g.n_b(); ++b) total += binomial(g.degree_b(b), h);
  }
  return total;
}

}  // namespace khtile
