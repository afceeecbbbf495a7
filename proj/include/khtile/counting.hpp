#pragma once

#include <cstddef>
#include <cstdint>

#include "khtile/generators.hpp"
#include "khtile/graph.hpp"

namespace khtile {

// C(n, k); throws std::overflow_error past 2^64 - 1.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

// Number of unordered K_{2,2} copies: sum over A-pairs of C(codegree, 2).
// The parallel kernel splits the outer A-index across OpenMP threads and
// returns the same value as the serial loop.
std::uint64_t count_k22(const BipartiteGraph& g, Exec exec = Exec::kSerial);

// Number of K_{1,h} copies centred on the given side: sum of C(deg, h).
std::uint64_t count_k1h(const BipartiteGraph& g, std::size_t h, Side center_side);

}  // namespace khtile
