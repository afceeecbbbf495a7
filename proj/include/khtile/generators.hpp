#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "khtile/graph.hpp"

namespace khtile {

enum class Model { kRandom, kLowerExtremal, kHalfExtremal, kPerturbedLower, kPerturbedHalf };

std::string_view to_string(Model m);
// Accepts random, lower_extremal, half_extremal, perturbed_lower, perturbed_half.
Model parse_model(std::string_view name);

bool is_perturbed(Model m);
bool uses_lower_construction(Model m);
bool uses_half_construction(Model m);

struct GenSpec {
  Model model = Model::kRandom;
  std::size_t n = 0;
  std::size_t h = 1;
  double alpha = 0.0;  // lower-extremal models only
  double p = 0.0;      // random and perturbed models
  std::uint64_t seed = 0;
};

// Throws InputError if the spec is outside its model's domain.
void validate(const GenSpec& spec);

enum class Exec { kSerial, kParallel };

// G_{n,n,p}. Cell (a, b) is present iff counter_uniform(seed, a * n + b) < p,
// so output depends only on (n, p, seed) and is monotone in p for a fixed seed.
BipartiteGraph gen_random(std::size_t n, double p, std::uint64_t seed, Exec exec = Exec::kSerial);

// A deterministic construction together with its part boundary: A1 = B1 =
// [0, part1_size), A2 = B2 = [part1_size, n).
struct ExtremalGraph {
  BipartiteGraph graph;
  std::size_t part1_size = 0;
};

// |A1| = |B1| = ceil(alpha * n). Complete on (A1,B1), (A1,B2), (A2,B1); empty on (A2,B2).
ExtremalGraph gen_lower_extremal(std::size_t n, double alpha, std::size_t h);

// ceil(alpha * n), with a relative guard of 1e-12 so that e.g. 0.07 * 100
// rounds to 7 rather than 8.
std::size_t lower_part_size(std::size_t n, double alpha);

// |A1| = |B1| = floor(n/2) + 1. Complete on (A1,B2) and (A2,B1), nothing else.
ExtremalGraph gen_half_extremal(std::size_t n);

// Everything an experiment needs to know about one generated instance.
struct Instance {
  BipartiteGraph graph;          // deterministic part union random part
  BipartiteGraph deterministic;  // empty for Model::kRandom
  BipartiteGraph random_part;    // empty for the purely deterministic models
  std::optional<std::size_t> part1_size;
};

// Builds any model. The random component of a perturbed model is
// gen_random(n, p, spec.seed).
Instance generate(const GenSpec& spec);

// Union of the named construction with the random component. Requires a
// perturbed model.
BipartiteGraph gen_perturbed(const GenSpec& spec);

}  // namespace khtile
