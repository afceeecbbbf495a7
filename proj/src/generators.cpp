#include "khtile/generators.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "khtile/error.hpp"
#include "khtile/rng.hpp"

namespace khtile {

std::string_view to_string(Model m) {
  switch (m) {
    case Model::kRandom: return "random";
    case Model::kLowerExtremal: return "lower_extremal";
    case Model::kHalfExtremal: return "half_extremal";
    case Model::kPerturbedLower: return "perturbed_lower";
    case Model::kPerturbedHalf: return "perturbed_half";
  }
  return "?";
}

Model parse_model(std::string_view name) {
  for (Model m : {Model::kRandom, Model::kLowerExtremal, Model::kHalfExtremal, Model::kPerturbedLower,
                  Model::kPerturbedHalf})
    if (to_string(m) == name) return m;
  throw InputError("unknown model '" + std::string(name) + "'");
}

bool is_perturbed(Model m) { return m == Model::kPerturbedLower || m == Model::kPerturbedHalf; }
bool uses_lower_construction(Model m) { return m == Model::kLowerExtremal || m == Model::kPerturbedLower; }
bool uses_half_construction(Model m) { return m == Model::kHalfExtremal || m == Model::kPerturbedHalf; }

namespace {

void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("edge probability " + std::to_string(p) + " outside [0,1]");
}

void check_lower_params(std::size_t n, double alpha, std::size_t h) {
  if (h == 0) throw InputError("h must be at least 1");
  // alpha < 1/(2h) also gives beta = 1 - alpha > (2h-1) alpha.
  if (!(alpha > 0.0 && alpha < 1.0 / (2.0 * static_cast<double>(h))))
    throw InputError("alpha = " + std::to_string(alpha) + " outside (0, 1/(2h)) for h = " + std::to_string(h));
  if (n == 0 || lower_part_size(n, alpha) == 0 || static_cast<double>(n) * alpha < 1.0 - 1e-12)
    throw InputError("n = " + std::to_string(n) + " is below 1/alpha");
}

}  // namespace

void validate(const GenSpec& spec) {
  if (spec.n == 0) throw InputError("n must be at least 1");
  if (spec.h == 0) throw InputError("h must be at least 1");
  if (spec.model == Model::kRandom || is_perturbed(spec.model)) check_probability(spec.p);
  if (uses_lower_construction(spec.model)) check_lower_params(spec.n, spec.alpha, spec.h);
  if (uses_half_construction(spec.model) && spec.n < 2) throw InputError("half-extremal needs n >= 2");
}

BipartiteGraph gen_random(std::size_t n, double p, std::uint64_t seed, Exec exec) {
  check_probability(p);
  std::vector<Bitset> rows(n, Bitset(n));
  const auto fill_row = [&](std::size_t a) {
    const std::uint64_t base = static_cast<std::uint64_t>(a) * n;
    for (std::size_t b = 0; b < n; ++b)
      if (counter_uniform(seed, base + b) < p) rows[a].set(b);
  };
  if (exec == Exec::kParallel) {
    const auto rows_n = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t a = 0; a < rows_n; ++a) fill_row(static_cast<std::size_t>(a));
  } else {
    for (std::size_t a = 0; a < n; ++a) fill_row(a);
  }
  return BipartiteGraph::from_rows(n, std::move(rows));
}

std::size_t lower_part_size(std::size_t n, double alpha) {
  return static_cast<std::size_t>(std::ceil(alpha * static_cast<double>(n) * (1.0 - 1e-12)));
}

ExtremalGraph gen_lower_extremal(std::size_t n, double alpha, std::size_t h) {
  check_lower_params(n, alpha, h);
  const std::size_t k = lower_part_size(n, alpha);
  Bitset part1(n);
  for (std::size_t i = 0; i < k; ++i) part1.set(i);
  std::vector<Bitset> rows;
  rows.reserve(n);
  for (std::size_t a = 0; a < n; ++a) rows.push_back(a < k ? Bitset::full(n) : part1);
  return {BipartiteGraph::from_rows(n, std::move(rows)), k};
}

ExtremalGraph gen_half_extremal(std::size_t n) {
  if (n < 2) throw InputError("half-extremal needs n >= 2");
  const std::size_t k = n / 2 + 1;  // |A1| = |B1|; |A2| = |B2| = ceil(n/2) - 1
  Bitset part1(n);
  Bitset part2(n);
  for (std::size_t i = 0; i < n; ++i) (i < k ? part1 : part2).set(i);
  std::vector<Bitset> rows;
  rows.reserve(n);
  for (std::size_t a = 0; a < n; ++a) rows.push_back(a < k ? part2 : part1);
  return {BipartiteGraph::from_rows(n, std::move(rows)), k};
}

Instance generate(const GenSpec& spec) {
  validate(spec);
  Instance out;
  const BipartiteGraph empty(spec.n, spec.n, {});
  if (uses_lower_construction(spec.model)) {
    auto ex = gen_lower_extremal(spec.n, spec.alpha, spec.h);
    out.deterministic = std::move(ex.graph);
    out.part1_size = ex.part1_size;
  } else if (uses_half_construction(spec.model)) {
    auto ex = gen_half_extremal(spec.n);
    out.deterministic = std::move(ex.graph);
    out.part1_size = ex.part1_size;
  } else {
    out.deterministic = empty;
  }
  if (spec.model == Model::kRandom || is_perturbed(spec.model)) {
    out.random_part = gen_random(spec.n, spec.p, spec.seed);
  } else {
    out.random_part = empty;
  }
  out.graph = graph_union(out.deterministic, out.random_part);
  return out;
}

BipartiteGraph gen_perturbed(const GenSpec& spec) {
  if (!is_perturbed(spec.model))
    throw InputError("gen_perturbed needs a perturbed model, got " + std::string(to_string(spec.model)));
  return generate(spec).graph;
}

}  // namespace khtile
