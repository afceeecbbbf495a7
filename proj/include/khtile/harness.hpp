#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "khtile/generators.hpp"
#include "khtile/stats.hpp"
#include "khtile/tiling.hpp"

namespace khtile {

// Success criterion of one trial: a perfect tiling exists, or a partial
// tiling covers at least (1 - epsilon) * 2n vertices.
struct TrialMode {
  enum class Kind { kPerfect, kPartial } kind = Kind::kPerfect;
  double epsilon = 0.0;
};

// "perfect" or "partial:EPS".
TrialMode parse_trial_mode(std::string_view s);
std::string to_string(const TrialMode& m);

struct TrialConfig {
  GenSpec gen;  // model and alpha; n, h, p and seed are set per trial
  std::size_t h = 1;
  std::vector<std::size_t> n_list;
  std::vector<double> c_grid;
  double exponent = 1.0;  // p = c * n^(-exponent)
  std::size_t trials = 1;
  std::uint64_t base_seed = 0;
  SolveBudget budget;
  TrialMode mode;
  std::uint64_t partial_effort = 2000;
};

// Throws InputError on an invalid configuration; nothing has run yet.
void validate(const TrialConfig& cfg);

// Rows with more than this fraction of undecided trials are flagged and
// left out of crossover fits.
inline constexpr double kMaxUndecidedFraction = 0.05;

struct TrialRow {
  Model model = Model::kRandom;
  std::size_t h = 1;
  double alpha = 0.0;
  std::size_t n = 0;
  double c = 0.0;
  double p = 0.0;  // c * n^(-exponent) as scheduled; sampling clamps to 1
  std::size_t trials = 0;
  std::size_t successes = 0;
  std::size_t failures = 0;
  std::size_t undecided = 0;
  double mean_coverage = 0.0;  // covered fraction of the 2n vertices, averaged
  Interval wilson;             // over decided trials
  std::uint64_t seed = 0;      // base seed; trial t uses trial_seed(seed, t)
  std::vector<std::size_t> hall_deficits;  // h = 1, perfect mode: one per failed trial

  bool flagged() const {
    return trials > 0 && static_cast<double>(undecided) > kMaxUndecidedFraction * static_cast<double>(trials);
  }
  double success_fraction() const {
    const std::size_t decided = successes + failures;
    return decided == 0 ? 0.0 : static_cast<double>(successes) / static_cast<double>(decided);
  }
};

struct TrialOutcome {
  Verdict verdict = Verdict::kUndecided;
  bool success = false;
  double coverage = 0.0;
  std::optional<std::size_t> hall_deficiency;
};

// One instance: generate with the given n, p and seed, then judge it.
TrialOutcome run_trial(const TrialConfig& cfg, std::size_t n, double p, std::uint64_t seed);

// Runs cfg.trials independent instances at p = c * n^(-exponent). With
// workers > 1 the trials run on an OpenMP pool; the aggregated row does not
// depend on the worker count. workers == 1 is the plain serial loop.
TrialRow estimate_success_prob(const TrialConfig& cfg, std::size_t n, double c, int workers = 1);

struct CrossoverFit {
  std::optional<double> p_half;
  std::string reason;  // why p_half is absent
};

// Location where the success curve crosses 1/2, from rows of one n. The
// curve is made monotone by weighted isotonic regression (pool adjacent
// violators); p_half is the geometric mean of the last grid point below 1/2
// and the first above it.
CrossoverFit fit_crossover(std::span<const TrialRow> rows);

struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  // RMS of log-residuals
};

// Least squares of log p_half on log n. Needs >= 3 points with distinct n.
ExponentFit fit_exponent(std::span<const std::pair<double, double>> n_and_p_half);

// Threshold exponent expected for the model: -(2h-1)/h^2 for the random and
// lower-extremal families, -(h+1)/h for the half-extremal family.
double predicted_slope(Model model, std::size_t h);

struct NCrossover {
  std::size_t n = 0;
  CrossoverFit fit;
};

struct SweepResult {
  std::vector<TrialRow> rows;
  std::vector<NCrossover> crossovers;
  std::optional<ExponentFit> fit;
  double predicted_slope = 0.0;
  std::vector<std::string> errors;  // per-row failures; the sweep carries on
};

// Every (n, c) row, in n_list-major order, then crossovers and the slope fit.
SweepResult sweep(const TrialConfig& cfg, int workers = 1);

// Crossovers per n and the exponent fit from already computed rows.
void summarize(SweepResult& result);

// Geometric grid start, start*ratio, ... up to stop (inclusive within 1e-9).
std::vector<double> geometric_grid(double start, double stop, double ratio);

// "start:stop:ratio"
std::vector<double> parse_grid(std::string_view s);

// CSV with the exact header
// model,h,alpha,n,c,p,trials,successes,failures,undecided,mean_coverage,wilson_lo,wilson_hi,seed
inline constexpr std::string_view kCsvHeader =
    "model,h,alpha,n,c,p,trials,successes,failures,undecided,mean_coverage,wilson_lo,wilson_hi,seed";
void write_sweep_csv(std::ostream& out, std::span<const TrialRow> rows);
std::vector<TrialRow> read_sweep_csv(std::istream& in);

// Gnuplot data: one block per n ("# n = ..."), columns p, success fraction,
// wilson_lo, wilson_hi, mean_coverage; blocks separated by two blank lines.
void write_gnuplot_data(std::ostream& out, std::span<const TrialRow> rows);

}  // namespace khtile
