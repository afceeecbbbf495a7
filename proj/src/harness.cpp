#include "khtile/harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <string>

#include "khtile/error.hpp"
#include "khtile/matching.hpp"
#include "khtile/rng.hpp"

namespace khtile {

TrialMode parse_trial_mode(std::string_view s) {
  if (s == "perfect") return {};
  constexpr std::string_view kPrefix = "partial:";
  if (s.substr(0, kPrefix.size()) == kPrefix) {
    const std::string rest(s.substr(kPrefix.size()));
    std::size_t used = 0;
    double eps = 0.0;
    try {
      eps = std::stod(rest, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == rest.size() && used > 0 && eps >= 0.0 && eps < 1.0) return {TrialMode::Kind::kPartial, eps};
  }
  throw InputError("mode must be 'perfect' or 'partial:EPS' with EPS in [0,1), got '" + std::string(s) + "'");
}

std::string to_string(const TrialMode& m) {
  if (m.kind == TrialMode::Kind::kPerfect) return "perfect";
  return "partial:" + std::to_string(m.epsilon);
}

void validate(const TrialConfig& cfg) {
  if (cfg.h == 0) throw InputError("h must be at least 1");
  if (cfg.trials == 0) throw InputError("trials must be at least 1");
  if (cfg.n_list.empty()) throw InputError("n list is empty");
  if (cfg.c_grid.empty()) throw InputError("c grid is empty");
  if (!std::isfinite(cfg.exponent)) throw InputError("exponent must be finite");
  if (cfg.budget.max_nodes == 0) throw InputError("solver node budget must be positive");
  if (cfg.budget.max_time.count() <= 0) throw InputError("solver time budget must be positive");
  if (cfg.mode.kind == TrialMode::Kind::kPartial && !(cfg.mode.epsilon >= 0.0 && cfg.mode.epsilon < 1.0))
    throw InputError("partial-mode epsilon must lie in [0,1)");
  for (double c : cfg.c_grid)
    if (!(c > 0.0) || !std::isfinite(c)) throw InputError("every c must be positive, got " + std::to_string(c));
  for (std::size_t n : cfg.n_list) {
    if (n == 0 || n % cfg.h != 0) throw DivisibilityError(n, cfg.h);
    GenSpec probe = cfg.gen;
    probe.n = n;
    probe.h = cfg.h;
    probe.p = 0.0;
    validate(probe);
  }
}

TrialOutcome run_trial(const TrialConfig& cfg, std::size_t n, double p, std::uint64_t seed) {
  GenSpec spec = cfg.gen;
  spec.n = n;
  spec.h = cfg.h;
  spec.p = std::clamp(p, 0.0, 1.0);
  spec.seed = seed;
  const Instance inst = generate(spec);
  const double vertices = 2.0 * static_cast<double>(n);

  TrialOutcome out;
  if (cfg.mode.kind == TrialMode::Kind::kPartial) {
    const Tiling t = max_partial_tiling(inst.graph, cfg.h, {cfg.partial_effort});
    const double covered = static_cast<double>(t.covered_vertices());
    out.coverage = covered / vertices;
    out.success = covered >= (1.0 - cfg.mode.epsilon) * vertices - 1e-9;
    out.verdict = out.success ? Verdict::kExists : Verdict::kNone;
    return out;
  }

  SolverOptions opts;
  opts.budget = cfg.budget;
  const SolveOutcome s = has_perfect_tiling(inst.graph, cfg.h, opts);
  out.verdict = s.verdict;
  out.success = s.exists();
  if (s.exists()) {
    out.coverage = 1.0;
  } else if (cfg.h == 1) {
    const HallDeficiency hd = hall_deficiency(inst.graph);
    out.hall_deficiency = hd.deficiency;
    out.coverage = static_cast<double>(n - hd.deficiency) / static_cast<double>(n);
  } else {
    const Tiling t = max_partial_tiling(inst.graph, cfg.h, {cfg.partial_effort});
    out.coverage = static_cast<double>(t.covered_vertices()) / vertices;
  }
  return out;
}

TrialRow estimate_success_prob(const TrialConfig& cfg, std::size_t n, double c, int workers) {
  validate(cfg);
  TrialRow row;
  row.model = cfg.gen.model;
  row.h = cfg.h;
  row.alpha = uses_lower_construction(cfg.gen.model) ? cfg.gen.alpha : 0.0;
  row.n = n;
  row.c = c;
  row.p = c * std::pow(static_cast<double>(n), -cfg.exponent);
  row.trials = cfg.trials;
  row.seed = cfg.base_seed;

  std::vector<TrialOutcome> outcomes(cfg.trials);
  std::vector<std::string> errors(cfg.trials);
  const auto run_one = [&](std::size_t t) {
    try {
      outcomes[t] = run_trial(cfg, n, row.p, trial_seed(cfg.base_seed, t));
    } catch (const std::exception& e) {
      errors[t] = e.what();
    }
  };
  if (workers > 1) {
    const auto count = static_cast<std::ptrdiff_t>(cfg.trials);
#pragma omp parallel for num_threads(workers) schedule(dynamic, 1)
    for (std::ptrdiff_t t = 0; t < count; ++t) run_one(static_cast<std::size_t>(t));
  } else {
    for (std::size_t t = 0; t < cfg.trials; ++t) run_one(t);
  }
  for (std::size_t t = 0; t < cfg.trials; ++t)
    if (!errors[t].empty()) throw std::runtime_error("trial " + std::to_string(t) + ": " + errors[t]);

  double coverage = 0.0;
  for (const TrialOutcome& o : outcomes) {
    coverage += o.coverage;
    switch (o.verdict) {
      case Verdict::kExists: ++row.successes; break;
      case Verdict::kNone:
        ++row.failures;
        if (o.hall_deficiency) row.hall_deficits.push_back(*o.hall_deficiency);
        break;
      case Verdict::kUndecided: ++row.undecided; break;
    }
  }
  row.mean_coverage = coverage / static_cast<double>(cfg.trials);
  row.wilson = wilson_interval(row.successes, row.successes + row.failures);
  return row;
}

CrossoverFit fit_crossover(std::span<const TrialRow> rows) {
  struct Point {
    double p;
    double f;
    double w;
  };
  std::vector<Point> pts;
  for (const TrialRow& r : rows) {
    const std::size_t decided = r.successes + r.failures;
    if (r.flagged() || decided == 0) continue;
    pts.push_back({r.p, r.success_fraction(), static_cast<double>(decided)});
  }
  if (pts.size() < 2) return {std::nullopt, "fewer than 2 usable rows"};
  std::stable_sort(pts.begin(), pts.end(), [](const Point& x, const Point& y) { return x.p < y.p; });

  // Pool adjacent violators, weighted by decided trials.
  struct Block {
    double f;
    double w;
    std::size_t len;
  };
  std::vector<Block> blocks;
  for (const Point& pt : pts) {
    blocks.push_back({pt.f, pt.w, 1});
    while (blocks.size() > 1 && blocks[blocks.size() - 2].f > blocks.back().f) {
      const Block top = blocks.back();
      blocks.pop_back();
      Block& prev = blocks.back();
      prev.f = (prev.f * prev.w + top.f * top.w) / (prev.w + top.w);
      prev.w += top.w;
      prev.len += top.len;
    }
  }
  std::vector<double> smooth;
  for (const Block& b : blocks) smooth.insert(smooth.end(), b.len, b.f);

  std::optional<std::size_t> lo;
  std::optional<std::size_t> hi;
  for (std::size_t i = 0; i < smooth.size(); ++i) {
    if (smooth[i] < 0.5) lo = i;
    if (smooth[i] > 0.5 && !hi) hi = i;
  }
  if (!lo) return {std::nullopt, "curve never below 1/2"};
  if (!hi) return {std::nullopt, "curve never above 1/2"};
  return {std::sqrt(pts[*lo].p * pts[*hi].p), ""};
}

ExponentFit fit_exponent(std::span<const std::pair<double, double>> n_and_p_half) {
  if (n_and_p_half.size() < 3) throw InputError("exponent fit needs at least 3 points");
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& [n, p] : n_and_p_half) {
    if (!(n > 0.0) || !(p > 0.0)) throw InputError("exponent fit needs positive n and p_half");
    xs.push_back(std::log(n));
    ys.push_back(std::log(p));
  }
  std::vector<double> sorted = xs;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InputError("exponent fit is degenerate: repeated n");
  const double m = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / m;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / m;
  double sxx = 0.0;
  double sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  ExponentFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / m);
  return fit;
}

double predicted_slope(Model model, std::size_t h) {
  const double hd = static_cast<double>(h);
  if (uses_half_construction(model)) return -(hd + 1.0) / hd;
  return -(2.0 * hd - 1.0) / (hd * hd);
}

void summarize(SweepResult& result) {
  result.crossovers.clear();
  result.fit.reset();
  std::vector<std::size_t> ns;
  for (const TrialRow& r : result.rows)
    if (std::find(ns.begin(), ns.end(), r.n) == ns.end()) ns.push_back(r.n);
  std::vector<std::pair<double, double>> points;
  for (std::size_t n : ns) {
    std::vector<TrialRow> mine;
    for (const TrialRow& r : result.rows)
      if (r.n == n) mine.push_back(r);
    NCrossover nc{n, fit_crossover(mine)};
    if (nc.fit.p_half) points.emplace_back(static_cast<double>(n), *nc.fit.p_half);
    result.crossovers.push_back(std::move(nc));
  }
  if (!result.rows.empty()) result.predicted_slope = predicted_slope(result.rows.front().model, result.rows.front().h);
  if (points.size() >= 3) result.fit = fit_exponent(points);
}

SweepResult sweep(const TrialConfig& cfg, int workers) {
  validate(cfg);
  SweepResult result;
  result.predicted_slope = predicted_slope(cfg.gen.model, cfg.h);
  for (std::size_t n : cfg.n_list) {
    for (double c : cfg.c_grid) {
      try {
        result.rows.push_back(estimate_success_prob(cfg, n, c, workers));
      } catch (const std::exception& e) {
        result.errors.push_back("n=" + std::to_string(n) + " c=" + std::to_string(c) + ": " + e.what());
      }
    }
  }
  summarize(result);
  return result;
}

std::vector<double> geometric_grid(double start, double stop, double ratio) {
  if (!(start > 0.0) || !(stop >= start) || !(ratio > 1.0))
    throw InputError("grid needs 0 < start <= stop and ratio > 1");
  std::vector<double> out;
  for (std::size_t k = 0;; ++k) {
    const double v = start * std::pow(ratio, static_cast<double>(k));
    if (v > stop * (1.0 + 1e-9)) break;
    out.push_back(v);
  }
  return out;
}

std::vector<double> parse_grid(std::string_view s) {
  std::vector<double> parts;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t next = std::min(s.find(':', pos), s.size());
    const std::string tok(s.substr(pos, next - pos));
    std::size_t used = 0;
    try {
      parts.push_back(std::stod(tok, &used));
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != tok.size()) throw InputError("bad grid '" + std::string(s) + "'");
    pos = next + 1;
  }
  if (parts.size() != 3) throw InputError("grid must be 'start:stop:ratio', got '" + std::string(s) + "'");
  return geometric_grid(parts[0], parts[1], parts[2]);
}

}  // namespace khtile
