#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "khtile/error.hpp"
#include "khtile/generators.hpp"
#include "khtile/harness.hpp"
#include "khtile/rng.hpp"
#include "khtile/stats.hpp"

using namespace khtile;

namespace {

TrialConfig lower_h1(std::size_t trials = 20) {
  TrialConfig cfg;
  cfg.gen.model = Model::kPerturbedLower;
  cfg.gen.alpha = 0.3;
  cfg.h = 1;
  cfg.n_list = {40};
  cfg.c_grid = {1.0};
  cfg.exponent = 1.0;
  cfg.trials = trials;
  cfg.base_seed = 17;
  return cfg;
}

TrialRow synthetic(double p, std::size_t s, std::size_t f, std::size_t u = 0) {
  TrialRow r;
  r.n = 100;
  r.p = p;
  r.successes = s;
  r.failures = f;
  r.undecided = u;
  r.trials = s + f + u;
  return r;
}

std::string csv_of(const SweepResult& r) {
  std::ostringstream os;
  write_sweep_csv(os, r.rows);
  return os.str();
}

}  // namespace

TEST_CASE("wilson interval") {
  const auto w = wilson_interval(50, 100);
  CHECK(w.lo == doctest::Approx(0.4038).epsilon(1e-3));
  CHECK(w.hi == doctest::Approx(0.5962).epsilon(1e-3));
  CHECK(wilson_interval(0, 20).lo == 0.0);
  CHECK(wilson_interval(20, 20).hi == 1.0);
  CHECK(wilson_interval(0, 0).lo == 0.0);
  CHECK(wilson_interval(0, 0).hi == 1.0);
}

TEST_CASE("markov and chernoff bound the empirical tails") {
  CHECK(markov_bound(2.0, 4.0) == 0.5);
  CHECK(markov_bound(5.0, 1.0) == 1.0);
  CHECK_THROWS_AS(markov_bound(-1.0, 1.0), InputError);
  CHECK_THROWS_AS(chernoff_lower_tail(0.0, 1.0), InputError);

  std::mt19937_64 rng(1);
  std::binomial_distribution<int> bin(400, 0.1);
  const double mean = 40.0, t = 10.0;
  int lower = 0, upper = 0;
  const int reps = 20000;
  for (int i = 0; i < reps; ++i) {
    const int x = bin(rng);
    if (x <= mean - t) ++lower;
    if (x >= 2 * mean) ++upper;
  }
  CHECK(static_cast<double>(lower) / reps <= chernoff_lower_tail(mean, t));
  CHECK(static_cast<double>(upper) / reps <= markov_bound(mean, 2 * mean));
}

TEST_CASE("mode and grid parsing") {
  CHECK(parse_trial_mode("perfect").kind == TrialMode::Kind::kPerfect);
  const auto m = parse_trial_mode("partial:0.1");
  CHECK(m.kind == TrialMode::Kind::kPartial);
  CHECK(m.epsilon == 0.1);
  for (const char* bad : {"partial:", "partial:x", "partial:1.5", "full"}) CHECK_THROWS_AS(parse_trial_mode(bad), InputError);

  const auto g = parse_grid("1:2:1.25");
  REQUIRE(g.size() == 4);
  CHECK(g[3] == doctest::Approx(1.953125));
  CHECK(geometric_grid(1, 1.5625, 1.25).size() == 3);
  for (const char* bad : {"1:2", "1:2:1", "0:2:2", "a:b:c", "2:1:2"}) CHECK_THROWS_AS(parse_grid(bad), InputError);
}

TEST_CASE("configuration errors surface before any trial") {
  auto cfg = lower_h1();
  cfg.budget.max_nodes = 0;
  CHECK_THROWS_AS(estimate_success_prob(cfg, 40, 1.0), InputError);
  CHECK_THROWS_AS(sweep(cfg), InputError);
  cfg = lower_h1();
  cfg.budget.max_time = std::chrono::milliseconds(0);
  CHECK_THROWS_AS(sweep(cfg), InputError);
  cfg = lower_h1();
  cfg.h = 3;
  cfg.gen.alpha = 0.1;
  cfg.n_list = {40};
  CHECK_THROWS_AS(sweep(cfg), DivisibilityError);
  cfg = lower_h1();
  cfg.c_grid = {1.0, -1.0};
  CHECK_THROWS_AS(sweep(cfg), InputError);
  cfg = lower_h1();
  cfg.trials = 0;
  CHECK_THROWS_AS(sweep(cfg), InputError);
}

TEST_CASE("p = 1 always succeeds") {
  for (auto mode : {TrialMode{}, TrialMode{TrialMode::Kind::kPartial, 0.05}}) {
    for (std::size_t h : {1u, 2u}) {
      TrialConfig cfg;
      cfg.gen.model = Model::kRandom;
      cfg.h = h;
      cfg.n_list = {12};
      cfg.c_grid = {1.0};
      cfg.exponent = 0.0;
      cfg.trials = 5;
      cfg.mode = mode;
      const auto row = estimate_success_prob(cfg, 12, 1.0);
      CHECK(row.p == 1.0);
      CHECK(row.success_fraction() == 1.0);
      CHECK(row.mean_coverage == 1.0);
    }
  }
}

TEST_CASE("p = 0 with an empty deterministic part never succeeds") {
  TrialConfig cfg;
  cfg.gen.model = Model::kRandom;
  cfg.h = 2;
  cfg.n_list = {8};
  cfg.c_grid = {1.0};
  cfg.exponent = 600.0;  // 8^-600 underflows to exactly 0
  cfg.trials = 5;
  const auto row = estimate_success_prob(cfg, 8, 1.0);
  CHECK(row.p == 0.0);
  CHECK(row.successes == 0);
  CHECK(row.failures == 5);
  CHECK(row.mean_coverage == 0.0);
}

TEST_CASE("row accounting and per-trial hall deficits") {
  auto cfg = lower_h1(30);
  for (double c : {0.05, 0.5, 3.0}) {
    const auto row = estimate_success_prob(cfg, 40, c);
    CHECK(row.successes + row.failures + row.undecided == row.trials);
    CHECK(row.p == c * std::pow(40.0, -1.0));
    CHECK(row.hall_deficits.size() == row.failures);
    for (auto d : row.hall_deficits) CHECK(d > 0);
    CHECK(row.wilson.lo <= row.success_fraction());
    CHECK(row.wilson.hi >= row.success_fraction());
  }
}

TEST_CASE("coupled trials never lose success as p grows") {
  for (std::size_t h : {1u, 2u}) {
    TrialConfig cfg;
    cfg.gen.model = Model::kPerturbedLower;
    cfg.gen.alpha = 0.2;
    cfg.h = h;
    for (std::uint64_t t = 0; t < 25; ++t) {
      const auto seed = trial_seed(99, t);
      bool was = false;
      for (double p : {0.01, 0.03, 0.06, 0.1, 0.2, 0.4}) {
        const bool now = run_trial(cfg, 20, p, seed).success;
        CHECK_FALSE((was && !now));
        was = now;
      }
    }
  }
}

TEST_CASE("success fraction is non-decreasing in c at fixed n") {
  auto cfg = lower_h1(40);
  double last = -1.0;
  for (double c : geometric_grid(0.25, 8.0, 1.5)) {
    const auto row = estimate_success_prob(cfg, 256, c);
    CHECK(row.success_fraction() >= last);
    last = row.success_fraction();
  }
}

TEST_CASE("C above 8 ln 2 gives perfect matchings at h=1") {
  // Markov over Hall violators: E[X] <= exp(2 ln n + 2n ln 2 - C n / 4).
  auto cfg = lower_h1(100);
  const std::size_t n = 200;
  const double c = 1.1 * 8.0 * std::log(2.0);
  const double first_moment =
      std::exp(2.0 * std::log(static_cast<double>(n)) + 2.0 * n * std::log(2.0) - c * static_cast<double>(n) / 4.0);
  CHECK(markov_bound(first_moment, 1.0) < 1e-6);
  const auto row = estimate_success_prob(cfg, n, c);
  CHECK(row.failures == 0);
  CHECK(row.undecided == 0);
}

TEST_CASE("crossover from synthetic curves") {
  const std::vector<TrialRow> step{synthetic(0.1, 0, 10), synthetic(0.2, 0, 10), synthetic(0.4, 10, 0),
                                   synthetic(0.8, 10, 0)};
  const auto f = fit_crossover(step);
  REQUIRE(f.p_half);
  CHECK(*f.p_half == doctest::Approx(std::sqrt(0.2 * 0.4)));

  const std::vector<TrialRow> all{synthetic(0.1, 10, 0), synthetic(0.2, 10, 0)};
  CHECK_FALSE(fit_crossover(all).p_half);
  CHECK_FALSE(fit_crossover(std::vector<TrialRow>{synthetic(0.1, 0, 10)}).p_half);
  CHECK(fit_crossover(std::vector<TrialRow>{}).reason != "");

  // An out-of-order dip is pooled away; unsorted input is fine.
  const std::vector<TrialRow> noisy{synthetic(0.8, 10, 0), synthetic(0.1, 1, 9), synthetic(0.2, 7, 3),
                                    synthetic(0.4, 3, 7)};
  const auto g = fit_crossover(noisy);
  REQUIRE(g.p_half);
  CHECK(*g.p_half == doctest::Approx(std::sqrt(0.1 * 0.8)));

  // Flagged rows are skipped.
  const std::vector<TrialRow> flagged{synthetic(0.1, 0, 10), synthetic(0.2, 5, 0, 5), synthetic(0.4, 10, 0)};
  CHECK(*fit_crossover(flagged).p_half == doctest::Approx(std::sqrt(0.1 * 0.4)));
}

TEST_CASE("crossover of logistic data lands within one grid step") {
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 50; ++rep) {
    const double p0 = std::exp(std::uniform_real_distribution<double>(-6, -1)(rng));
    std::vector<TrialRow> rows;
    for (double p = p0 / 20.0; p < p0 * 20.0; p *= 1.2) {
      const double prob = 1.0 / (1.0 + std::pow(p / p0, -6.0));
      std::binomial_distribution<std::size_t> bin(2000, prob);
      const std::size_t s = bin(rng);
      rows.push_back(synthetic(p, s, 2000 - s));
    }
    const auto f = fit_crossover(rows);
    REQUIRE(f.p_half);
    CHECK(std::fabs(std::log(*f.p_half / p0)) <= std::log(1.2));
  }
}

TEST_CASE("exponent fit recovers planted slopes") {
  std::vector<std::pair<double, double>> inv, three_q;
  for (double n : {50.0, 100.0, 200.0, 400.0}) {
    inv.emplace_back(n, 1.0 / n);
    three_q.emplace_back(n, 7.0 * std::pow(n, -0.75));
  }
  const auto a = fit_exponent(inv);
  CHECK(a.slope == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(a.residual == doctest::Approx(0.0).epsilon(1e-12));
  const auto b = fit_exponent(three_q);
  CHECK(b.slope == doctest::Approx(-0.75).epsilon(1e-12));
  CHECK(std::exp(b.intercept) == doctest::Approx(7.0));
  std::mt19937_64 rng(6);
  for (int rep = 0; rep < 100; ++rep) {
    const double slope = std::uniform_real_distribution<double>(-3, 0)(rng);
    std::vector<std::pair<double, double>> pts;
    for (double n : {10.0, 30.0, 90.0}) pts.emplace_back(n, 0.5 * std::pow(n, slope));
    CHECK(fit_exponent(pts).slope == doctest::Approx(slope).epsilon(1e-9));
  }
  CHECK_THROWS_AS(fit_exponent(std::vector<std::pair<double, double>>{{1, 1}, {2, 1}}), InputError);
  CHECK_THROWS_AS(fit_exponent(std::vector<std::pair<double, double>>{{4, 1}, {4, 2}, {8, 1}}), InputError);
}

TEST_CASE("predicted slopes") {
  CHECK(predicted_slope(Model::kPerturbedLower, 1) == -1.0);
  CHECK(predicted_slope(Model::kRandom, 2) == -0.75);
  CHECK(predicted_slope(Model::kPerturbedHalf, 2) == -1.5);
}

TEST_CASE("degenerate sweep has one row") {
  auto cfg = lower_h1(1);
  const auto r = sweep(cfg);
  CHECK(r.rows.size() == 1);
  CHECK(r.errors.empty());
  CHECK_FALSE(r.fit);
}

TEST_CASE("sweep output is identical across worker counts") {
  TrialConfig cfg;
  cfg.gen.model = Model::kPerturbedLower;
  cfg.gen.alpha = 0.2;
  cfg.h = 2;
  cfg.n_list = {12, 20};
  cfg.c_grid = geometric_grid(0.5, 4, 2);
  cfg.exponent = 0.75;
  cfg.trials = 12;
  cfg.base_seed = 5;
  const auto one = csv_of(sweep(cfg, 1));
  CHECK(one == csv_of(sweep(cfg, 2)));
  CHECK(one == csv_of(sweep(cfg, 4)));
}

TEST_CASE("csv round trip") {
  auto cfg = lower_h1(10);
  cfg.n_list = {20, 40};
  cfg.c_grid = {0.5, 2.0};
  const auto res = sweep(cfg);
  const auto text = csv_of(res);
  CHECK(text.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
  std::istringstream is(text);
  const auto rows = read_sweep_csv(is);
  REQUIRE(rows.size() == res.rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].p == res.rows[i].p);
    CHECK(rows[i].c == res.rows[i].c);
    CHECK(rows[i].successes == res.rows[i].successes);
    CHECK(rows[i].model == res.rows[i].model);
  }
  std::ostringstream again;
  write_sweep_csv(again, rows);
  CHECK(again.str() == text);

  std::istringstream bad_header("model,h\n");
  CHECK_THROWS_AS(read_sweep_csv(bad_header), InputError);
  std::istringstream bad_counts(std::string(kCsvHeader) + "\nrandom,1,0,10,1,0.1,5,1,1,1,0.5,0,1,0\n");
  CHECK_THROWS_AS(read_sweep_csv(bad_counts), InputError);
}

TEST_CASE("gnuplot data marks undecided rows") {
  const std::vector<TrialRow> rows{synthetic(0.2, 5, 0, 5), synthetic(0.1, 0, 10)};
  std::ostringstream os;
  write_gnuplot_data(os, rows);
  const auto s = os.str();
  CHECK(s.find("# n = 100") != std::string::npos);
  CHECK(s.find("# undecided") != std::string::npos);
  CHECK(s.find("0.10000000000000001") < s.find("0.20000000000000001"));
}
