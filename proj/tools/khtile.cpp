// khtile: generate perturbed bipartite graphs, solve K_{h,h}-tiling
// instances, check pair regularity and run threshold sweeps.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "khtile/error.hpp"
#include "khtile/generators.hpp"
#include "khtile/graph.hpp"
#include "khtile/harness.hpp"
#include "khtile/regularity.hpp"
#include "khtile/tiling.hpp"

using nlohmann::json;

namespace {

using namespace khtile;

std::unique_ptr<std::istream> open_input(const std::string& path) {
  if (path == "-") return std::make_unique<std::istream>(std::cin.rdbuf());
  auto f = std::make_unique<std::ifstream>(path);
  if (!*f) throw InputError("cannot open '" + path + "'");
  return f;
}

// Writes to `path`, or stdout when empty or "-".
template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream f(path);
  if (!f) throw InputError("cannot write '" + path + "'");
  fn(f);
}

json gen_spec_json(const GenSpec& s) {
  return {{"model", std::string(to_string(s.model))}, {"n", s.n},         {"h", s.h},
          {"alpha", s.alpha},                         {"p", s.p},         {"seed", s.seed}};
}

// The seed echoed by `solve`: from the "# meta" line written by `gen`.
std::optional<std::uint64_t> seed_from_comments(const std::vector<std::string>& comments) {
  for (const auto& c : comments) {
    const auto pos = c.find("meta ");
    if (pos == std::string::npos) continue;
    const json j = json::parse(c.substr(pos + 5), nullptr, false);
    if (!j.is_discarded() && j.contains("seed")) return j["seed"].get<std::uint64_t>();
  }
  return std::nullopt;
}

std::vector<std::size_t> parse_index_list(const std::string& s, std::size_t all) {
  std::vector<std::size_t> out;
  if (s.empty()) {
    for (std::size_t i = 0; i < all; ++i) out.push_back(i);
    return out;
  }
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ',')) out.push_back(std::stoull(tok));
  return out;
}

json subpair_json(const SubPair& w) {
  return {{"x", w.x}, {"y", w.y}, {"pair_density", w.pair_density}, {"sub_density", w.sub_density}};
}

json report_json(const RegularityReport& r) {
  json j = {{"density", r.density},
            {"verdict", std::string(to_string(r.verdict))},
            {"mode", std::string(to_string(r.mode))},
            {"params", {{"epsilon", r.epsilon}, {"d", r.d ? json(*r.d) : json(nullptr)}, {"trials", r.trials}}}};
  j["witness"] = r.witness ? subpair_json(*r.witness) : json(nullptr);
  if (r.d) {
    j["sparse_subpair"] = r.sparse_subpair ? subpair_json(*r.sparse_subpair) : json(nullptr);
    j["degree_violation"] = r.degree_violation ? json{{"side", r.degree_violation->side == Side::A ? "A" : "B"},
                                                       {"index", r.degree_violation->index}}
                                               : json(nullptr);
  }
  return j;
}

json tiling_json(const Tiling& t) {
  json arr = json::array();
  for (const auto& c : t.copies) arr.push_back(json::array({c.a_set, c.b_set}));
  return arr;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"K_{h,h}-tilings of randomly perturbed bipartite graphs"};
  app.require_subcommand(1);
  app.set_help_flag("--help", "Print this help message and exit");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a graph in the text format");
  gen->set_help_flag("--help", "Print this help message and exit");
  std::string gen_model = "random";
  GenSpec gspec;
  std::string gen_out;
  gen->add_option("--model", gen_model, "random|lower_extremal|half_extremal|perturbed_lower|perturbed_half");
  gen->add_option("--n", gspec.n, "Side size")->required();
  gen->add_option("--h", gspec.h, "Tile parameter");
  gen->add_option("--alpha", gspec.alpha, "Minimum-degree fraction (lower models)");
  gen->add_option("--p", gspec.p, "Edge probability (random and perturbed models)");
  gen->add_option("--seed", gspec.seed, "Seed");
  gen->add_option("--out", gen_out, "Output file (default stdout)");

  // solve
  auto* solve = app.add_subcommand("solve", "Decide whether a perfect K_{h,h}-tiling exists");
  solve->set_help_flag("--help", "Print this help message and exit");
  std::string solve_in = "-";
  std::size_t solve_h = 1;
  std::uint64_t budget_nodes = SolveBudget{}.max_nodes;
  std::int64_t budget_ms = SolveBudget{}.max_time.count();
  std::optional<std::uint64_t> solve_seed;
  solve->add_option("graph", solve_in, "Graph file, '-' for stdin");
  solve->add_option("--h", solve_h, "Tile parameter");
  solve->add_option("--budget-nodes", budget_nodes, "Search node limit");
  solve->add_option("--budget-ms", budget_ms, "Time limit in milliseconds");
  solve->add_option("--seed", solve_seed, "Seed to echo (defaults to the graph's meta line)");

  // regcheck
  auto* reg = app.add_subcommand("regcheck", "Check (super-)regularity of a vertex-set pair");
  reg->set_help_flag("--help", "Print this help message and exit");
  std::string reg_in = "-";
  std::string reg_mode = "exact";
  std::string reg_a;
  std::string reg_b;
  double reg_eps = 0.1;
  std::optional<double> reg_d;
  std::size_t reg_trials = 1000;
  std::uint64_t reg_seed = 0;
  reg->add_option("graph", reg_in, "Graph file, '-' for stdin");
  reg->add_option("--mode", reg_mode, "exact|sampled");
  reg->add_option("--a", reg_a, "Comma-separated A-indices (default: all)");
  reg->add_option("--b", reg_b, "Comma-separated B-indices (default: all)");
  reg->add_option("--epsilon", reg_eps, "Regularity parameter");
  reg->add_option("--d", reg_d, "Density floor; checks super-regularity when given");
  reg->add_option("--trials", reg_trials, "Samples in sampled mode");
  reg->add_option("--seed", reg_seed, "Seed for sampled mode");

  // sweep
  auto* sw = app.add_subcommand("sweep", "Estimate success probabilities over an (n, c) grid");
  sw->set_help_flag("--help", "Print this help message and exit");
  std::string sw_model = "perturbed_lower";
  TrialConfig cfg;
  std::string sw_grid = "0.25:16:1.25";
  std::string sw_mode = "perfect";
  std::string sw_out;
  int workers = 1;
  std::uint64_t sw_nodes = cfg.budget.max_nodes;
  std::int64_t sw_ms = cfg.budget.max_time.count();
  sw->add_option("--model", sw_model, "Generator model");
  sw->add_option("--h", cfg.h, "Tile parameter");
  sw->add_option("--alpha", cfg.gen.alpha, "Minimum-degree fraction (lower models)");
  sw->add_option("--exponent", cfg.exponent, "p = c * n^-exponent");
  sw->add_option("--n", cfg.n_list, "Side size (repeatable)")->required();
  sw->add_option("--c-grid", sw_grid, "Geometric grid start:stop:ratio");
  sw->add_option("--trials", cfg.trials, "Trials per (n, c)");
  sw->add_option("--seed", cfg.base_seed, "Base seed");
  sw->add_option("--mode", sw_mode, "perfect | partial:EPS");
  sw->add_option("--budget-nodes", sw_nodes, "Search node limit per trial");
  sw->add_option("--budget-ms", sw_ms, "Time limit per trial in milliseconds");
  sw->add_option("--effort", cfg.partial_effort, "Local-search iterations for partial tilings");
  sw->add_option("--workers", workers, "Worker threads");
  sw->add_option("--out", sw_out, "CSV output (default stdout)");

  // fit
  auto* fit = app.add_subcommand("fit", "Fit crossovers and the threshold exponent from a sweep CSV");
  fit->set_help_flag("--help", "Print this help message and exit");
  std::string fit_in = "-";
  fit->add_option("csv", fit_in, "Sweep CSV, '-' for stdin");

  // plot
  auto* plot = app.add_subcommand("plot", "Write gnuplot data of the success curves");
  plot->set_help_flag("--help", "Print this help message and exit");
  std::string plot_in = "-";
  std::string plot_out;
  plot->add_option("csv", plot_in, "Sweep CSV, '-' for stdin");
  plot->add_option("--out", plot_out, "Data file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) {
      gspec.model = parse_model(gen_model);
      const Instance inst = generate(gspec);
      std::vector<std::string> comments{" meta " + gen_spec_json(gspec).dump()};
      if (inst.part1_size) comments.push_back(" part1 " + std::to_string(*inst.part1_size));
      with_output(gen_out, [&](std::ostream& os) { write_graph_text(os, inst.graph, comments); });
    } else if (solve->parsed()) {
      const auto in = open_input(solve_in);
      const ParsedGraph pg = read_graph_text(*in);
      SolverOptions opts;
      opts.budget.max_nodes = budget_nodes;
      opts.budget.max_time = std::chrono::milliseconds(budget_ms);
      const SolveOutcome out = has_perfect_tiling(pg.graph, solve_h, opts);
      const auto seed = solve_seed ? solve_seed : seed_from_comments(pg.comments);
      json j = {{"exists", out.exists()},
                {"undecided", out.undecided()},
                {"h", solve_h},
                {"tiling", out.tiling ? tiling_json(*out.tiling) : json(nullptr)},
                {"nodes_explored", out.nodes_explored},
                {"elapsed_ms", std::chrono::duration<double, std::milli>(out.elapsed).count()},
                {"seed_echo", seed ? json(*seed) : json(nullptr)}};
      std::cout << j.dump() << '\n';
    } else if (reg->parsed()) {
      const auto in = open_input(reg_in);
      const ParsedGraph pg = read_graph_text(*in);
      const auto a = parse_index_list(reg_a, pg.graph.n_a());
      const auto b = parse_index_list(reg_b, pg.graph.n_b());
      const CheckMode mode = parse_check_mode(reg_mode);
      RegularityReport r;
      if (reg_d) {
        r = check_super_regular(pg.graph, a, b, reg_eps, *reg_d, mode, reg_trials, reg_seed);
      } else if (mode == CheckMode::kExact) {
        r = check_regular_exact(pg.graph, a, b, reg_eps);
      } else {
        r = refute_regular_sampled(pg.graph, a, b, reg_eps, reg_trials, reg_seed);
      }
      std::cout << report_json(r).dump() << '\n';
    } else if (sw->parsed()) {
      cfg.gen.model = parse_model(sw_model);
      cfg.c_grid = parse_grid(sw_grid);
      cfg.mode = parse_trial_mode(sw_mode);
      cfg.budget.max_nodes = sw_nodes;
      cfg.budget.max_time = std::chrono::milliseconds(sw_ms);
      const SweepResult res = sweep(cfg, workers);
      with_output(sw_out, [&](std::ostream& os) { write_sweep_csv(os, res.rows); });
      for (const auto& e : res.errors) std::cerr << "error: " << e << '\n';
      for (const auto& r : res.rows)
        if (r.flagged())
          std::cerr << "flagged: n=" << r.n << " c=" << r.c << " undecided " << r.undecided << "/" << r.trials << '\n';
      return res.errors.empty() ? 0 : 2;
    } else if (fit->parsed()) {
      const auto in = open_input(fit_in);
      SweepResult res;
      res.rows = read_sweep_csv(*in);
      if (res.rows.empty()) throw InputError("csv has no rows");
      summarize(res);
      json per_n = json::array();
      for (const auto& c : res.crossovers) {
        json e = {{"n", c.n}, {"p_half", c.fit.p_half ? json(*c.fit.p_half) : json(nullptr)}};
        if (!c.fit.p_half) e["reason"] = c.fit.reason;
        per_n.push_back(e);
      }
      json j = {{"per_n_crossover", per_n}, {"predicted_slope", res.predicted_slope}};
      j["slope"] = res.fit ? json(res.fit->slope) : json(nullptr);
      j["intercept"] = res.fit ? json(res.fit->intercept) : json(nullptr);
      j["residual"] = res.fit ? json(res.fit->residual) : json(nullptr);
      std::cout << j.dump(2) << '\n';
    } else if (plot->parsed()) {
      const auto in = open_input(plot_in);
      const auto rows = read_sweep_csv(*in);
      with_output(plot_out, [&](std::ostream& os) { write_gnuplot_data(os, rows); });
    }
  } catch (const std::exception& e) {
    std::cerr << "khtile: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
