#include <algorithm>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "khtile/error.hpp"
#include "khtile/harness.hpp"

namespace khtile {

namespace {

// Round-trip precision for inputs, fixed precision for estimates; both are
// locale-independent.
std::string exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fixed6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ls(line);
  while (std::getline(ls, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <typename T>
T parse_number(const std::string& s, std::size_t line_no) {
  std::istringstream is(s);
  T v{};
  if (!(is >> v) || !is.eof()) throw InputError("csv line " + std::to_string(line_no) + ": bad number '" + s + "'");
  return v;
}

}  // namespace

void write_sweep_csv(std::ostream& out, std::span<const TrialRow> rows) {
  out << kCsvHeader << '\n';
  for (const TrialRow& r : rows) {
    out << to_string(r.model) << ',' << r.h << ',' << exact(r.alpha) << ',' << r.n << ',' << exact(r.c) << ','
        << exact(r.p) << ',' << r.trials << ',' << r.successes << ',' << r.failures << ',' << r.undecided << ','
        << fixed6(r.mean_coverage) << ',' << fixed6(r.wilson.lo) << ',' << fixed6(r.wilson.hi) << ',' << r.seed
        << '\n';
  }
}

std::vector<TrialRow> read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kCsvHeader) throw InputError("csv: unexpected header '" + line + "'");
  std::vector<TrialRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 14) throw InputError("csv line " + std::to_string(line_no) + ": expected 14 fields");
    TrialRow r;
    r.model = parse_model(f[0]);
    r.h = parse_number<std::size_t>(f[1], line_no);
    r.alpha = parse_number<double>(f[2], line_no);
    r.n = parse_number<std::size_t>(f[3], line_no);
    r.c = parse_number<double>(f[4], line_no);
    r.p = parse_number<double>(f[5], line_no);
    r.trials = parse_number<std::size_t>(f[6], line_no);
    r.successes = parse_number<std::size_t>(f[7], line_no);
    r.failures = parse_number<std::size_t>(f[8], line_no);
    r.undecided = parse_number<std::size_t>(f[9], line_no);
    r.mean_coverage = parse_number<double>(f[10], line_no);
    r.wilson.lo = parse_number<double>(f[11], line_no);
    r.wilson.hi = parse_number<double>(f[12], line_no);
    r.seed = parse_number<std::uint64_t>(f[13], line_no);
    if (r.successes + r.failures + r.undecided != r.trials)
      throw InputError("csv line " + std::to_string(line_no) + ": counts do not sum to trials");
    rows.push_back(std::move(r));
  }
  return rows;
}

void write_gnuplot_data(std::ostream& out, std::span<const TrialRow> rows) {
  std::map<std::size_t, std::vector<const TrialRow*>> by_n;
  for (const TrialRow& r : rows) by_n[r.n].push_back(&r);
  out << "# columns: p success_fraction wilson_lo wilson_hi mean_coverage\n";
  bool first = true;
  for (auto& [n, list] : by_n) {
    if (!first) out << "\n\n";
    first = false;
    std::stable_sort(list.begin(), list.end(), [](const TrialRow* x, const TrialRow* y) { return x->p < y->p; });
    out << "# n = " << n << '\n';
    for (const TrialRow* r : list) {
      out << exact(r->p) << ' ' << fixed6(r->success_fraction()) << ' ' << fixed6(r->wilson.lo) << ' '
          << fixed6(r->wilson.hi) << ' ' << fixed6(r->mean_coverage) << (r->flagged() ? " # undecided" : "") << '\n';
    }
  }
}

}  // namespace khtile
