#pragma once

#include <cstddef>

namespace khtile {

// P(X >= t) <= E[X] / t for nonnegative X and t > 0; the bound is capped at 1.
double markov_bound(double mean, double t);

// Lower tail for binomial or hypergeometric X:
// P(X <= E[X] - t) <= exp(-t^2 / (2 E[X])).
double chernoff_lower_tail(double mean, double t);

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

// Wilson score interval for a binomial proportion; z = 1.96 gives ~95%.
// With zero trials the interval is [0, 1].
Interval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054);

}  // namespace khtile
