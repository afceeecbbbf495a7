#include "khtile/stats.hpp"

#include <algorithm>
#include <cmath>

#include "khtile/error.hpp"

namespace khtile {

double markov_bound(double mean, double t) {
  if (!(mean >= 0.0)) throw InputError("markov_bound needs a nonnegative mean");
  if (!(t > 0.0)) throw InputError("markov_bound needs t > 0");
  return std::min(1.0, mean / t);
}

double chernoff_lower_tail(double mean, double t) {
  if (!(mean > 0.0)) throw InputError("chernoff_lower_tail needs a positive mean");
  if (!(t >= 0.0)) throw InputError("chernoff_lower_tail needs t >= 0");
  return std::exp(-t * t / (2.0 * mean));
}

Interval wilson_interval(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) return {};
  const double n = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (phat + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
  // The closed form misses the endpoints by rounding when phat is 0 or 1.
  return {successes == 0 ? 0.0 : std::max(0.0, centre - half),
          successes == trials ? 1.0 : std::min(1.0, centre + half)};
}

}  // namespace khtile
