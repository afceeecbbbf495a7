#pragma once

#include <stdexcept>
#include <string>

namespace khtile {

// Raised for malformed inputs: out-of-range indices, size mismatches,
// parameters outside their documented domain.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A perfect K_{h,h}-tiling needs h | n on both sides.
class DivisibilityError : public InputError {
 public:
  DivisibilityError(std::size_t n, std::size_t h)
      : InputError("side size " + std::to_string(n) + " is not divisible by h = " + std::to_string(h)),
        n_(n),
        h_(h) {}
  std::size_t n() const { return n_; }
  std::size_t h() const { return h_; }

 private:
  std::size_t n_;
  std::size_t h_;
};

}  // namespace khtile
