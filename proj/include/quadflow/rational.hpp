#pragma once

#include <cstdint>
#include <optional>

namespace quadflow {

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

// Lowest-denominator convergent p/q of the continued fraction of x with
// q <= max_denominator and |x - p/q| <= rel_tol * max(1, |x|).
// Returns nullopt when no convergent within the denominator bound is close enough.
std::optional<Rational> rational_approximation(double x, std::int64_t max_denominator, double rel_tol);

}  // namespace quadflow
