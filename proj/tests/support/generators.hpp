#pragma once

// Random inputs for property tests. Fixed seeds keep failures reproducible.

#include <cmath>
#include <random>

#include "quadflow/system.hpp"

namespace testgen {

using quadflow::Complex;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  // Uniform in the closed unit disk.
  Complex disk(double radius = 1.0) {
    const double r = radius * std::sqrt(uniform(0.0, 1.0));
    const double th = uniform(0.0, 2.0 * M_PI);
    return std::polar(r, th);
  }

  // |z| in [lo, hi], uniform phase.
  Complex annulus(double lo, double hi) { return std::polar(uniform(lo, hi), uniform(0.0, 2.0 * M_PI)); }

  Complex nonzero(double min_abs = 0.1) {
    Complex z;
    do z = disk(2.0);
    while (std::abs(z) < min_abs);
    return z;
  }

  quadflow::InitialState bidisk() { return {disk(), disk()}; }

  // Entries in the unit disk; rejection on |D| > 1e-3 and |a_n2| > 1e-3.
  quadflow::StructuralParams structural(double min_det = 1e-3, double min_a2 = 1e-3) {
    quadflow::StructuralParams sp;
    for (;;) {
      for (auto& row : sp.A)
        for (auto& v : row) v = disk();
      for (auto& row : sp.a)
        for (auto& v : row) v = disk();
      if (std::abs(sp.det()) > min_det && std::abs(sp.a[0][0]) > min_a2 && std::abs(sp.a[1][0]) > min_a2) return sp;
    }
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace testgen
