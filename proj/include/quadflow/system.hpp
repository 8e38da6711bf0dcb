#pragma once

#include <array>

#include "quadflow/algebra.hpp"

namespace quadflow {

// Coefficients of the planar quadratic system
//   x_n' = c_n1 x1^2 + c_n2 x1 x2 + c_n3 x2^2 + c_n4 x1 + c_n5 x2 + c_n6,  n = 1, 2.
// Indices are 1-based to match that layout.
struct Coefficients {
  std::array<std::array<Complex, 6>, 2> c{};

  Complex& operator()(int n, int j) { return c[n - 1][j - 1]; }
  const Complex& operator()(int n, int j) const { return c[n - 1][j - 1]; }

  // Largest |c_nj| over the quadratic and linear terms (j = 1..5).
  double scale() const;

  friend bool operator==(const Coefficients&, const Coefficients&) = default;
};

// Mixing matrix A (x = A y) and per-row Riccati coefficients (a_n2, a_n1, a_n0).
struct StructuralParams {
  std::array<std::array<Complex, 2>, 2> A{};
  std::array<std::array<Complex, 3>, 2> a{};

  Complex det() const { return A[0][0] * A[1][1] - A[0][1] * A[1][0]; }
};

struct InitialState {
  Complex x1;
  Complex x2;
};

struct TrajectoryPoint {
  double t = 0.0;
  Complex x1;
  Complex x2;

  InitialState state() const { return {x1, x2}; }
};

// Right-hand side of the system at (x1, x2).
std::array<Complex, 2> rhs(const Coefficients& c, Complex x1, Complex x2);

void require_finite(const Coefficients& c);
void require_finite(const StructuralParams& sp);
void require_finite(const InitialState& x0);

}  // namespace quadflow
