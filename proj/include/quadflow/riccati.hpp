#pragma once

#include <optional>
#include <vector>

#include "quadflow/algebra.hpp"

// Closed-form flow of the scalar autonomous Riccati equation
//   y' = a2 y^2 + a1 y + a0
// with complex coefficients, including the limits the two-root formula does
// not cover (double root, a2 = 0).
namespace quadflow::riccati {

struct Params {
  Complex a2;
  Complex a1;
  Complex a0;
};

enum class Branch { Generic, DoubleRoot, Linear, Constant };

const char* to_string(Branch b);

// For Generic, y_plus/y_minus are the two roots and beta = a2 (y_plus - y_minus).
// For DoubleRoot both roots coincide and beta = 0.
// For Linear the single equilibrium -a0/a1 is stored in both roots and beta = a1,
// the linearization exponent there. For Constant all three are zero.
struct Solution {
  Complex y_plus;
  Complex y_minus;
  Complex beta;
  Branch branch = Branch::Generic;

  // (beta, y_plus, y_minus) -> (-beta, y_minus, y_plus); describes the same flow.
  Solution swapped() const;
};

Solution reduce(const Params& p, const Tolerance& tol = {});

// Value at time t of the solution starting from y0 at t = 0. Throws
// Error(PoleAtTime) when t sits on a finite-time blow-up.
Complex flow_at(const Solution& sol, const Params& p, Complex y0, double t);
// Same, for complex time.
Complex flow_at(const Solution& sol, const Params& p, Complex y0, Complex t);

// Location of the pole of the flow nearest to the real time t in the complex
// t-plane, if the flow has any pole at all.
std::optional<Complex> nearest_pole(const Solution& sol, const Params& p, Complex y0, double t);

// Real poles of the flow in the closed interval [t0, t1], ascending.
std::vector<double> real_poles(const Solution& sol, const Params& p, Complex y0, double t0, double t1);

struct Asymptote {
  enum class Kind { ConvergesTo, NoLimit, Periodic };
  Kind kind = Kind::NoLimit;
  Complex limit;  // meaningful for ConvergesTo
};

// Long-time (t -> +inf) behaviour for generic initial data.
Asymptote asymptote(const Solution& sol, const Tolerance& tol = {});

}  // namespace quadflow::riccati
