#pragma once

#include <array>
#include <vector>

#include "quadflow/riccati.hpp"
#include "quadflow/system.hpp"

namespace quadflow {

struct GenericityFlags {
  bool c21_nonzero = false;
  bool c12_nonzero = false;
  bool c24_nonzero = false;
  bool ineq1 = false;  // (2 c11 - c22)^2 + 8 c12 c21 != 0
  bool ineq2 = false;  // (c25 - c14)^2 + 4 c15 c24 != 0
};

// The four algebraic conditions
//   4 c13 c21 - c12 c22 = 0
//   2 (2 c23 - c12) c21 + (2 c11 - c22) c22 = 0
//   c24 (2 c11 - c22) + 2 c21 (c25 - c14) = 0
//   c12 c24 - 2 c15 c21 = 0
// Each raw left-hand side is also reported divided by its largest monomial
// magnitude (0/0 -> 0). Condition k holds when
// |raw_k| <= abs_tol + rel_tol * max_monomial_k.
struct ConstraintReport {
  std::array<Complex, 4> residuals{};      // normalized
  std::array<Complex, 4> raw_residuals{};
  std::array<double, 4> monomial_scale{};
  std::array<bool, 4> holds{};
  bool satisfied = false;
  GenericityFlags genericity;

  // What reduce() needs beyond `satisfied`: c21 != 0 and distinct z roots.
  bool reducible() const { return satisfied && genericity.c21_nonzero && genericity.ineq1; }
};

ConstraintReport check_constraints(const Coefficients& c, const Tolerance& tol = {});

// Closed-form ingredients: x1 = z1 w1 + z2 w2, x2 = w1 + w2 with each w_n a
// Riccati flow with coefficients alpha[n] = (alpha_n2, alpha_n1, alpha_n0).
struct ReducedForm {
  Complex z1;
  Complex z2;
  std::array<std::array<Complex, 3>, 2> alpha{};
  std::array<riccati::Solution, 2> flow{};

  riccati::Params params(int n) const { return {alpha[n][0], alpha[n][1], alpha[n][2]}; }
  Complex beta(int n) const { return flow[n].beta; }
  Complex w_plus(int n) const { return flow[n].y_plus; }
  Complex w_minus(int n) const { return flow[n].y_minus; }

  // Relabel the two components (z1 <-> z2 together with the alpha rows).
  ReducedForm swapped() const;

  static ReducedForm from_alpha(Complex z1, Complex z2, const std::array<std::array<Complex, 3>, 2>& alpha,
                                const Tolerance& tol = {});
};

// Relative agreement required between the two independent z formulas.
inline constexpr double kZMismatchTolerance = 1e-6;

// Throws ConstraintViolated, NonGeneric (c21 ~ 0), DegenerateZ (z1 = z2) or
// ZMismatch (the linear-block quadratic disagrees with the z obtained from
// the quadratic block).
ReducedForm reduce(const Coefficients& c, const Tolerance& tol = {});

// Reduction of a system whose mirror image (symmetry_transform) is reducible,
// expressed back in the original labeling. Covers c21 = 0 with c13 != 0.
ReducedForm reduce_mirrored(const Coefficients& c, const Tolerance& tol = {});

// Normalized residuals of the polynomial identities the z_n must obey, each
// evaluated at z1 then z2:
//   [0,1] cubic     c21 z^3 + (c22 - c11) z^2 + (c23 - c12) z - c13
//   [2,3] quadratic 2 c21 z^2 - (2 c11 - c22) z - c12
//   [4,5] quadratic c24 z^2 + (c25 - c14) z - c15
//   [6,7] linear    [c24 (2 c11 - c22) + 2 c21 (c25 - c14)] z + c12 c24 - 2 c15 c21
std::vector<Complex> residual_suite(const Coefficients& c, const ReducedForm& rf);

// A21 = l1, A22 = l2, A11 = z1 l1, A12 = z2 l2, a_nl = l_n^(l-1) alpha_nl.
// Throws InvalidLambda for a zero lambda.
StructuralParams structural_from_reduced(const ReducedForm& rf, Complex lambda1, Complex lambda2);

// Inverse of structural_from_reduced with l_n = A2n. Needs A21, A22 != 0.
ReducedForm reduced_from_structural(const StructuralParams& sp, const Tolerance& tol = {});

}  // namespace quadflow
