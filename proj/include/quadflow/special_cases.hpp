#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "quadflow/inverse_map.hpp"
#include "quadflow/riccati.hpp"
#include "quadflow/system.hpp"

namespace quadflow {

// Systems of the shape
//   x1' = f1 x1^2 + g x1 + h1
//   x2' = 2 f1 x1 x2 + f2 x2^2 + g x2 + h2
// i.e. c13 = c15 = c21 = c24 = 0 together with c12 = 0, c22 = 2 c11, c14 = c25.
struct TriangularParams {
  Complex f1;
  Complex f2;
  Complex g;
  Complex h1;
  Complex h2;
};

// x1 = -(f2/f1) xi2, x2 = xi1 + xi2, each xi_n a Riccati flow with
// coefficients eta[n] = (eta_n2, eta_n1, eta_n0).
struct TriangularReduced {
  std::array<std::array<Complex, 3>, 2> eta{};
  std::array<Complex, 2> gamma{};  // gamma_n = sqrt(eta_n1^2 - 4 eta_n0 eta_n2)
  std::array<Complex, 2> xi_plus{};
  std::array<Complex, 2> xi_minus{};
  std::array<riccati::Solution, 2> flow{};
  riccati::Params params(int n) const { return {eta[n][0], eta[n][1], eta[n][2]}; }
};

struct TriangularMatch {
  std::optional<TriangularParams> params;
  std::vector<std::string> reasons;  // why it did not match; empty on success
};

// Pattern match on the zero structure and the three extra conditions.
TriangularMatch match_triangular(const Coefficients& c, const Tolerance& tol = {});

Coefficients filled_coefficients(const TriangularParams& p);

// Throws InvalidInput when |f1| or |f2| is within tol.abs_tol.
TriangularReduced reduce_triangular(const TriangularParams& p, const Tolerance& tol = {});

std::array<Complex, 2> initial_xi(const TriangularParams& p, const InitialState& x0);

TrajectoryPoint solve_triangular_at(const TriangularParams& p, const InitialState& x0, double t, const Tolerance& tol = {});

// The same solution written as a ReducedForm with z1 = 0, z2 = -f2/f1.
ReducedForm to_reduced_form(const TriangularParams& p, const Tolerance& tol = {});

// Structural parameters (A11 = 0) whose forward image is filled_coefficients(p).
StructuralParams structural_triangular(const TriangularParams& p, Complex lambda1, Complex lambda2);

struct HomogeneousAB {
  Complex A;
  Complex B;
};

// Embeds (A, B) as c12 = 1, c21 = A, c22 = B, c23 = A, everything else 0.
Coefficients homogeneous_coefficients(const HomogeneousAB& ab);

struct HomogeneousGate {
  bool admissible = false;
  std::array<Complex, 4> raw_residuals{};
  std::array<Complex, 4> residuals{};
};

HomogeneousGate homogeneous_gate(const HomogeneousAB& ab, const Tolerance& tol = {});

// Solution of x_n' = lambda x_n + (quadratic part of c_hom) via
// x = exp(lambda t) zeta(tau), tau = (exp(lambda t) - 1)/lambda, where zeta
// solves the homogeneous system c_hom. Uses the closed form when c_hom reduces
// and the numeric integrator otherwise (the latter needs a real tau).
// Throws InvalidInput if c_hom has linear or constant terms, PoleAtTime if
// zeta blows up before tau.
TrajectoryPoint exp_scaling_extend(const Coefficients& c_hom, Complex lambda, const InitialState& x0, double t,
                                   const Tolerance& tol = {});

// tau for the scaling above; exactly t when lambda == 0.
Complex scaled_time(Complex lambda, double t);

}  // namespace quadflow
