#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "quadflow/inverse_map.hpp"
#include "quadflow/rational.hpp"
#include "quadflow/system.hpp"

namespace quadflow {

// w1(0), w2(0) for the initial state. Throws DegenerateZ when z1 ~ z2.
std::pair<Complex, Complex> initial_w(const ReducedForm& rf, const InitialState& x0);

TrajectoryPoint solve_at(const ReducedForm& rf, const InitialState& x0, double t);
// Complex-time evaluation; used by the exponential-scaling extension.
std::array<Complex, 2> solve_at_complex(const ReducedForm& rf, const InitialState& x0, Complex t);

struct PoleReport {
  int component = 0;      // 1 or 2: which w_n blows up
  double t_pole = 0.0;    // estimated location
  double t_before = 0.0;  // grid bracket
  double t_after = 0.0;
};

struct SampleResult {
  std::vector<TrajectoryPoint> points;
  std::vector<PoleReport> poles;
};

// Pointwise solve_at over an ascending grid. Points that hit a pole are left
// out; every real pole of w1 or w2 inside the grid span is listed once.
SampleResult sample(const ReducedForm& rf, const InitialState& x0, const std::vector<double>& t_grid);

// Distance in the complex t-plane from real t to the nearest pole of either w_n.
double pole_distance(const ReducedForm& rf, const InitialState& x0, double t);

enum class Regime { Isochronous, AsymptoticallyIsochronous, ConvergesToEquilibrium, Generic };

const char* to_string(Regime r);

struct ClassificationReport {
  Regime regime = Regime::Generic;
  std::optional<double> period;
  std::optional<std::array<Rational, 2>> rho;
  std::optional<double> omega;
  std::optional<std::array<Complex, 2>> limit_state;
};

inline constexpr std::int64_t kDefaultMaxDenominator = 64;
inline constexpr double kCommensurabilityTolerance = 1e-9;

// Regime from the two exponents beta_n. For Isochronous, omega = 2 pi / period
// and beta_n = i rho_n omega with coprime integer rho_n.
ClassificationReport classify(const ReducedForm& rf, const Tolerance& tol = {},
                              std::int64_t max_denominator = kDefaultMaxDenominator);

// Alternate route through explicit structural parameters: y(0) = A^{-1} x(0),
// each y_n flowed with its own Riccati coefficients, x = A y.
TrajectoryPoint solve_via_structural(const StructuralParams& sp, const InitialState& x0, double t,
                                     const Tolerance& tol = {});
TrajectoryPoint solve_via_structural(const ReducedForm& rf, const InitialState& x0, double t,
                                     std::pair<Complex, Complex> lambda, const Tolerance& tol = {});
TrajectoryPoint solve_via_structural(const Coefficients& c, const InitialState& x0, double t,
                                     std::pair<Complex, Complex> lambda, const Tolerance& tol = {});

}  // namespace quadflow
