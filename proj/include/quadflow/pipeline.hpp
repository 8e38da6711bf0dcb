#pragma once

#include <optional>
#include <vector>

#include "quadflow/document.hpp"
#include "quadflow/inverse_map.hpp"
#include "quadflow/solver.hpp"
#include "quadflow/special_cases.hpp"

namespace quadflow {

// Which closed-form construction was used for a system.
enum class Route {
  Generic,             // reduce(c)
  Structural,          // reduced form read off explicit (A, a)
  Triangular,          // x1' depends on x1 only; z1 = 0
  Mirrored,            // reduce() of the x1 <-> x2 relabeled system
  MirroredTriangular,  // triangular after relabeling
};
const char* to_string(Route r);

// A ReducedForm together with the frame it lives in. When `mirrored` is set,
// the form describes symmetry_transform(c) and states are swapped on the way
// in and out.
struct ClosedForm {
  Route route = Route::Generic;
  bool mirrored = false;
  Coefficients coefficients;  // of the frame the form describes
  ReducedForm form;
  std::optional<TriangularParams> triangular;

  InitialState to_frame(const InitialState& x) const;
  TrajectoryPoint from_frame(const TrajectoryPoint& p) const;

  TrajectoryPoint at(const InitialState& x0, double t) const;
  SampleResult sample(const InitialState& x0, const std::vector<double>& grid) const;
  double pole_distance(const InitialState& x0, double t) const;
  // Limit state, if any, is reported in the original labeling.
  ClassificationReport classify(const Tolerance& tol = {}, std::int64_t max_denominator = kDefaultMaxDenominator) const;
};

// Tries the routes in the order listed in Route. Throws the error of the
// generic attempt if nothing works (ConstraintViolated, NonGeneric, ...).
ClosedForm resolve(const Coefficients& c, const std::optional<StructuralParams>& sp = std::nullopt,
                   const Tolerance& tol = {});
ClosedForm resolve(const SystemDocument& doc, const Tolerance& tol = {});

}  // namespace quadflow
