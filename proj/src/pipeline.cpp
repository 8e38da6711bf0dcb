#include "quadflow/pipeline.hpp"

#include <functional>

#include "quadflow/error.hpp"
#include "quadflow/forward_map.hpp"

namespace quadflow {

const char* to_string(Route r) {
  switch (r) {
    case Route::Generic: return "generic";
    case Route::Structural: return "structural";
    case Route::Triangular: return "triangular";
    case Route::Mirrored: return "mirrored";
    case Route::MirroredTriangular: return "mirrored_triangular";
  }
  return "?";
}

InitialState ClosedForm::to_frame(const InitialState& x) const {
  return mirrored ? InitialState{x.x2, x.x1} : x;
}

TrajectoryPoint ClosedForm::from_frame(const TrajectoryPoint& p) const {
  return mirrored ? TrajectoryPoint{p.t, p.x2, p.x1} : p;
}

TrajectoryPoint ClosedForm::at(const InitialState& x0, double t) const {
  return from_frame(solve_at(form, to_frame(x0), t));
}

SampleResult ClosedForm::sample(const InitialState& x0, const std::vector<double>& grid) const {
  auto r = quadflow::sample(form, to_frame(x0), grid);
  for (auto& p : r.points) p = from_frame(p);
  return r;
}

double ClosedForm::pole_distance(const InitialState& x0, double t) const {
  return quadflow::pole_distance(form, to_frame(x0), t);
}

ClassificationReport ClosedForm::classify(const Tolerance& tol, std::int64_t max_denominator) const {
  auto r = quadflow::classify(form, tol, max_denominator);
  if (mirrored && r.limit_state) r.limit_state = std::array<Complex, 2>{(*r.limit_state)[1], (*r.limit_state)[0]};
  return r;
}

namespace {

std::optional<ClosedForm> try_frame(const Coefficients& c, const std::optional<StructuralParams>& sp, bool mirrored,
                                    const Tolerance& tol) {
  const auto attempt = [](const std::function<ReducedForm()>& f) -> std::optional<ReducedForm> {
    try {
      return f();
    } catch (const Error&) {
      return std::nullopt;
    }
  };
  ClosedForm cf;
  cf.mirrored = mirrored;
  cf.coefficients = c;

  if (auto rf = attempt([&] { return reduce(c, tol); })) {
    cf.route = mirrored ? Route::Mirrored : Route::Generic;
    cf.form = *rf;
    return cf;
  }
  if (sp) {
    if (auto rf = attempt([&] { return reduced_from_structural(*sp, tol); })) {
      cf.route = Route::Structural;
      cf.form = *rf;
      return cf;
    }
  }
  const auto m = match_triangular(c, tol);
  if (m.params) {
    if (auto rf = attempt([&] { return to_reduced_form(*m.params, tol); })) {
      cf.route = mirrored ? Route::MirroredTriangular : Route::Triangular;
      cf.form = *rf;
      cf.triangular = m.params;
      return cf;
    }
  }
  return std::nullopt;
}

}  // namespace

ClosedForm resolve(const Coefficients& c, const std::optional<StructuralParams>& sp, const Tolerance& tol) {
  validate(tol);
  require_finite(c);
  if (auto cf = try_frame(c, sp, false, tol)) return *cf;
  std::optional<StructuralParams> msp;
  if (sp) msp = symmetry_transform(*sp);
  if (auto cf = try_frame(symmetry_transform(c), msp, true, tol)) return *cf;
  reduce(c, tol);  // rethrows the generic diagnosis
  throw Error(ErrorCode::NonGeneric, "no closed-form route applies");
}

ClosedForm resolve(const SystemDocument& doc, const Tolerance& tol) {
  return resolve(doc.resolved_coefficients(tol), doc.structural, tol);
}

}  // namespace quadflow
