#include "quadflow/special_cases.hpp"

#include <cmath>

#include "quadflow/error.hpp"
#include "quadflow/oracle.hpp"
#include "quadflow/solver.hpp"

namespace quadflow {

namespace {

void require_nonzero_f(const TriangularParams& p, const Tolerance& tol) {
  if (std::abs(p.f1) <= tol.abs_tol) throw Error(ErrorCode::InvalidInput, "f1 must be nonzero");
  if (std::abs(p.f2) <= tol.abs_tol) throw Error(ErrorCode::InvalidInput, "f2 must be nonzero");
}

}  // namespace

TriangularMatch match_triangular(const Coefficients& c, const Tolerance& tol) {
  require_finite(c);
  TriangularMatch m;
  const double s = c.scale();
  auto zero = [&](Complex v) { return negligible(v, s, tol); };

  if (!zero(c(1, 3))) m.reasons.emplace_back("c13 != 0");
  if (!zero(c(1, 5))) m.reasons.emplace_back("c15 != 0");
  if (!zero(c(2, 1))) m.reasons.emplace_back("c21 != 0");
  if (!zero(c(2, 4))) m.reasons.emplace_back("c24 != 0");
  // Names below follow the f/g notation: f12 = c12, f21 = c22, g1 = c14, g2 = c25.
  if (!zero(c(1, 2))) m.reasons.emplace_back("f12 != 0");
  if (!approx_eq(c(2, 2), 2.0 * c(1, 1), tol)) m.reasons.emplace_back("f21 != 2 f11");
  if (!approx_eq(c(1, 4), c(2, 5), tol)) m.reasons.emplace_back("g1 != g2");
  if (std::abs(c(1, 1)) <= tol.abs_tol) m.reasons.emplace_back("f1 = 0");
  if (std::abs(c(2, 3)) <= tol.abs_tol) m.reasons.emplace_back("f2 = 0");
  if (!m.reasons.empty()) return m;

  m.params = TriangularParams{c(1, 1), c(2, 3), 0.5 * (c(1, 4) + c(2, 5)), c(1, 6), c(2, 6)};
  return m;
}

Coefficients filled_coefficients(const TriangularParams& p) {
  Coefficients c;
  c(1, 1) = p.f1;
  c(1, 4) = p.g;
  c(1, 6) = p.h1;
  c(2, 2) = 2.0 * p.f1;
  c(2, 3) = p.f2;
  c(2, 5) = p.g;
  c(2, 6) = p.h2;
  return c;
}

TriangularReduced reduce_triangular(const TriangularParams& p, const Tolerance& tol) {
  for (Complex v : {p.f1, p.f2, p.g, p.h1, p.h2}) require_finite(v, "case parameters");
  require_nonzero_f(p, tol);
  const Complex r = p.f1 / p.f2;
  TriangularReduced out;
  out.eta[0] = {p.f2, p.g, r * p.h1 + p.h2};
  out.eta[1] = {-p.f2, p.g, -r * p.h1};
  for (int n = 0; n < 2; ++n) {
    const auto& e = out.eta[n];
    out.gamma[n] = csqrt_principal(e[1] * e[1] - 4.0 * e[2] * e[0]);
    out.flow[n] = riccati::reduce(out.params(n), tol);
    out.xi_plus[n] = out.flow[n].y_plus;
    out.xi_minus[n] = out.flow[n].y_minus;
  }
  return out;
}

std::array<Complex, 2> initial_xi(const TriangularParams& p, const InitialState& x0) {
  const Complex r = p.f1 / p.f2;
  return {x0.x2 + r * x0.x1, -r * x0.x1};
}

TrajectoryPoint solve_triangular_at(const TriangularParams& p, const InitialState& x0, double t, const Tolerance& tol) {
  require_finite(x0);
  if (!std::isfinite(t)) throw Error(ErrorCode::InvalidInput, "t must be finite");
  const auto red = reduce_triangular(p, tol);
  if (t == 0.0) return {0.0, x0.x1, x0.x2};
  const auto xi0 = initial_xi(p, x0);
  const Complex xi1 = riccati::flow_at(red.flow[0], red.params(0), xi0[0], t);
  const Complex xi2 = riccati::flow_at(red.flow[1], red.params(1), xi0[1], t);
  return {t, -(p.f2 / p.f1) * xi2, xi1 + xi2};
}

ReducedForm to_reduced_form(const TriangularParams& p, const Tolerance& tol) {
  const auto red = reduce_triangular(p, tol);
  return ReducedForm::from_alpha(0.0, -p.f2 / p.f1, red.eta, tol);
}

StructuralParams structural_triangular(const TriangularParams& p, Complex lambda1, Complex lambda2) {
  if (lambda1 == 0.0 || lambda2 == 0.0) throw Error(ErrorCode::InvalidLambda, "lambda must be nonzero");
  require_nonzero_f(p, {});
  StructuralParams sp;
  const Complex a12 = -(p.f2 / p.f1) * lambda2;
  sp.A = {{{0.0, a12}, {lambda1, lambda2}}};
  sp.a[0] = {lambda1 * p.f2, p.g, (a12 * p.h2 - lambda2 * p.h1) / (a12 * lambda1)};
  sp.a[1] = {a12 * p.f1, p.g, p.h1 / a12};
  return sp;
}

Coefficients homogeneous_coefficients(const HomogeneousAB& ab) {
  Coefficients c;
  c(1, 2) = 1.0;
  c(2, 1) = ab.A;
  c(2, 2) = ab.B;
  c(2, 3) = ab.A;
  return c;
}

HomogeneousGate homogeneous_gate(const HomogeneousAB& ab, const Tolerance& tol) {
  require_finite(ab.A, "A");
  require_finite(ab.B, "B");
  const auto rep = check_constraints(homogeneous_coefficients(ab), tol);
  return {rep.satisfied, rep.raw_residuals, rep.residuals};
}

Complex scaled_time(Complex lambda, double t) {
  if (lambda == 0.0) return t;
  return t * exp_ratio(lambda * t);
}

TrajectoryPoint exp_scaling_extend(const Coefficients& c_hom, Complex lambda, const InitialState& x0, double t,
                                   const Tolerance& tol) {
  require_finite(c_hom);
  require_finite(lambda, "lambda");
  require_finite(x0);
  if (!std::isfinite(t)) throw Error(ErrorCode::InvalidInput, "t must be finite");
  for (int n = 1; n <= 2; ++n) {
    for (int j = 4; j <= 6; ++j) {
      if (c_hom(n, j) != 0.0) throw Error(ErrorCode::InvalidInput, "system must be purely quadratic");
    }
  }
  if (t == 0.0) return {0.0, x0.x1, x0.x2};

  const Complex tau = scaled_time(lambda, t);
  const Complex growth = std::exp(lambda * t);

  std::optional<ReducedForm> rf;
  try {
    rf = reduce(c_hom, tol);
  } catch (const Error&) {
    try {
      rf = reduce_mirrored(c_hom, tol);
    } catch (const Error&) {
    }
  }

  std::array<Complex, 2> zeta;
  if (rf) {
    zeta = solve_at_complex(*rf, x0, tau);
  } else {
    if (std::abs(tau.imag()) > 1e-14 * std::max(1.0, std::abs(tau))) {
      throw Error(ErrorCode::InvalidInput, "numeric fallback needs a real scaled time");
    }
    try {
      const auto p = oracle::integrate(c_hom, x0, tau.real());
      zeta = {p.x1, p.x2};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BlowupDetected) throw;
      throw Error(ErrorCode::PoleAtTime, "scaled solution reaches a pole", t);
    }
  }
  return {t, growth * zeta[0], growth * zeta[1]};
}

}  // namespace quadflow
