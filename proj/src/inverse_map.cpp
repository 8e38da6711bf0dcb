#include "quadflow/inverse_map.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <utility>

#include "quadflow/error.hpp"
#include "quadflow/forward_map.hpp"

namespace quadflow {

namespace {

double max_abs(std::initializer_list<Complex> terms) {
  double m = 0.0;
  for (const auto& t : terms) m = std::max(m, std::abs(t));
  return m;
}

struct Poly {
  Complex value;
  double scale;
};

Poly cubic(const Coefficients& c, Complex z) {
  const Complex t3 = c(2, 1) * z * z * z, t2 = (c(2, 2) - c(1, 1)) * z * z, t1 = (c(2, 3) - c(1, 2)) * z,
                t0 = -c(1, 3);
  return {t3 + t2 + t1 + t0, max_abs({t3, t2, t1, t0})};
}

Poly quadratic_block(const Coefficients& c, Complex z) {
  const Complex t2 = 2.0 * c(2, 1) * z * z, t1 = -(2.0 * c(1, 1) - c(2, 2)) * z, t0 = -c(1, 2);
  return {t2 + t1 + t0, max_abs({t2, t1, t0})};
}

Poly linear_block(const Coefficients& c, Complex z) {
  const Complex t2 = c(2, 4) * z * z, t1 = (c(2, 5) - c(1, 4)) * z, t0 = -c(1, 5);
  return {t2 + t1 + t0, max_abs({t2, t1, t0})};
}

Poly first_degree(const Coefficients& c, Complex z) {
  const Complex t1 = (c(2, 4) * (2.0 * c(1, 1) - c(2, 2)) + 2.0 * c(2, 1) * (c(2, 5) - c(1, 4))) * z;
  const Complex t0 = c(1, 2) * c(2, 4) - 2.0 * c(1, 5) * c(2, 1);
  const double s = max_abs({c(2, 4) * 2.0 * c(1, 1) * z, c(2, 4) * c(2, 2) * z, 2.0 * c(2, 1) * c(2, 5) * z,
                            2.0 * c(2, 1) * c(1, 4) * z, c(1, 2) * c(2, 4), 2.0 * c(1, 5) * c(2, 1)});
  return {t1 + t0, s};
}

// Both roots of q2 z^2 + q1 z + q0 with root_minus using -sqrt(disc).
std::pair<Complex, Complex> quadratic_roots(Complex q2, Complex q1, Complex q0) {
  const Complex s = csqrt_principal(q1 * q1 - 4.0 * q2 * q0);
  const Complex nm = -q1 - s, np = -q1 + s;
  Complex minus, plus;
  if (std::abs(nm) >= std::abs(np)) {
    minus = nm / (2.0 * q2);
    plus = 2.0 * q0 / nm;
  } else {
    plus = np / (2.0 * q2);
    minus = 2.0 * q0 / np;
  }
  return {minus, plus};
}

bool same_pair(Complex a1, Complex a2, Complex b1, Complex b2, double rel) {
  const double scale = std::max({std::abs(a1), std::abs(a2), 1e-300});
  auto close = [&](Complex x, Complex y) { return std::abs(x - y) <= rel * scale; };
  return (close(a1, b1) && close(a2, b2)) || (close(a1, b2) && close(a2, b1));
}

}  // namespace

ConstraintReport check_constraints(const Coefficients& c, const Tolerance& tol) {
  require_finite(c);
  ConstraintReport r;
  const Complex c11 = c(1, 1), c12 = c(1, 2), c13 = c(1, 3), c14 = c(1, 4), c15 = c(1, 5);
  const Complex c21 = c(2, 1), c22 = c(2, 2), c23 = c(2, 3), c24 = c(2, 4), c25 = c(2, 5);

  r.raw_residuals[0] = 4.0 * c13 * c21 - c12 * c22;
  r.monomial_scale[0] = max_abs({4.0 * c13 * c21, c12 * c22});

  r.raw_residuals[1] = 2.0 * (-c12 + 2.0 * c23) * c21 + (2.0 * c11 - c22) * c22;
  r.monomial_scale[1] = max_abs({2.0 * c12 * c21, 4.0 * c23 * c21, 2.0 * c11 * c22, c22 * c22});

  r.raw_residuals[2] = c24 * (2.0 * c11 - c22) + 2.0 * c21 * (c25 - c14);
  r.monomial_scale[2] = max_abs({2.0 * c24 * c11, c24 * c22, 2.0 * c21 * c25, 2.0 * c21 * c14});

  r.raw_residuals[3] = c12 * c24 - 2.0 * c15 * c21;
  r.monomial_scale[3] = max_abs({c12 * c24, 2.0 * c15 * c21});

  r.satisfied = true;
  for (int k = 0; k < 4; ++k) {
    r.residuals[k] = safe_div(r.raw_residuals[k], r.monomial_scale[k]);
    r.holds[k] = negligible(r.raw_residuals[k], r.monomial_scale[k], tol);
    r.satisfied = r.satisfied && r.holds[k];
  }

  const double s = c.scale();
  r.genericity.c21_nonzero = !negligible(c21, s, tol);
  r.genericity.c12_nonzero = !negligible(c12, s, tol);
  r.genericity.c24_nonzero = !negligible(c24, s, tol);
  const Complex b1 = 2.0 * c11 - c22;
  r.genericity.ineq1 = !negligible(b1 * b1 + 8.0 * c12 * c21, max_abs({b1 * b1, 8.0 * c12 * c21}), tol);
  const Complex b2 = c25 - c14;
  r.genericity.ineq2 = !negligible(b2 * b2 + 4.0 * c15 * c24, max_abs({b2 * b2, 4.0 * c15 * c24}), tol);
  return r;
}

ReducedForm ReducedForm::swapped() const {
  ReducedForm out = *this;
  std::swap(out.z1, out.z2);
  std::swap(out.alpha[0], out.alpha[1]);
  std::swap(out.flow[0], out.flow[1]);
  return out;
}

ReducedForm ReducedForm::from_alpha(Complex z1, Complex z2, const std::array<std::array<Complex, 3>, 2>& alpha,
                                    const Tolerance& tol) {
  ReducedForm rf;
  rf.z1 = z1;
  rf.z2 = z2;
  rf.alpha = alpha;
  for (int n = 0; n < 2; ++n) rf.flow[n] = riccati::reduce(rf.params(n), tol);
  return rf;
}

ReducedForm reduce(const Coefficients& c, const Tolerance& tol) {
  const ConstraintReport report = check_constraints(c, tol);
  if (!report.satisfied) {
    throw Error(ErrorCode::ConstraintViolated, "coefficients violate the solvability constraints");
  }
  if (!report.genericity.c21_nonzero) {
    throw Error(ErrorCode::NonGeneric, "c21 vanishes; the generic reduction does not apply");
  }
  if (!report.genericity.ineq1) {
    throw Error(ErrorCode::DegenerateZ, "(2 c11 - c22)^2 + 8 c12 c21 vanishes, so z1 = z2");
  }

  // 2 c21 z^2 - (2 c11 - c22) z - c12 = 0; z1 takes the minus sign.
  const auto [z1, z2] = quadratic_roots(2.0 * c(2, 1), -(2.0 * c(1, 1) - c(2, 2)), -c(1, 2));

  // The linear block gives a second quadratic for the same z unless it vanishes
  // identically, which the constraints force whenever c24 = 0.
  if (report.genericity.c24_nonzero) {
    if (!report.genericity.ineq2) {
      throw Error(ErrorCode::DegenerateZ, "(c25 - c14)^2 + 4 c15 c24 vanishes, so z1 = z2");
    }
    const auto [s1, s2] = quadratic_roots(c(2, 4), c(2, 5) - c(1, 4), -c(1, 5));
    if (!same_pair(z1, z2, s1, s2, kZMismatchTolerance)) {
      throw Error(ErrorCode::ZMismatch, "the two expressions for z1, z2 disagree");
    }
  }

  const Complex dz = z1 - z2;
  std::array<std::array<Complex, 3>, 2> alpha;
  alpha[0][0] = (z1 * z1 * (c(1, 1) - z2 * c(2, 1)) + z1 * (c(1, 2) - z2 * c(2, 2)) + c(1, 3) - z2 * c(2, 3)) / dz;
  alpha[0][1] = (z1 * (c(1, 4) - z2 * c(2, 4)) + c(1, 5) - z2 * c(2, 5)) / dz;
  alpha[0][2] = (c(1, 6) - z2 * c(2, 6)) / dz;
  alpha[1][0] = ((-c(1, 3) + z1 * c(2, 3)) + z2 * (-c(1, 2) + z1 * c(2, 2)) + z2 * z2 * (-c(1, 1) + z1 * c(2, 1))) / dz;
  alpha[1][1] = (-c(1, 5) + z1 * c(2, 5) + z2 * (-c(1, 4) + z1 * c(2, 4))) / dz;
  alpha[1][2] = (-c(1, 6) + z1 * c(2, 6)) / dz;
  return ReducedForm::from_alpha(z1, z2, alpha, tol);
}

ReducedForm reduce_mirrored(const Coefficients& c, const Tolerance& tol) {
  const ReducedForm m = reduce(symmetry_transform(c), tol);
  // Mirror solution: x2 = z'1 w'1 + z'2 w'2, x1 = w'1 + w'2. With w_n = z'_n w'_n
  // this is x1 = w1/z'1 + w2/z'2, x2 = w1 + w2.
  const double zs = std::max(std::abs(m.z1), std::abs(m.z2));
  if (negligible(m.z1, zs, tol) || negligible(m.z2, zs, tol)) {
    throw Error(ErrorCode::NonGeneric, "mirrored reduction has a vanishing z; no finite relabeling exists");
  }
  std::array<std::array<Complex, 3>, 2> alpha;
  const Complex zp[2] = {m.z1, m.z2};
  for (int n = 0; n < 2; ++n) {
    alpha[n][0] = m.alpha[n][0] / zp[n];
    alpha[n][1] = m.alpha[n][1];
    alpha[n][2] = m.alpha[n][2] * zp[n];
  }
  return ReducedForm::from_alpha(1.0 / m.z1, 1.0 / m.z2, alpha, tol);
}

std::vector<Complex> residual_suite(const Coefficients& c, const ReducedForm& rf) {
  std::vector<Complex> out;
  out.reserve(8);
  for (auto fn : {cubic, quadratic_block, linear_block, first_degree}) {
    for (Complex z : {rf.z1, rf.z2}) {
      const Poly p = fn(c, z);
      out.push_back(safe_div(p.value, p.scale));
    }
  }
  return out;
}

StructuralParams structural_from_reduced(const ReducedForm& rf, Complex lambda1, Complex lambda2) {
  if (lambda1 == Complex(0.0) || lambda2 == Complex(0.0)) {
    throw Error(ErrorCode::InvalidLambda, "lambda1 and lambda2 must be nonzero");
  }
  require_finite(lambda1, "lambda1");
  require_finite(lambda2, "lambda2");
  StructuralParams sp;
  sp.A[1][0] = lambda1;
  sp.A[1][1] = lambda2;
  sp.A[0][0] = rf.z1 * lambda1;
  sp.A[0][1] = rf.z2 * lambda2;
  const Complex lambda[2] = {lambda1, lambda2};
  for (int n = 0; n < 2; ++n) {
    sp.a[n][0] = lambda[n] * rf.alpha[n][0];
    sp.a[n][1] = rf.alpha[n][1];
    sp.a[n][2] = rf.alpha[n][2] / lambda[n];
  }
  return sp;
}

ReducedForm reduced_from_structural(const StructuralParams& sp, const Tolerance& tol) {
  require_finite(sp);
  const Complex l1 = sp.A[1][0], l2 = sp.A[1][1];
  if (l1 == Complex(0.0) || l2 == Complex(0.0)) {
    throw Error(ErrorCode::NonGeneric, "A21 and A22 must be nonzero to read off z1, z2");
  }
  if (std::abs(sp.det()) <= tol.abs_tol) throw Error(ErrorCode::DeterminantZero, "mixing matrix is singular");
  const Complex lambda[2] = {l1, l2};
  std::array<std::array<Complex, 3>, 2> alpha;
  for (int n = 0; n < 2; ++n) {
    alpha[n][0] = sp.a[n][0] / lambda[n];
    alpha[n][1] = sp.a[n][1];
    alpha[n][2] = sp.a[n][2] * lambda[n];
  }
  return ReducedForm::from_alpha(sp.A[0][0] / l1, sp.A[0][1] / l2, alpha, tol);
}

}  // namespace quadflow
