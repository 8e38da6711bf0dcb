#include "quadflow/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "quadflow/error.hpp"

namespace quadflow {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::DeterminantZero: return "DeterminantZero";
    case ErrorCode::ConstraintViolated: return "ConstraintViolated";
    case ErrorCode::NonGeneric: return "NonGeneric";
    case ErrorCode::DegenerateZ: return "DegenerateZ";
    case ErrorCode::ZMismatch: return "ZMismatch";
    case ErrorCode::InvalidLambda: return "InvalidLambda";
    case ErrorCode::PoleAtTime: return "PoleAtTime";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::StepLimitExceeded: return "StepLimitExceeded";
    case ErrorCode::BlowupDetected: return "BlowupDetected";
  }
  return "Unknown";
}

void validate(const Tolerance& tol) {
  if (!(tol.abs_tol >= 0.0) || !(tol.rel_tol >= 0.0) || !(tol.abs_tol > 0.0 || tol.rel_tol > 0.0)) {
    throw Error(ErrorCode::InvalidInput, "tolerance needs nonnegative components, one of them positive");
  }
}

bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require_finite(Complex z, const char* what) {
  if (!is_finite(z)) throw Error(ErrorCode::InvalidInput, std::string("non-finite value for ") + what);
}

Complex csqrt_principal(Complex z) {
  // std::sqrt already returns the branch with Re >= 0, but for z on the
  // negative real axis it follows the sign of a signed zero imaginary part.
  Complex w = std::sqrt(Complex(z.real(), z.imag() == 0.0 ? 0.0 : z.imag()));
  if (w.real() == 0.0 && w.imag() < 0.0) w = -w;
  if (w.real() < 0.0) w = -w;
  return w;
}

bool approx_eq(Complex a, Complex b, const Tolerance& tol) {
  return std::abs(a - b) <= tol.abs_tol + tol.rel_tol * std::max(std::abs(a), std::abs(b));
}

bool negligible(Complex value, double scale, const Tolerance& tol) {
  return std::abs(value) <= tol.abs_tol + tol.rel_tol * scale;
}

Complex safe_div(Complex num, double den) {
  if (den == 0.0 && num == Complex(0.0)) return 0.0;
  return num / den;
}

Complex cexpm1(Complex z) {
  const double a = z.real();
  const double b = z.imag();
  const double s = std::sin(0.5 * b);
  // e^a cos b - 1 = expm1(a) cos b - 2 sin^2(b/2)
  const double re = std::expm1(a) * std::cos(b) - 2.0 * s * s;
  const double im = std::exp(a) * std::sin(b);
  return {re, im};
}

Complex exp_ratio(Complex z) {
  if (std::abs(z) < 1e-8) return 1.0 + 0.5 * z;
  return cexpm1(z) / z;
}

}  // namespace quadflow
