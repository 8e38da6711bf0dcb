#pragma once

#include <complex>

namespace quadflow {

using Complex = std::complex<double>;

// Comparison policy. A value v is treated as zero relative to a scale s when
// |v| <= abs_tol + rel_tol * s.
struct Tolerance {
  double abs_tol = 1e-12;
  double rel_tol = 1e-9;

  static Tolerance absolute(double a) { return {a, 0.0}; }
  static Tolerance relative(double r) { return {0.0, r}; }
};

// Throws Error(InvalidInput) unless at least one component is strictly positive.
void validate(const Tolerance& tol);

bool is_finite(Complex z);
// Throws Error(InvalidInput) naming `what` when z has a NaN or Inf component.
void require_finite(Complex z, const char* what);

// Square root with Re(w) >= 0; on the cut Re(w) == 0 the root with Im(w) >= 0.
Complex csqrt_principal(Complex z);

// |a - b| <= abs_tol + rel_tol * max(|a|, |b|)
bool approx_eq(Complex a, Complex b, const Tolerance& tol = {});

// |value| <= abs_tol + rel_tol * scale
bool negligible(Complex value, double scale, const Tolerance& tol = {});

// Division that maps 0/0 to 0; x/0 for x != 0 stays Inf as usual.
Complex safe_div(Complex num, double den);

// exp(z) - 1 without cancellation near z = 0.
Complex cexpm1(Complex z);
// (exp(z) - 1) / z, continuous at z = 0 where it equals 1.
Complex exp_ratio(Complex z);

}  // namespace quadflow
