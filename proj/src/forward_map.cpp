#include "quadflow/forward_map.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "quadflow/error.hpp"

namespace quadflow {

double Coefficients::scale() const {
  double s = 0.0;
  for (const auto& row : c)
    for (int j = 0; j < 5; ++j) s = std::max(s, std::abs(row[j]));
  return s;
}

std::array<Complex, 2> rhs(const Coefficients& c, Complex x1, Complex x2) {
  std::array<Complex, 2> out;
  for (int n = 1; n <= 2; ++n) {
    out[n - 1] = c(n, 1) * x1 * x1 + c(n, 2) * x1 * x2 + c(n, 3) * x2 * x2 + c(n, 4) * x1 +
                 c(n, 5) * x2 + c(n, 6);
  }
  return out;
}

void require_finite(const Coefficients& c) {
  for (const auto& row : c.c)
    for (const auto& v : row) require_finite(v, "coefficient");
}

void require_finite(const StructuralParams& sp) {
  for (const auto& row : sp.A)
    for (const auto& v : row) require_finite(v, "mixing matrix entry");
  for (const auto& row : sp.a)
    for (const auto& v : row) require_finite(v, "Riccati coefficient");
}

void require_finite(const InitialState& x0) {
  require_finite(x0.x1, "x1(0)");
  require_finite(x0.x2, "x2(0)");
}

Coefficients forward(const StructuralParams& sp, const Tolerance& tol) {
  require_finite(sp);
  const Complex A11 = sp.A[0][0], A12 = sp.A[0][1], A21 = sp.A[1][0], A22 = sp.A[1][1];
  const Complex a12 = sp.a[0][0], a11 = sp.a[0][1], a10 = sp.a[0][2];
  const Complex a22 = sp.a[1][0], a21 = sp.a[1][1], a20 = sp.a[1][2];
  const Complex D = sp.det();
  if (std::abs(D) <= tol.abs_tol) {
    throw Error(ErrorCode::DeterminantZero, "mixing matrix is singular (A11 A22 = A12 A21)");
  }
  const Complex D2 = D * D;

  Coefficients c;
  c(1, 1) = (a12 * A11 * A22 * A22 + a22 * A12 * A21 * A21) / D2;
  c(1, 2) = -2.0 * A11 * A12 * (a12 * A22 + a22 * A21) / D2;
  c(1, 3) = A11 * A12 * (a12 * A12 + a22 * A11) / D2;
  c(1, 4) = (a11 * A11 * A22 - a21 * A12 * A21) / D;
  c(1, 5) = -(a11 - a21) * A11 * A12 / D;
  c(1, 6) = a10 * A11 + a20 * A12;

  c(2, 3) = (a22 * A22 * A11 * A11 + a12 * A21 * A12 * A12) / D2;
  c(2, 2) = -2.0 * A22 * A21 * (a22 * A11 + a12 * A12) / D2;
  c(2, 1) = A22 * A21 * (a22 * A21 + a12 * A22) / D2;
  c(2, 5) = (a21 * A11 * A22 - a11 * A12 * A21) / D;
  c(2, 4) = -(a21 - a11) * A22 * A21 / D;
  c(2, 6) = a20 * A22 + a10 * A21;
  return c;
}

Coefficients symmetry_transform(const Coefficients& c) {
  Coefficients out;
  constexpr std::pair<int, int> pairs[] = {{1, 3}, {2, 2}, {3, 1}, {4, 5}, {5, 4}, {6, 6}};
  for (auto [j1, j2] : pairs) {
    out(1, j1) = c(2, j2);
    out(2, j2) = c(1, j1);
  }
  return out;
}

StructuralParams symmetry_transform(const StructuralParams& sp) {
  StructuralParams out;
  out.A[0][0] = sp.A[1][1];
  out.A[1][1] = sp.A[0][0];
  out.A[0][1] = sp.A[1][0];
  out.A[1][0] = sp.A[0][1];
  out.a[0] = sp.a[1];
  out.a[1] = sp.a[0];
  return out;
}

}  // namespace quadflow
