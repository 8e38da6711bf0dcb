#pragma once

#include "quadflow/system.hpp"

namespace quadflow {

// Coefficients of the quadratic system obtained by writing x = A y where each
// y_n obeys its own Riccati equation. Every system produced this way is
// solvable in closed form. Throws Error(DeterminantZero) when |det A| <= tol.abs_tol.
Coefficients forward(const StructuralParams& sp, const Tolerance& tol = {});

// Relabeling x1 <-> x2 of the system:
// c11<->c23, c12<->c22, c13<->c21, c14<->c25, c15<->c24, c16<->c26. An involution.
Coefficients symmetry_transform(const Coefficients& c);

// The matching relabeling of structural parameters:
// A11<->A22, A12<->A21, and the two Riccati rows exchanged.
StructuralParams symmetry_transform(const StructuralParams& sp);

}  // namespace quadflow
