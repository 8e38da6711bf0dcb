#include <catch_amalgamated.hpp>

#include "quadflow/error.hpp"
#include "quadflow/forward_map.hpp"
#include "quadflow/inverse_map.hpp"
#include "support/generators.hpp"

using namespace quadflow;

namespace {

double max_diff(const Coefficients& a, const Coefficients& b) {
  double m = 0.0;
  for (int n = 1; n <= 2; ++n)
    for (int j = 1; j <= 6; ++j) m = std::max(m, std::abs(a(n, j) - b(n, j)));
  return m;
}

}  // namespace

TEST_CASE("identity mixing gives two decoupled Riccati equations") {
  testgen::Gen g(31);
  StructuralParams sp;
  sp.A = {{{1.0, 0.0}, {0.0, 1.0}}};
  for (auto& row : sp.a)
    for (auto& v : row) v = g.disk();
  const auto c = forward(sp);
  CHECK(c(1, 1) == sp.a[0][0]);
  CHECK(c(1, 4) == sp.a[0][1]);
  CHECK(c(1, 6) == sp.a[0][2]);
  CHECK(c(2, 3) == sp.a[1][0]);
  CHECK(c(2, 5) == sp.a[1][1]);
  CHECK(c(2, 6) == sp.a[1][2]);
  for (auto [n, j] : {std::pair{1, 2}, {1, 3}, {1, 5}, {2, 1}, {2, 2}, {2, 4}}) CHECK(c(n, j) == 0.0);
}

TEST_CASE("isochronous example coefficients") {
  // Frozen from symbolic substitution of x = A y (tests/oracle/derive_values.py).
  StructuralParams sp;
  sp.A = {{{1.0, 1.0}, {1.0, -1.0}}};
  sp.a = {{{1.0, 0.0, 1.0}, {1.0, 0.0, 4.0}}};
  Coefficients want;
  want(1, 1) = 0.5;
  want(1, 3) = 0.5;
  want(1, 6) = 5.0;
  want(2, 2) = 1.0;
  want(2, 6) = -3.0;
  CHECK(max_diff(forward(sp), want) < 1e-15);
}

TEST_CASE("singular mixing is rejected") {
  StructuralParams sp;
  sp.A = {{{1.0, 2.0}, {2.0, 4.0}}};
  sp.a = {{{1.0, 0.0, 0.0}, {1.0, 0.0, 0.0}}};
  try {
    forward(sp);
    FAIL("expected DeterminantZero");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DeterminantZero);
  }
}

TEST_CASE("symmetry transform") {
  Coefficients c;
  c(1, 2) = 1.0;
  Coefficients want;
  want(2, 2) = 1.0;
  CHECK(symmetry_transform(c) == want);

  testgen::Gen g(32);
  for (int i = 0; i < 50; ++i) {
    Coefficients r;
    for (auto& row : r.c)
      for (auto& v : row) v = g.disk();
    CHECK(symmetry_transform(symmetry_transform(r)) == r);
    CHECK(symmetry_transform(r)(1, 1) == r(2, 3));
    CHECK(symmetry_transform(r)(1, 5) == r(2, 4));
    CHECK(symmetry_transform(r)(2, 6) == r(1, 6));
  }
}

TEST_CASE("constraints are preserved by the symmetry transform") {
  testgen::Gen g(33);
  for (int i = 0; i < 100; ++i) {
    const auto c = forward(g.structural());
    const auto rep = check_constraints(symmetry_transform(c));
    for (const auto& r : rep.residuals) CHECK(std::abs(r) <= 1e-10);
  }
}

TEST_CASE("forward output always satisfies the constraints") {
  testgen::Gen g(34);
  for (int i = 0; i < 1000; ++i) {
    const auto rep = check_constraints(forward(g.structural()));
    CHECK(rep.satisfied);
    for (const auto& r : rep.residuals) CHECK(std::abs(r) <= 1e-10);
  }
}

TEST_CASE("forward commutes with the symmetry transform") {
  testgen::Gen g(35);
  for (int i = 0; i < 200; ++i) {
    const auto sp = g.structural();
    const auto lhs = forward(symmetry_transform(sp));
    const auto rhs = symmetry_transform(forward(sp));
    CHECK(max_diff(lhs, rhs) <= 1e-12 * (1.0 + rhs.scale()));
  }
}
