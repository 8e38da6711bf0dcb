#include "quadflow/riccati.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "quadflow/error.hpp"

namespace quadflow::riccati {

namespace {

constexpr double kPoleThreshold = 1e-10;

// The anchored form has no 0/0 at either root, so the equilibrium shortcut
// only needs to catch starts that are equal up to rounding.
const Tolerance kEquilibriumTol{0.0, 4.0 * std::numeric_limits<double>::epsilon()};

bool is_quadratic(Branch b) { return b == Branch::Generic || b == Branch::DoubleRoot; }

// Roots of a2 y^2 + a1 y + a0 given beta = sqrt(a1^2 - 4 a0 a2), avoiding
// cancellation in whichever of -a1 +- beta is small.
void stable_roots(const Params& p, Complex beta, Complex& plus, Complex& minus) {
  const Complex np = -p.a1 + beta;
  const Complex nm = -p.a1 - beta;
  if (std::abs(np) >= std::abs(nm)) {
    plus = np / (2.0 * p.a2);
    minus = (nm == Complex(0.0)) ? Complex(0.0) : 2.0 * p.a0 / np;
  } else {
    minus = nm / (2.0 * p.a2);
    plus = 2.0 * p.a0 / nm;
  }
}

// Anchored form: with u = y - anchor and exponent k = a2 (anchor - other),
//   u(t) = u0 / (exp(-k t) - a2 u0 t phi(-k t)),  phi(x) = (e^x - 1)/x.
// The anchor is chosen so that Re(k t) >= 0, which keeps every term bounded.
struct Anchored {
  Complex anchor;
  Complex other;
  Complex k;
};

Anchored anchor_for(const Solution& sol, Complex t) {
  const Complex s = sol.beta * t;
  if (s.real() >= 0.0) return {sol.y_plus, sol.y_minus, sol.beta};
  return {sol.y_minus, sol.y_plus, -sol.beta};
}

}  // namespace

const char* to_string(Branch b) {
  switch (b) {
    case Branch::Generic: return "Generic";
    case Branch::DoubleRoot: return "DoubleRoot";
    case Branch::Linear: return "Linear";
    case Branch::Constant: return "Constant";
  }
  return "Unknown";
}

Solution Solution::swapped() const { return {y_minus, y_plus, -beta, branch}; }

Solution reduce(const Params& p, const Tolerance& tol) {
  require_finite(p.a2, "a2");
  require_finite(p.a1, "a1");
  require_finite(p.a0, "a0");
  if (std::abs(p.a2) <= tol.abs_tol) {
    if (std::abs(p.a1) <= tol.abs_tol) return {0.0, 0.0, 0.0, Branch::Constant};
    const Complex eq = -p.a0 / p.a1;
    return {eq, eq, p.a1, Branch::Linear};
  }
  const Complex beta = csqrt_principal(p.a1 * p.a1 - 4.0 * p.a0 * p.a2);
  if (std::abs(beta) <= tol.abs_tol) {
    const Complex root = -p.a1 / (2.0 * p.a2);
    return {root, root, 0.0, Branch::DoubleRoot};
  }
  Solution sol{0.0, 0.0, beta, Branch::Generic};
  stable_roots(p, beta, sol.y_plus, sol.y_minus);
  return sol;
}

Complex flow_at(const Solution& sol, const Params& p, Complex y0, double t) {
  return flow_at(sol, p, y0, Complex(t, 0.0));
}

Complex flow_at(const Solution& sol, const Params& p, Complex y0, Complex t) {
  if (t == Complex(0.0)) return y0;

  if (!is_quadratic(sol.branch)) {
    // y' = a1 y + a0 (a1 may vanish): y = y0 e^{a1 t} + a0 t phi(a1 t)
    const Complex x = p.a1 * t;
    const Complex y = y0 * std::exp(x) + p.a0 * t * exp_ratio(x);
    if (!is_finite(y)) throw Error(ErrorCode::Overflow, "affine flow overflowed", t.real());
    return y;
  }

  if (approx_eq(y0, sol.y_plus, kEquilibriumTol)) return sol.y_plus;
  if (approx_eq(y0, sol.y_minus, kEquilibriumTol)) return sol.y_minus;

  const Anchored a = anchor_for(sol, t);
  const Complex u0 = y0 - a.anchor;
  const Complex e = std::exp(-a.k * t);
  const Complex q = p.a2 * u0 * t * exp_ratio(-a.k * t);
  const Complex den = e - q;
  const double scale = std::abs(e) + std::abs(q);
  if (std::abs(den) <= kPoleThreshold * scale) {
    throw Error(ErrorCode::PoleAtTime, "Riccati flow has a pole at t = " + std::to_string(t.real()),
                t.real());
  }
  return a.anchor + u0 / den;
}

std::optional<Complex> nearest_pole(const Solution& sol, const Params& p, Complex y0, double t) {
  if (!is_quadratic(sol.branch)) return std::nullopt;
  if (approx_eq(y0, sol.y_plus, kEquilibriumTol) || approx_eq(y0, sol.y_minus, kEquilibriumTol)) {
    return std::nullopt;
  }

  if (sol.branch == Branch::DoubleRoot) {
    const Complex u0 = y0 - sol.y_plus;
    return 1.0 / (p.a2 * u0);
  }
  // Poles solve exp(beta t) = (y0 - y_minus) / (y0 - y_plus): a lattice
  // t_k = L/beta + k (2 pi i / beta) on a line in the complex plane.
  const Complex L = std::log((y0 - sol.y_minus) / (y0 - sol.y_plus));
  const Complex base = L / sol.beta;
  const Complex step = Complex(0.0, 2.0 * std::numbers::pi) / sol.beta;
  const double k_real = std::real((Complex(t) - base) * std::conj(step)) / std::norm(step);
  const double k0 = std::round(k_real);
  Complex best = base + k0 * step;
  for (double dk : {-1.0, 1.0}) {
    const Complex cand = base + (k0 + dk) * step;
    if (std::abs(cand - t) < std::abs(best - t)) best = cand;
  }
  return best;
}

std::vector<double> real_poles(const Solution& sol, const Params& p, Complex y0, double t0, double t1) {
  std::vector<double> out;
  if (!is_quadratic(sol.branch) || !(t1 >= t0)) return out;
  if (approx_eq(y0, sol.y_plus, kEquilibriumTol) || approx_eq(y0, sol.y_minus, kEquilibriumTol)) return out;

  auto accept = [&](Complex tp) {
    const double im_tol = 1e-9 * std::max(1.0, std::abs(tp));
    if (std::abs(tp.imag()) <= im_tol && tp.real() >= t0 && tp.real() <= t1) out.push_back(tp.real());
  };

  if (sol.branch == Branch::DoubleRoot) {
    accept(1.0 / (p.a2 * (y0 - sol.y_plus)));
    return out;
  }
  const Complex L = std::log((y0 - sol.y_minus) / (y0 - sol.y_plus));
  const Complex base = L / sol.beta;
  const Complex step = Complex(0.0, 2.0 * std::numbers::pi) / sol.beta;
  if (std::abs(step.imag()) <= 1e-12 * std::abs(step)) {
    // Purely imaginary beta: the lattice lies along the real axis (periodic poles).
    if (std::abs(base.imag()) > 1e-9 * std::max(1.0, std::abs(base))) return out;
    const double period = std::abs(step.real());
    const double first = base.real() + std::ceil((t0 - base.real()) / period) * period;
    for (double tp = first; tp <= t1; tp += period) out.push_back(tp);
    return out;
  }
  // Otherwise at most one k makes Im(base + k step) vanish.
  const double k = -base.imag() / step.imag();
  const double kr = std::round(k);
  if (std::abs(k - kr) <= 1e-9 * std::max(1.0, std::abs(k))) accept(base + kr * step);
  return out;
}

Asymptote asymptote(const Solution& sol, const Tolerance& tol) {
  const Complex b = sol.beta;
  const double re_b = b.real();
  const bool re_zero = std::abs(re_b) <= tol.abs_tol + tol.rel_tol * std::abs(b);
  switch (sol.branch) {
    case Branch::DoubleRoot:
      return {Asymptote::Kind::ConvergesTo, sol.y_plus};
    case Branch::Constant:
      return {Asymptote::Kind::NoLimit, 0.0};
    case Branch::Linear:
      if (re_zero) {
        return {std::abs(b.imag()) > tol.abs_tol ? Asymptote::Kind::Periodic : Asymptote::Kind::NoLimit,
                0.0};
      }
      if (re_b < 0.0) return {Asymptote::Kind::ConvergesTo, sol.y_plus};
      return {Asymptote::Kind::NoLimit, 0.0};
    case Branch::Generic:
      break;
  }
  if (re_zero) return {Asymptote::Kind::Periodic, 0.0};
  if (re_b < 0.0) return {Asymptote::Kind::ConvergesTo, sol.y_plus};
  return {Asymptote::Kind::ConvergesTo, sol.y_minus};
}

}  // namespace quadflow::riccati
