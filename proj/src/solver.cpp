#include "quadflow/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "quadflow/error.hpp"
#include "quadflow/forward_map.hpp"

namespace quadflow {

std::optional<Rational> rational_approximation(double x, std::int64_t max_denominator, double rel_tol) {
  if (!std::isfinite(x) || max_denominator < 1) return std::nullopt;
  const double target = std::abs(x);
  const double allowed = rel_tol * std::max(1.0, target);
  long double y = target;
  std::int64_t p_prev = 0, q_prev = 1, p = 1, q = 0;
  for (int iter = 0; iter < 64; ++iter) {
    const long double fl = std::floor(y);
    if (fl > static_cast<long double>(std::numeric_limits<std::int64_t>::max() / 4)) break;
    const auto term = static_cast<std::int64_t>(fl);
    const std::int64_t p_next = term * p + p_prev;
    const std::int64_t q_next = term * q + q_prev;
    if (q_next > max_denominator || p_next < 0) break;
    p_prev = p;
    q_prev = q;
    p = p_next;
    q = q_next;
    if (std::abs(target - static_cast<double>(p) / static_cast<double>(q)) <= allowed) {
      return Rational{x < 0 ? -p : p, q};
    }
    const long double frac = y - fl;
    if (frac == 0.0L) break;
    y = 1.0L / frac;
  }
  return std::nullopt;
}

std::pair<Complex, Complex> initial_w(const ReducedForm& rf, const InitialState& x0) {
  require_finite(x0);
  const Complex dz = rf.z1 - rf.z2;
  const Tolerance tol{};
  if (negligible(dz, std::max(std::abs(rf.z1), std::abs(rf.z2)), tol)) {
    throw Error(ErrorCode::DegenerateZ, "z1 and z2 coincide");
  }
  return {(x0.x1 - rf.z2 * x0.x2) / dz, -(x0.x1 - rf.z1 * x0.x2) / dz};
}

std::array<Complex, 2> solve_at_complex(const ReducedForm& rf, const InitialState& x0, Complex t) {
  if (t == Complex(0.0)) return {x0.x1, x0.x2};
  const auto [w10, w20] = initial_w(rf, x0);
  const Complex w1 = riccati::flow_at(rf.flow[0], rf.params(0), w10, t);
  const Complex w2 = riccati::flow_at(rf.flow[1], rf.params(1), w20, t);
  return {rf.z1 * w1 + rf.z2 * w2, w1 + w2};
}

TrajectoryPoint solve_at(const ReducedForm& rf, const InitialState& x0, double t) {
  if (t == 0.0) return {0.0, x0.x1, x0.x2};
  const auto x = solve_at_complex(rf, x0, Complex(t, 0.0));
  return {t, x[0], x[1]};
}

double pole_distance(const ReducedForm& rf, const InitialState& x0, double t) {
  const auto [w10, w20] = initial_w(rf, x0);
  double d = std::numeric_limits<double>::infinity();
  const Complex w0[2] = {w10, w20};
  for (int n = 0; n < 2; ++n) {
    if (auto p = riccati::nearest_pole(rf.flow[n], rf.params(n), w0[n], t)) d = std::min(d, std::abs(*p - t));
  }
  return d;
}

SampleResult sample(const ReducedForm& rf, const InitialState& x0, const std::vector<double>& t_grid) {
  SampleResult out;
  if (t_grid.empty()) return out;
  if (!std::is_sorted(t_grid.begin(), t_grid.end())) {
    throw Error(ErrorCode::InvalidInput, "time grid must be sorted ascending");
  }
  const auto [w10, w20] = initial_w(rf, x0);
  const Complex w0[2] = {w10, w20};

  std::vector<std::pair<int, double>> poles;
  for (int n = 0; n < 2; ++n) {
    for (double tp : riccati::real_poles(rf.flow[n], rf.params(n), w0[n], t_grid.front(), t_grid.back())) {
      poles.emplace_back(n + 1, tp);
    }
  }

  for (double t : t_grid) {
    try {
      out.points.push_back(solve_at(rf, x0, t));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::PoleAtTime) throw;
      // A pole exactly on a grid point that the analytic search missed.
      const bool known = std::any_of(poles.begin(), poles.end(), [&](const auto& p) {
        return std::abs(p.second - t) <= 1e-9 * std::max(1.0, std::abs(t));
      });
      if (!known) {
        int comp = 1;
        try {
          riccati::flow_at(rf.flow[0], rf.params(0), w10, t);
          comp = 2;
        } catch (const Error&) {
        }
        poles.emplace_back(comp, t);
      }
    }
  }

  std::sort(poles.begin(), poles.end(), [](const auto& a, const auto& b) { return a.second < b.second; });
  for (const auto& [comp, tp] : poles) {
    auto hi = std::lower_bound(t_grid.begin(), t_grid.end(), tp);
    PoleReport r;
    r.component = comp;
    r.t_pole = tp;
    r.t_after = hi == t_grid.end() ? t_grid.back() : *hi;
    r.t_before = hi == t_grid.begin() ? t_grid.front() : *(hi - 1);
    if (hi != t_grid.end() && *hi == tp && hi != t_grid.begin()) r.t_before = *(hi - 1);
    out.poles.push_back(r);
  }
  return out;
}

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Isochronous: return "Isochronous";
    case Regime::AsymptoticallyIsochronous: return "AsymptoticallyIsochronous";
    case Regime::ConvergesToEquilibrium: return "ConvergesToEquilibrium";
    case Regime::Generic: return "Generic";
  }
  return "Unknown";
}

ClassificationReport classify(const ReducedForm& rf, const Tolerance& tol, std::int64_t max_denominator) {
  using Kind = riccati::Asymptote::Kind;
  const riccati::Asymptote as[2] = {riccati::asymptote(rf.flow[0], tol), riccati::asymptote(rf.flow[1], tol)};
  ClassificationReport rep;

  const bool periodic[2] = {as[0].kind == Kind::Periodic, as[1].kind == Kind::Periodic};
  if (periodic[0] && periodic[1]) {
    const double im1 = rf.beta(0).imag(), im2 = rf.beta(1).imag();
    const auto ratio = rational_approximation(im1 / im2, max_denominator, kCommensurabilityTolerance);
    if (ratio) {
      // im1 / im2 = p / q in lowest terms: the common period is |p| 2 pi / |im1|.
      const double period = static_cast<double>(std::llabs(ratio->num)) * 2.0 * std::numbers::pi / std::abs(im1);
      rep.regime = Regime::Isochronous;
      rep.period = period;
      rep.omega = 2.0 * std::numbers::pi / period;
      const std::int64_t p = std::llabs(ratio->num), q = ratio->den;
      rep.rho = std::array<Rational, 2>{Rational{im1 < 0 ? -p : p, 1}, Rational{im2 < 0 ? -q : q, 1}};
    }
    return rep;
  }
  if (periodic[0] != periodic[1]) {
    const int p = periodic[0] ? 0 : 1;
    if (as[1 - p].kind == Kind::ConvergesTo) {
      rep.regime = Regime::AsymptoticallyIsochronous;
      rep.period = 2.0 * std::numbers::pi / std::abs(rf.beta(p).imag());
      rep.omega = std::abs(rf.beta(p).imag());
    }
    return rep;
  }
  if (as[0].kind == Kind::ConvergesTo && as[1].kind == Kind::ConvergesTo) {
    rep.regime = Regime::ConvergesToEquilibrium;
    const Complex l1 = as[0].limit, l2 = as[1].limit;
    rep.limit_state = std::array<Complex, 2>{rf.z1 * l1 + rf.z2 * l2, l1 + l2};
  }
  return rep;
}

TrajectoryPoint solve_via_structural(const StructuralParams& sp, const InitialState& x0, double t,
                                     const Tolerance& tol) {
  require_finite(sp);
  require_finite(x0);
  const Complex D = sp.det();
  if (std::abs(D) <= tol.abs_tol) throw Error(ErrorCode::DeterminantZero, "mixing matrix is singular");
  if (t == 0.0) return {0.0, x0.x1, x0.x2};
  const auto& A = sp.A;
  const Complex y0[2] = {(A[1][1] * x0.x1 - A[0][1] * x0.x2) / D, (A[0][0] * x0.x2 - A[1][0] * x0.x1) / D};
  Complex y[2];
  for (int n = 0; n < 2; ++n) {
    const riccati::Params p{sp.a[n][0], sp.a[n][1], sp.a[n][2]};
    y[n] = riccati::flow_at(riccati::reduce(p, tol), p, y0[n], t);
  }
  return {t, A[0][0] * y[0] + A[0][1] * y[1], A[1][0] * y[0] + A[1][1] * y[1]};
}

TrajectoryPoint solve_via_structural(const ReducedForm& rf, const InitialState& x0, double t,
                                     std::pair<Complex, Complex> lambda, const Tolerance& tol) {
  return solve_via_structural(structural_from_reduced(rf, lambda.first, lambda.second), x0, t, tol);
}

TrajectoryPoint solve_via_structural(const Coefficients& c, const InitialState& x0, double t,
                                     std::pair<Complex, Complex> lambda, const Tolerance& tol) {
  if (lambda.first == Complex(0.0) || lambda.second == Complex(0.0)) {
    throw Error(ErrorCode::InvalidLambda, "lambda1 and lambda2 must be nonzero");
  }
  return solve_via_structural(reduce(c, tol), x0, t, lambda, tol);
}

}  // namespace quadflow
