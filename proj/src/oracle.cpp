#include "quadflow/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "quadflow/error.hpp"

namespace quadflow::oracle {

namespace {

using State = std::array<double, 4>;

State pack(Complex x1, Complex x2) { return {x1.real(), x1.imag(), x2.real(), x2.imag()}; }

State derivative(const Coefficients& c, const State& y) {
  const auto f = rhs(c, {y[0], y[1]}, {y[2], y[3]});
  return pack(f[0], f[1]);
}

double norm(const State& y) {
  double s = 0.0;
  for (double v : y) s += v * v;
  return std::sqrt(s);
}

// Dormand-Prince tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
// b - b_hat (fifth minus fourth order weights)
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

class Stepper {
 public:
  Stepper(const Coefficients& c, const IntegrationSettings& s) : c_(c), s_(s) {}

  // Advances y from t to t_end in place.
  void run(State& y, double& t, double t_end, long& steps) {
    if (t_end == t) return;
    const double dir = t_end > t ? 1.0 : -1.0;
    State k1 = derivative(c_, y);
    if (h_ == 0.0) h_ = initial_step(y, k1, t_end - t);
    while ((t_end - t) * dir > 0.0) {
      if (++steps > s_.max_steps) {
        throw Error(ErrorCode::StepLimitExceeded, "oracle exceeded its step budget", t);
      }
      double h = std::min(std::abs(h_), s_.max_step);
      const bool last = h >= std::abs(t_end - t);
      if (last) h = std::abs(t_end - t);
      h *= dir;

      State k2, k3, k4, k5, k6, k7, tmp, y_new;
      for (int i = 0; i < 4; ++i) tmp[i] = y[i] + h * a21 * k1[i];
      k2 = derivative(c_, tmp);
      for (int i = 0; i < 4; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
      k3 = derivative(c_, tmp);
      for (int i = 0; i < 4; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
      k4 = derivative(c_, tmp);
      for (int i = 0; i < 4; ++i) tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
      k5 = derivative(c_, tmp);
      for (int i = 0; i < 4; ++i)
        tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
      k6 = derivative(c_, tmp);
      for (int i = 0; i < 4; ++i)
        y_new[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
      k7 = derivative(c_, y_new);

      double err = 0.0;
      for (int i = 0; i < 4; ++i) {
        const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        const double sc = s_.abs_tol + s_.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
        err = std::max(err, std::abs(e) / sc);
      }
      const bool finite = std::all_of(y_new.begin(), y_new.end(), [](double v) { return std::isfinite(v); });
      if (!finite) err = 1e10;

      if (err <= 1.0) {
        // PI controller (Gustafsson), exponents for an order-5 method.
        double fac = err == 0.0 ? kMaxGrow : kSafety * std::pow(err, -kAlpha) * std::pow(err_prev_, kBeta);
        fac = std::clamp(fac, kMinShrink, kMaxGrow);
        err_prev_ = std::max(err, 1e-4);
        ++stats_.accepted;
        t = last ? t_end : t + h;
        y = y_new;
        k1 = k7;
        h_ = std::abs(h) * fac;
        if (norm(y) > s_.blowup_norm) {
          throw Error(ErrorCode::BlowupDetected, "state norm exceeded blowup threshold", t);
        }
      } else {
        ++stats_.rejected;
        const double fac = std::max(kMinShrink, kSafety * std::pow(err, -kAlpha));
        h_ = std::abs(h) * fac;
        if (h_ < 1e-14 * std::max(1.0, std::abs(t))) {
          throw Error(ErrorCode::BlowupDetected, "step size underflow, likely a singularity", t);
        }
      }
    }
  }

  const IntegrationStats& stats() const { return stats_; }

 private:
  static constexpr double kSafety = 0.9;
  static constexpr double kAlpha = 0.7 / 5.0;
  static constexpr double kBeta = 0.4 / 5.0;
  static constexpr double kMinShrink = 0.2;
  static constexpr double kMaxGrow = 5.0;

  double initial_step(const State& y, const State& f, double span) const {
    double d0 = 0.0, d1 = 0.0;
    for (int i = 0; i < 4; ++i) {
      const double sc = s_.abs_tol + s_.rel_tol * std::abs(y[i]);
      d0 = std::max(d0, std::abs(y[i]) / sc);
      d1 = std::max(d1, std::abs(f[i]) / sc);
    }
    double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    return std::min({h, std::abs(span), s_.max_step});
  }

  const Coefficients& c_;
  const IntegrationSettings& s_;
  IntegrationStats stats_;
  double h_ = 0.0;
  double err_prev_ = 1e-4;
};

void validate(const IntegrationSettings& s) {
  if (!(s.rel_tol > 0.0) || !(s.abs_tol > 0.0) || !(s.max_step > 0.0) || s.max_steps <= 0) {
    throw Error(ErrorCode::InvalidInput, "integration settings need positive tolerances, max_step and max_steps");
  }
}

}  // namespace

TrajectoryPoint integrate(const Coefficients& c, const InitialState& x0, double t_end,
                          const IntegrationSettings& s, IntegrationStats* stats) {
  validate(s);
  require_finite(c);
  require_finite(x0);
  if (!std::isfinite(t_end)) throw Error(ErrorCode::InvalidInput, "t_end must be finite");
  State y = pack(x0.x1, x0.x2);
  double t = 0.0;
  long steps = 0;
  Stepper stepper(c, s);
  stepper.run(y, t, t_end, steps);
  if (stats) *stats = stepper.stats();
  return {t_end, {y[0], y[1]}, {y[2], y[3]}};
}

GridResult integrate_grid(const Coefficients& c, const InitialState& x0, const std::vector<double>& t_grid,
                          const IntegrationSettings& s) {
  validate(s);
  require_finite(c);
  require_finite(x0);
  GridResult out;
  State y = pack(x0.x1, x0.x2);
  double t = 0.0;
  long steps = 0;
  Stepper stepper(c, s);
  for (double tg : t_grid) {
    if (tg < t) throw Error(ErrorCode::InvalidInput, "grid must be ascending and start at t >= 0");
    try {
      stepper.run(y, t, tg, steps);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::BlowupDetected) throw;
      out.blew_up = true;
      out.blowup_time = e.time().value_or(t);
      return out;
    }
    out.points.push_back({tg, {y[0], y[1]}, {y[2], y[3]}});
  }
  return out;
}

}  // namespace quadflow::oracle
