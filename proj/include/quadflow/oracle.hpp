#pragma once

#include <vector>

#include "quadflow/system.hpp"

// Independent numerical integrator for the quadratic system. Used only to
// check closed-form answers, never to produce them.
namespace quadflow::oracle {

struct IntegrationSettings {
  double rel_tol = 1e-10;
  double abs_tol = 1e-10;
  double max_step = 0.1;
  long max_steps = 1'000'000;
  double blowup_norm = 1e8;
};

struct IntegrationStats {
  long accepted = 0;
  long rejected = 0;
};

// Dormand-Prince 5(4) with PI step-size control on the real 4-vector
// (Re x1, Im x1, Re x2, Im x2). t_end may be negative.
// Throws StepLimitExceeded or BlowupDetected (state norm above blowup_norm).
TrajectoryPoint integrate(const Coefficients& c, const InitialState& x0, double t_end,
                          const IntegrationSettings& s = {}, IntegrationStats* stats = nullptr);

struct GridResult {
  std::vector<TrajectoryPoint> points;  // prefix of the grid that was reached
  bool blew_up = false;
  double blowup_time = 0.0;
};

// Integrates through an ascending grid starting at x0 at t = 0 (grid values
// must be >= 0). Stops at the first blowup instead of throwing.
GridResult integrate_grid(const Coefficients& c, const InitialState& x0, const std::vector<double>& t_grid,
                          const IntegrationSettings& s = {});

}  // namespace quadflow::oracle
