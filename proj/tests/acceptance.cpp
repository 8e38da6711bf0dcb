// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "quadflow/error.hpp"
#include "quadflow/forward_map.hpp"
#include "quadflow/inverse_map.hpp"
#include "quadflow/oracle.hpp"
#include "quadflow/pipeline.hpp"
#include "quadflow/riccati.hpp"
#include "quadflow/solver.hpp"
#include "quadflow/special_cases.hpp"
#include "support/generators.hpp"

using namespace quadflow;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

// Grid points closer than this (in the complex t-plane) to a pole of either
// Riccati factor are not compared.
constexpr double kPoleMargin = 1e-2;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::vector<double> grid(double t1, int points) {
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int k = 0; k < points; ++k) g[static_cast<std::size_t>(k)] = t1 * k / (points - 1);
  return g;
}

double dist(const TrajectoryPoint& a, const TrajectoryPoint& b) {
  return std::max(std::abs(a.x1 - b.x1), std::abs(a.x2 - b.x2));
}

std::vector<StructuralParams> random_structural(int count, std::uint64_t seed) {
  testgen::Gen g(seed);
  std::vector<StructuralParams> out;
  for (int i = 0; i < count; ++i) out.push_back(g.structural());
  return out;
}

struct Comparison {
  double sup = 0.0;
  int compared = 0;
  int excluded = 0;
};

// Closed form against the integrator on a grid, skipping pole-adjacent points
// and everything after an integrator blowup.
void compare_with_oracle(const std::function<TrajectoryPoint(double)>& analytic,
                         const std::function<double(double)>& pole_distance, const Coefficients& c,
                         const InitialState& x0, const std::vector<double>& g, Comparison& acc) {
  oracle::IntegrationSettings s;
  s.rel_tol = s.abs_tol = 1e-10;
  const auto numeric = oracle::integrate_grid(c, x0, g, s);
  acc.excluded += static_cast<int>(g.size() - numeric.points.size());
  for (const auto& p : numeric.points) {
    if (pole_distance(p.t) < kPoleMargin) {
      ++acc.excluded;
      continue;
    }
    try {
      acc.sup = std::max(acc.sup, dist(analytic(p.t), p));
      ++acc.compared;
    } catch (const Error&) {
      ++acc.excluded;
    }
  }
}

Verdict criterion1() {
  const auto sps = random_structural(1000, 1001);
  double worst = 0.0;
  for (const auto& sp : sps) {
    const auto rep = check_constraints(forward(sp));
    for (auto r : rep.residuals) worst = std::max(worst, std::abs(r));
  }
  return {worst <= 1e-10, "max normalized residual " + fmt(worst)};
}

Verdict criterion2() {
  const auto sps = random_structural(1000, 1001);
  double worst_z = 0.0, worst_res = 0.0;
  int refused = 0;
  for (const auto& sp : sps) {
    ReducedForm rf;
    try {
      rf = reduce(forward(sp));
    } catch (const Error&) {
      ++refused;
      continue;
    }
    const Complex r1 = sp.A[0][0] / sp.A[1][0], r2 = sp.A[0][1] / sp.A[1][1];
    const double s = std::max(std::abs(r1), std::abs(r2));
    const double e = std::min(std::max(std::abs(rf.z1 - r1), std::abs(rf.z2 - r2)),
                              std::max(std::abs(rf.z1 - r2), std::abs(rf.z2 - r1))) / s;
    worst_z = std::max(worst_z, e);
    for (auto r : residual_suite(forward(sp), rf)) worst_res = std::max(worst_res, std::abs(r));
  }
  return {refused == 0 && worst_z <= 1e-8 && worst_res <= 1e-10,
          "max relative z error " + fmt(worst_z) + ", max residual " + fmt(worst_res) + ", refused " +
              std::to_string(refused)};
}

Verdict criterion3() {
  testgen::Gen g(3003);
  const auto tg = grid(0.5, 50);
  Comparison acc;
  for (int i = 0; i < 100; ++i) {
    const auto c = forward(g.structural());
    const auto rf = reduce(c);
    const auto x0 = g.bidisk();
    compare_with_oracle([&](double t) { return solve_at(rf, x0, t); },
                        [&](double t) { return pole_distance(rf, x0, t); }, c, x0, tg, acc);
  }
  const int total = 100 * 50;
  const bool enough = acc.compared >= total * 9 / 10;
  return {acc.sup <= 1e-6 && enough, "sup error " + fmt(acc.sup) + " over " + std::to_string(acc.compared) + "/" +
                                         std::to_string(total) + " points (" + std::to_string(acc.excluded) +
                                         " pole-adjacent or past a blowup)"};
}

Verdict criterion4() {
  testgen::Gen g(4004);
  const auto tg = grid(0.5, 11);
  double worst = 0.0, worst_rel = 0.0;
  int compared = 0, skipped = 0;
  for (int i = 0; i < 100; ++i) {
    const auto c = forward(g.structural());
    const auto rf = reduce(c);
    const auto x0 = g.bidisk();
    for (int k = 0; k < 10; ++k) {
      const std::pair<Complex, Complex> lam{g.nonzero(), g.nonzero()};
      for (double t : tg) {
        if (pole_distance(rf, x0, t) < kPoleMargin) {
          ++skipped;
          continue;
        }
        try {
          const auto a = solve_at(rf, x0, t);
          const auto b = solve_via_structural(rf, x0, t, lam);
          const double d = dist(a, b);
          worst = std::max(worst, d);
          worst_rel = std::max(worst_rel, d / (1 + std::abs(a.x1) + std::abs(a.x2)));
          ++compared;
        } catch (const Error&) {
          ++skipped;
        }
      }
    }
  }
  return {worst <= 1e-9, "max deviation " + fmt(worst) + " (relative " + fmt(worst_rel) + ") over " +
                             std::to_string(compared) + " evaluations, " + std::to_string(skipped) +
                             " pole-adjacent skipped"};
}

Verdict criterion5() {
  const riccati::Params th{1.0, 0.0, -1.0};
  const auto sth = riccati::reduce(th);
  double worst = 0.0;
  for (int k = 1; k <= 10; ++k) {
    const double t = 0.1 * k;
    worst = std::max(worst, std::abs(riccati::flow_at(sth, th, 0.0, t) + std::tanh(t)));
  }
  const riccati::Params dr{1.0, 0.0, 0.0};
  const auto sdr = riccati::reduce(dr);
  for (int k = 1; k <= 9; ++k) {
    const double t = 0.1 * k;
    worst = std::max(worst, std::abs(riccati::flow_at(sdr, dr, 1.0, t) - 1.0 / (1.0 - t)));
  }
  bool pole = false;
  try {
    riccati::flow_at(sdr, dr, 1.0, 1.0);
  } catch (const Error& e) {
    pole = e.code() == ErrorCode::PoleAtTime && e.time() && *e.time() == 1.0;
  }
  return {worst <= 1e-12 && pole && sdr.branch == riccati::Branch::DoubleRoot,
          "max deviation " + fmt(worst) + ", pole at t=1 " + (pole ? "raised" : "missing")};
}

Verdict criterion6() {
  StructuralParams sp;
  sp.A = {{{1.0, 1.0}, {1.0, -1.0}}};
  sp.a = {{{1.0, 0.0, 1.0}, {1.0, 0.0, 4.0}}};
  const auto c = forward(sp);
  const auto cf = resolve(c);  // from coefficients alone
  const auto rep = cf.classify();
  if (rep.regime != Regime::Isochronous || !rep.period) return {false, std::string("regime ") + to_string(rep.regime)};
  const double T = *rep.period;
  testgen::Gen g(6006);
  double worst_a = 0.0, worst_n = 0.0;
  oracle::IntegrationSettings s;
  s.rel_tol = s.abs_tol = 1e-10;
  for (int i = 0; i < 10; ++i) {
    const auto x0 = g.bidisk();
    const auto a = cf.at(x0, T);
    worst_a = std::max(worst_a, std::hypot(std::abs(a.x1 - x0.x1), std::abs(a.x2 - x0.x2)));
    const auto n = oracle::integrate(c, x0, T, s);
    worst_n = std::max(worst_n, std::hypot(std::abs(n.x1 - x0.x1), std::abs(n.x2 - x0.x2)));
  }
  const bool ok = std::abs(T - M_PI) <= 1e-9 && worst_a <= 1e-8 && worst_n <= 1e-6;
  return {ok, std::string("route ") + to_string(cf.route) + ", period - pi = " + fmt(T - M_PI) +
                  ", max |x(T)-x(0)| analytic " + fmt(worst_a) + ", oracle " + fmt(worst_n)};
}

Verdict criterion7() {
  double worst_ok = 0.0;
  bool both = true;
  for (auto ab : {HomogeneousAB{0.0, 0.0}, HomogeneousAB{0.5, 0.0}}) {
    const auto r = homogeneous_gate(ab);
    both = both && r.admissible;
    for (auto v : r.raw_residuals) worst_ok = std::max(worst_ok, std::abs(v));
  }
  int passed_wrongly = 0;
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) {
      const double A = -1.0 + 2.5 * i / 19.0, B = -1.0 + 2.0 * j / 19.0;
      if (homogeneous_gate({A, B}).admissible) ++passed_wrongly;
    }
  }
  return {both && worst_ok <= 1e-12 && passed_wrongly == 0,
          "admissible points residual " + fmt(worst_ok) + ", grid points passing " + std::to_string(passed_wrongly) +
              "/400"};
}

Verdict criterion8() {
  testgen::Gen g(8008);
  const auto tg = grid(0.5, 50);
  Comparison acc;
  int generic_accepts = 0;
  double generic_dev = 0.0, structural_dev = 0.0;
  for (int i = 0; i < 100; ++i) {
    const TriangularParams p{g.annulus(0.1, 2.0), g.annulus(0.1, 2.0), g.disk(), g.disk(), g.disk()};
    const auto c = filled_coefficients(p);
    const auto x0 = g.bidisk();
    const auto rf = to_reduced_form(p);
    compare_with_oracle([&](double t) { return solve_triangular_at(p, x0, t); },
                        [&](double t) { return pole_distance(rf, x0, t); }, c, x0, tg, acc);

    std::optional<ReducedForm> generic;
    try {
      generic = reduce(c);
      ++generic_accepts;
    } catch (const Error&) {
    }
    const auto sp = structural_triangular(p, g.nonzero(), g.nonzero());
    for (double t : tg) {
      if (pole_distance(rf, x0, t) < kPoleMargin) continue;
      try {
        const auto a = solve_triangular_at(p, x0, t);
        if (generic) generic_dev = std::max(generic_dev, dist(a, solve_at(*generic, x0, t)));
        structural_dev = std::max(structural_dev, dist(a, solve_via_structural(sp, x0, t)));
      } catch (const Error&) {
      }
    }
  }
  const int total = 100 * 50;
  const bool ok = acc.sup <= 1e-6 && acc.compared >= total * 9 / 10 && generic_dev <= 1e-8 && structural_dev <= 1e-8;
  return {ok, "oracle sup " + fmt(acc.sup) + " over " + std::to_string(acc.compared) + "/" + std::to_string(total) +
                  " points; generic reduce accepted " + std::to_string(generic_accepts) +
                  "/100 (vacuous comparison); structural path max deviation " + fmt(structural_dev)};
}

Verdict criterion9() {
  testgen::Gen g(9009);
  int built = 0, attempts = 0;
  double worst = 0.0;
  while (built < 20 && attempts < 100000) {
    ++attempts;
    const auto sp = g.structural();
    ReducedForm rf;
    try {
      rf = reduce(forward(sp));
    } catch (const Error&) {
      continue;
    }
    if (std::abs(rf.beta(0).real()) <= 0.1 || std::abs(rf.beta(1).real()) <= 0.1) continue;
    // Pick the root labeling with Re(beta_n) < 0; the flow is unchanged.
    for (int n = 0; n < 2; ++n)
      if (rf.beta(n).real() > 0) rf.flow[n] = rf.flow[n].swapped();
    ++built;
    const Complex L1 = rf.w_plus(0), L2 = rf.w_plus(1);
    const Complex lim1 = rf.z1 * L1 + rf.z2 * L2, lim2 = L1 + L2;
    const double t = 50.0 / std::min(-rf.beta(0).real(), -rf.beta(1).real());
    const auto x0 = g.bidisk();
    const auto x = solve_at(rf, x0, t);
    worst = std::max({worst, std::abs(x.x1 - lim1), std::abs(x.x2 - lim2)});
    const auto rep = classify(rf);
    if (rep.regime != Regime::ConvergesToEquilibrium || !rep.limit_state ||
        std::abs((*rep.limit_state)[0] - lim1) > 1e-12 * (1 + std::abs(lim1))) {
      return {false, "classify disagrees with the predicted limit"};
    }
  }
  return {built == 20 && worst <= 1e-6,
          std::to_string(built) + " systems, max distance to predicted limit " + fmt(worst)};
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Verdict criterion10() {
  namespace fs = std::filesystem;
  const std::string fx = FIXTURE_DIR;
  std::vector<std::string> corpus;
  for (const auto& e : fs::directory_iterator(fx + "/good"))
    if (e.path().extension() == ".json") corpus.push_back(e.path().string());
  std::sort(corpus.begin(), corpus.end());
  int rt_fail = 0, vf_fail = 0;
  for (const auto& f : corpus) {
    if (run_cli("roundtrip " + f) != 0) ++rt_fail;
    if (run_cli("verify " + f + " --t1 0.5") != 0) ++vf_fail;
  }
  const int ng = run_cli("check " + fx + "/nongeneric.json");
  const int vi = run_cli("check " + fx + "/violated.json");
  const bool ok = corpus.size() == 10 && rt_fail == 0 && vf_fail == 0 && ng == 3 && vi == 2;
  return {ok, std::to_string(corpus.size()) + " fixtures, roundtrip failures " + std::to_string(rt_fail) +
                  ", verify failures " + std::to_string(vf_fail) + ", nongeneric exit " + std::to_string(ng) +
                  ", violated exit " + std::to_string(vi)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;  // 0 = no runtime bound
    Verdict (*fn)();
  };
  const Criterion all[] = {
      {1, "forward-map constraint closure", 5.0, criterion1},
      {2, "inverse roundtrip", 5.0, criterion2},
      {3, "analytic vs numeric agreement", 30.0, criterion3},
      {4, "lambda independence", 30.0, criterion4},
      {5, "Riccati kernel", 0.0, criterion5},
      {6, "isochrony", 0.0, criterion6},
      {7, "homogeneous gate", 0.0, criterion7},
      {8, "special-form solver", 0.0, criterion8},
      {9, "asymptotics", 0.0, criterion9},
      {10, "CLI end-to-end", 0.0, criterion10},
  };
  int failures = 0;
  for (const auto& c : all) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.fn();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0 && secs > c.budget_s) {
      v.pass = false;
      v.detail += ", over the " + fmt(c.budget_s) + " s budget";
    }
    std::printf("%s [%d] %s: %s (%.2f s)\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(), secs);
    std::fflush(stdout);
    if (!v.pass) ++failures;
  }
  return failures;
}
