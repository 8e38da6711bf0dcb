#include "quadflow/cli.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "quadflow/document.hpp"
#include "quadflow/forward_map.hpp"
#include "quadflow/oracle.hpp"
#include "quadflow/pipeline.hpp"

namespace quadflow::cli {

using nlohmann::ordered_json;

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInput: return kMalformed;
    case ErrorCode::ConstraintViolated: return kConstraint;
    case ErrorCode::DeterminantZero:
    case ErrorCode::NonGeneric:
    case ErrorCode::DegenerateZ:
    case ErrorCode::ZMismatch:
    case ErrorCode::InvalidLambda: return kNonGeneric;
    case ErrorCode::PoleAtTime:
    case ErrorCode::Overflow:
    case ErrorCode::StepLimitExceeded:
    case ErrorCode::BlowupDetected: return kPole;
  }
  return kMalformed;
}

namespace {

struct Options {
  double rel_tol = Tolerance{}.rel_tol;
  double abs_tol = Tolerance{}.abs_tol;
  std::int64_t max_denominator = kDefaultMaxDenominator;
  std::vector<std::string> files;
  std::string x0_text;
  double t = 0.0;
  double t0 = 0.0;
  double t1 = 1.0;
  int steps = 50;
  std::string format = "csv";
  double threshold = 1e-6;
  double oracle_tol = 1e-10;
  double pole_margin = 1e-2;
  double roundtrip_tol = 1e-8;
  double residual_tol = 1e-10;

  Tolerance tol() const { return {abs_tol, rel_tol}; }
};

ordered_json cjson(Complex z) { return to_json(z); }

ordered_json point_json(const TrajectoryPoint& p) { return {{"t", p.t}, {"x1", cjson(p.x1)}, {"x2", cjson(p.x2)}}; }

InitialState parse_x0(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidInput, "--x0 expects re,im,re,im");
    }
  }
  if (v.size() != 4) throw Error(ErrorCode::InvalidInput, "--x0 expects re,im,re,im");
  InitialState x{{v[0], v[1]}, {v[2], v[3]}};
  require_finite(x);
  return x;
}

InitialState initial_state(const SystemDocument& doc, const Options& o) {
  if (!o.x0_text.empty()) return parse_x0(o.x0_text);
  if (doc.initial_state) return *doc.initial_state;
  throw Error(ErrorCode::InvalidInput, "no initial state: give --x0 or an \"x0\" field");
}

std::vector<double> grid(double t0, double t1, int steps) {
  if (steps < 1) throw Error(ErrorCode::InvalidInput, "--steps must be at least 1");
  if (!std::isfinite(t0) || !std::isfinite(t1) || !(t1 >= t0)) {
    throw Error(ErrorCode::InvalidInput, "need finite t0 <= t1");
  }
  std::vector<double> g(static_cast<std::size_t>(steps) + 1);
  for (int k = 0; k <= steps; ++k) g[static_cast<std::size_t>(k)] = t0 + (t1 - t0) * k / steps;
  g.back() = t1;
  return g;
}

double max_abs(const std::vector<Complex>& v) {
  double m = 0.0;
  for (auto z : v) m = std::max(m, std::abs(z));
  return m;
}

ordered_json reduced_json(const ClosedForm& cf) {
  const auto& rf = cf.form;
  ordered_json alpha = ordered_json::array(), beta = ordered_json::array(), wp = ordered_json::array(),
               wm = ordered_json::array(), branch = ordered_json::array();
  for (int n = 0; n < 2; ++n) {
    alpha.push_back({cjson(rf.alpha[n][0]), cjson(rf.alpha[n][1]), cjson(rf.alpha[n][2])});
    beta.push_back(cjson(rf.beta(n)));
    wp.push_back(cjson(rf.w_plus(n)));
    wm.push_back(cjson(rf.w_minus(n)));
    branch.push_back(riccati::to_string(rf.flow[n].branch));
  }
  const auto res = residual_suite(cf.coefficients, rf);
  ordered_json rj = ordered_json::array();
  for (auto r : res) rj.push_back(cjson(r));
  return {{"route", to_string(cf.route)},
          {"mirrored", cf.mirrored},
          {"z", {cjson(rf.z1), cjson(rf.z2)}},
          {"alpha", alpha},
          {"beta", beta},
          {"w_plus", wp},
          {"w_minus", wm},
          {"branch", branch},
          {"residual_suite", rj},
          {"residual_max", max_abs(res)}};
}

ordered_json classification_json(const ClosedForm& cf, const ClassificationReport& r) {
  ordered_json j = {{"route", to_string(cf.route)},
                    {"beta", {cjson(cf.form.beta(0)), cjson(cf.form.beta(1))}},
                    {"regime", to_string(r.regime)}};
  j["period"] = r.period ? ordered_json(*r.period) : ordered_json(nullptr);
  j["omega"] = r.omega ? ordered_json(*r.omega) : ordered_json(nullptr);
  if (r.rho) {
    j["rho"] = {(*r.rho)[0].num * 1.0 / (*r.rho)[0].den, (*r.rho)[1].num * 1.0 / (*r.rho)[1].den};
  } else {
    j["rho"] = nullptr;
  }
  j["limit_state"] =
      r.limit_state ? ordered_json{cjson((*r.limit_state)[0]), cjson((*r.limit_state)[1])} : ordered_json(nullptr);
  return j;
}

struct Outcome {
  ordered_json report;
  int code = kOk;
  std::string diagnostic;
};

Outcome error_outcome(const std::string& file, const Error& e) {
  Outcome o;
  o.code = exit_code(e.code());
  o.report = {{"file", file}, {"ok", false}, {"error", to_string(e.code())}, {"message", e.what()}};
  o.diagnostic = file + ": " + e.what();
  return o;
}

Outcome roundtrip_one(const std::string& file, const Options& opt) {
  const Tolerance tol = opt.tol();
  try {
    const auto doc = load_document(file, tol);
    const Coefficients c = doc.resolved_coefficients(tol);
    ClosedForm cf;
    try {
      cf = resolve(c, std::nullopt, tol);
    } catch (const Error&) {
      cf = resolve(c, doc.structural, tol);
    }
    const auto& rf = cf.form;

    // Coefficients -> reduced form -> structural (lambda = 1) -> coefficients.
    const Coefficients back = forward(structural_from_reduced(rf, 1.0, 1.0), tol);
    double scale = 0.0, coeff_err = 0.0;
    for (int n = 1; n <= 2; ++n) {
      for (int k = 1; k <= 6; ++k) {
        scale = std::max(scale, std::abs(cf.coefficients(n, k)));
        coeff_err = std::max(coeff_err, std::abs(back(n, k) - cf.coefficients(n, k)));
      }
    }
    coeff_err /= std::max(scale, 1.0);
    const double residual = max_abs(residual_suite(cf.coefficients, rf));

    std::optional<double> z_err;
    if (doc.structural) {
      const StructuralParams sp = cf.mirrored ? symmetry_transform(*doc.structural) : *doc.structural;
      if (sp.A[1][0] != 0.0 && sp.A[1][1] != 0.0) {
        const Complex r1 = sp.A[0][0] / sp.A[1][0], r2 = sp.A[0][1] / sp.A[1][1];
        const double s = std::max({std::abs(r1), std::abs(r2), 1.0});
        const double direct = std::max(std::abs(rf.z1 - r1), std::abs(rf.z2 - r2));
        const double crossed = std::max(std::abs(rf.z1 - r2), std::abs(rf.z2 - r1));
        z_err = std::min(direct, crossed) / s;
      }
    }

    const bool ok = coeff_err <= opt.roundtrip_tol && residual <= opt.residual_tol &&
                    (!z_err || *z_err <= opt.roundtrip_tol);
    Outcome o;
    o.code = ok ? kOk : kMismatch;
    o.report = {{"file", file},
                {"ok", ok},
                {"route", to_string(cf.route)},
                {"coefficient_error", coeff_err},
                {"residual_max", residual},
                {"z_error", z_err ? ordered_json(*z_err) : ordered_json(nullptr)}};
    if (!ok) o.diagnostic = file + ": roundtrip disagreement";
    return o;
  } catch (const Error& e) {
    return error_outcome(file, e);
  }
}

Outcome verify_one(const std::string& file, const Options& opt) {
  const Tolerance tol = opt.tol();
  try {
    const auto doc = load_document(file, tol);
    const auto cf = resolve(doc, tol);
    const InitialState x0 = initial_state(doc, opt);
    const auto g = grid(0.0, opt.t1, opt.steps);

    oracle::IntegrationSettings s;
    s.rel_tol = opt.oracle_tol;
    s.abs_tol = opt.oracle_tol;
    const auto numeric = oracle::integrate_grid(doc.resolved_coefficients(tol), x0, g, s);

    double sup = 0.0;
    int compared = 0, excluded = 0;
    for (const auto& p : numeric.points) {
      if (cf.pole_distance(x0, p.t) < opt.pole_margin) {
        ++excluded;
        continue;
      }
      TrajectoryPoint a;
      try {
        a = cf.at(x0, p.t);
      } catch (const Error& e) {
        if (exit_code(e.code()) != kPole) throw;
        ++excluded;
        continue;
      }
      sup = std::max({sup, std::abs(a.x1 - p.x1), std::abs(a.x2 - p.x2)});
      ++compared;
    }
    excluded += static_cast<int>(g.size() - numeric.points.size());

    Outcome o;
    if (compared == 0) {
      o.code = kPole;
      o.diagnostic = file + ": no grid point could be compared (poles)";
    } else {
      o.code = sup <= opt.threshold ? kOk : kMismatch;
      if (o.code != kOk) o.diagnostic = file + ": sup error above threshold";
    }
    o.report = {{"file", file},
                {"ok", o.code == kOk},
                {"route", to_string(cf.route)},
                {"sup_error", sup},
                {"threshold", opt.threshold},
                {"compared", compared},
                {"excluded", excluded},
                {"oracle_blowup", numeric.blew_up ? ordered_json(numeric.blowup_time) : ordered_json(nullptr)}};
    return o;
  } catch (const Error& e) {
    return error_outcome(file, e);
  }
}

// Runs `fn` over every file concurrently and prints in input order.
int fan_out(const Options& opt, Outcome (*fn)(const std::string&, const Options&), std::ostream& out,
            std::ostream& err) {
  std::vector<std::future<Outcome>> jobs;
  jobs.reserve(opt.files.size());
  for (const auto& f : opt.files) jobs.push_back(std::async(std::launch::async, fn, f, std::cref(opt)));
  int code = kOk;
  for (auto& j : jobs) {
    const Outcome o = j.get();
    out << dump(o.report);
    if (!o.diagnostic.empty()) err << o.diagnostic << "\n";
    if (code == kOk) code = o.code;
  }
  return code;
}

int cmd_check(const Options& opt, std::ostream& out) {
  const Tolerance tol = opt.tol();
  const auto doc = load_document(opt.files.front(), tol);
  const Coefficients c = doc.resolved_coefficients(tol);
  const auto rep = check_constraints(c, tol);

  ordered_json res = ordered_json::array(), raw = ordered_json::array(), holds = ordered_json::array();
  for (int k = 0; k < 4; ++k) {
    res.push_back(cjson(rep.residuals[k]));
    raw.push_back(cjson(rep.raw_residuals[k]));
    holds.push_back(rep.holds[k]);
  }
  const auto& g = rep.genericity;
  ordered_json j = {{"satisfied", rep.satisfied},
                    {"holds", holds},
                    {"residuals", res},
                    {"raw_residuals", raw},
                    {"genericity",
                     {{"c21_nonzero", g.c21_nonzero},
                      {"c12_nonzero", g.c12_nonzero},
                      {"c24_nonzero", g.c24_nonzero},
                      {"ineq1", g.ineq1},
                      {"ineq2", g.ineq2}}}};

  int code = kOk;
  if (!rep.satisfied) {
    code = kConstraint;
    j["route"] = nullptr;
  } else {
    try {
      j["route"] = to_string(resolve(doc, tol).route);
    } catch (const Error& e) {
      j["route"] = nullptr;
      code = exit_code(e.code());
    }
  }
  out << dump(j);
  return code;
}

int cmd_reduce(const Options& opt, std::ostream& out) {
  const Tolerance tol = opt.tol();
  const auto cf = resolve(load_document(opt.files.front(), tol), tol);
  out << dump(reduced_json(cf));
  return kOk;
}

int cmd_solve(const Options& opt, std::ostream& out) {
  const Tolerance tol = opt.tol();
  const auto doc = load_document(opt.files.front(), tol);
  const auto cf = resolve(doc, tol);
  out << dump(point_json(cf.at(initial_state(doc, opt), opt.t)));
  return kOk;
}

int cmd_sample(const Options& opt, std::ostream& out, std::ostream& err) {
  const Tolerance tol = opt.tol();
  const auto doc = load_document(opt.files.front(), tol);
  const auto cf = resolve(doc, tol);
  const auto r = cf.sample(initial_state(doc, opt), grid(opt.t0, opt.t1, opt.steps));
  for (const auto& p : r.poles) {
    err << "pole: w" << p.component << " at t=" << format_double(p.t_pole) << " (between "
        << format_double(p.t_before) << " and " << format_double(p.t_after) << ")\n";
  }
  if (opt.format == "csv") {
    out << "t,re_x1,im_x1,re_x2,im_x2\n";
    for (const auto& p : r.points) {
      out << format_double(p.t) << ',' << format_double(p.x1.real()) << ',' << format_double(p.x1.imag()) << ','
          << format_double(p.x2.real()) << ',' << format_double(p.x2.imag()) << '\n';
    }
  } else {
    ordered_json pts = ordered_json::array(), poles = ordered_json::array();
    for (const auto& p : r.points) pts.push_back(point_json(p));
    for (const auto& p : r.poles) {
      poles.push_back({{"component", p.component}, {"t", p.t_pole}, {"t_before", p.t_before}, {"t_after", p.t_after}});
    }
    out << dump({{"points", pts}, {"poles", poles}});
  }
  return kOk;
}

int cmd_classify(const Options& opt, std::ostream& out) {
  const Tolerance tol = opt.tol();
  const auto cf = resolve(load_document(opt.files.front(), tol), tol);
  out << dump(classification_json(cf, cf.classify(tol, opt.max_denominator)));
  return kOk;
}

int cmd_forward(const Options& opt, std::ostream& out) {
  const Tolerance tol = opt.tol();
  const auto doc = load_document(opt.files.front(), tol);
  if (!doc.structural) throw Error(ErrorCode::InvalidInput, "forward needs \"A\" and \"a\"");
  out << dump({{"c", to_json(forward(*doc.structural, tol))}});
  return kOk;
}

int cmd_triangular(const Options& opt, bool have_t, std::ostream& out, std::ostream& err) {
  const Tolerance tol = opt.tol();
  const auto doc = load_document(opt.files.front(), tol);
  const Coefficients c = doc.resolved_coefficients(tol);

  bool mirrored = false;
  auto m = match_triangular(c, tol);
  if (!m.params) {
    auto mm = match_triangular(symmetry_transform(c), tol);
    if (mm.params) {
      m = mm;
      mirrored = true;
    }
  }
  ordered_json reasons = ordered_json::array();
  for (const auto& r : m.reasons) reasons.push_back(r);
  ordered_json j = {{"matched", m.params.has_value()}, {"mirrored", mirrored}, {"reasons", reasons}};
  if (!m.params) {
    out << dump(j);
    err << "not of the triangular form\n";
    return kNonGeneric;
  }
  const auto& p = *m.params;
  const auto red = reduce_triangular(p, tol);
  j["params"] = {{"f1", cjson(p.f1)}, {"f2", cjson(p.f2)}, {"g", cjson(p.g)}, {"h1", cjson(p.h1)}, {"h2", cjson(p.h2)}};
  ordered_json eta = ordered_json::array();
  for (const auto& row : red.eta) eta.push_back({cjson(row[0]), cjson(row[1]), cjson(row[2])});
  j["eta"] = eta;
  j["gamma"] = {cjson(red.gamma[0]), cjson(red.gamma[1])};
  j["xi_plus"] = {cjson(red.xi_plus[0]), cjson(red.xi_plus[1])};
  j["xi_minus"] = {cjson(red.xi_minus[0]), cjson(red.xi_minus[1])};
  if (have_t) {
    InitialState x0 = initial_state(doc, opt);
    if (mirrored) x0 = {x0.x2, x0.x1};
    TrajectoryPoint pt = solve_triangular_at(p, x0, opt.t, tol);
    if (mirrored) pt = {pt.t, pt.x2, pt.x1};
    j["solution"] = point_json(pt);
  }
  out << dump(j);
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Closed-form solutions of solvable planar quadratic systems", "quadflow"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.add_option("--tol", opt.rel_tol, "relative tolerance for zero tests and constraint checks")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--abs-tol", opt.abs_tol, "absolute tolerance")->check(CLI::NonNegativeNumber);
  app.add_option("--max-denominator", opt.max_denominator, "largest denominator for commensurability")
      ->check(CLI::PositiveNumber);

  const auto single = [&](const std::string& name, const std::string& help) {
    auto* sc = app.add_subcommand(name, help);
    sc->add_option("file", opt.files, "system document (JSON)")->required()->expected(1);
    return sc;
  };
  const auto x0_opt = [&](CLI::App* sc) {
    sc->add_option("--x0", opt.x0_text, "initial state re,im,re,im (overrides the file)");
  };

  auto* check = single("check", "report the four constraints; exit 0/2/3");
  auto* reduce_cmd = single("reduce", "print z, alpha, beta, equilibria and residuals");
  auto* solve = single("solve", "evaluate the solution at one time");
  solve->add_option("--t", opt.t, "time")->required();
  x0_opt(solve);
  auto* sample_cmd = single("sample", "trajectory on a uniform grid");
  sample_cmd->add_option("--t0", opt.t0, "start time");
  sample_cmd->add_option("--t1", opt.t1, "end time");
  sample_cmd->add_option("--steps", opt.steps, "number of intervals")->check(CLI::PositiveNumber);
  sample_cmd->add_option("--format", opt.format, "csv or json (structured is an alias for json)")
      ->transform(CLI::IsMember({"csv", "json", "structured"}));
  x0_opt(sample_cmd);
  auto* classify_cmd = single("classify", "isochrony / asymptotic regime");
  auto* forward_cmd = single("forward", "coefficients from A and a");

  auto* roundtrip = app.add_subcommand("roundtrip", "coefficients -> reduced form -> coefficients");
  roundtrip->add_option("files", opt.files, "system documents")->required();
  roundtrip->add_option("--rel", opt.roundtrip_tol, "relative agreement required");
  roundtrip->add_option("--residual", opt.residual_tol, "largest residual_suite entry allowed");

  auto* verify = app.add_subcommand("verify", "closed form against numerical integration");
  verify->add_option("files", opt.files, "system documents")->required();
  verify->add_option("--t1", opt.t1, "end time")->required();
  verify->add_option("--steps", opt.steps, "grid intervals")->check(CLI::PositiveNumber);
  verify->add_option("--threshold", opt.threshold, "largest allowed sup error");
  verify->add_option("--oracle-tol", opt.oracle_tol, "integrator tolerance")->check(CLI::PositiveNumber);
  verify->add_option("--pole-margin", opt.pole_margin, "skip grid points this close to a complex pole");
  x0_opt(verify);

  auto* tri_cmd = single("case51", "match and solve the triangular special form (alias: triangular)");
  tri_cmd->alias("triangular");
  auto* triangular_t = tri_cmd->add_option("--t", opt.t, "time");
  x0_opt(tri_cmd);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kMalformed;
  }

  try {
    validate(opt.tol());
    if (opt.format == "structured") opt.format = "json";
    if (*check) return cmd_check(opt, out);
    if (*reduce_cmd) return cmd_reduce(opt, out);
    if (*solve) return cmd_solve(opt, out);
    if (*sample_cmd) return cmd_sample(opt, out, err);
    if (*classify_cmd) return cmd_classify(opt, out);
    if (*forward_cmd) return cmd_forward(opt, out);
    if (*roundtrip) return fan_out(opt, roundtrip_one, out, err);
    if (*verify) return fan_out(opt, verify_one, out, err);
    if (*tri_cmd) return cmd_triangular(opt, triangular_t->count() > 0, out, err);
  } catch (const Error& e) {
    err << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code(e.code());
  }
  return kMalformed;
}

}  // namespace quadflow::cli
