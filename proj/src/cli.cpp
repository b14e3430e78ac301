#include "slag/cli.hpp"

#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "slag/angles.hpp"
#include "slag/config.hpp"
#include "slag/dsl.hpp"
#include "slag/expr.hpp"
#include "slag/io.hpp"
#include "slag/solvers.hpp"
#include "slag/subeq.hpp"

namespace slag::cli {

namespace {

using nlohmann::json;

struct Flags {
  std::string config;
  std::string matrix;
  std::string phase;
  std::string solution;
  std::string out;
  bool spacetime = false;
  bool dual = false;
  std::optional<Eigen::Index> tauSamples;
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
  std::optional<int> sampleDim;
  std::optional<double> tolBand;
  std::optional<double> tolLocus;
  std::optional<double> tolSweep;
  std::optional<double> tolNewton;
  std::optional<double> tolCap;
};

json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(what + ": " + e.what());
  }
}

// A path, or inline JSON when the argument starts with '{'.
json load_json_arg(const std::string& arg, const std::string& what) {
  const auto first = arg.find_first_not_of(" \t\n");
  if (first != std::string::npos && arg[first] == '{') return parse_json_text(arg, what);
  return parse_json_text(io::read_text_file(arg), what + " '" + arg + "'");
}

RunConfig load_config(const Flags& f) {
  if (f.config.empty()) throw InputError("--config is required for this command");
  RunConfig c = parse_config(load_json_arg(f.config, "config"));
  if (!f.phase.empty()) c.setPhase(json(f.phase));
  if (f.tauSamples) {
    if (*f.tauSamples < 3) throw InputError("--tau-samples must be at least 3");
    c.ntau = *f.tauSamples;
  }
  if (f.threads) c.threads = *f.threads;
  if (f.seed) c.seed = *f.seed;
  if (f.tolBand) c.tol.band = *f.tolBand;
  if (f.tolLocus) c.tol.locus = *f.tolLocus;
  if (f.tolSweep) c.tol.sweep = *f.tolSweep;
  if (f.tolNewton) c.tol.newton = *f.tolNewton;
  if (f.tolCap) c.tol.cap = *f.tolCap;
  return c;
}

double phase_flag(const Flags& f, int n) {
  if (f.phase.empty()) throw InputError("--phase is required for this command");
  return evaluate_constant(f.phase, n);
}

std::string method_name(AngleMethod m) {
  switch (m) {
    case AngleMethod::BlockFormula: return "block_formula";
    case AngleMethod::DirectEigensolve: return "direct_eigensolve";
    case AngleMethod::Limit: return "limit";
  }
  return "unknown";
}

// Writes `text` to `path`, or to `out` when no path is set. Returns true if a
// file was written.
bool emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return false;
  }
  io::write_text_file(path, text);
  return true;
}

void emit_summary(const RunConfig& cfg, json result, bool dataInFile, std::ostream& out,
                  std::ostream& err) {
  const json echo = cfg.echo();
  if (!cfg.outConfig.empty()) io::write_text_file(cfg.outConfig, echo.dump(2) + "\n");
  const json summary = {{"config", echo}, {"result", std::move(result)}};
  (dataInFile ? out : err) << summary.dump(2) << "\n";
}

int cmd_angle(const Flags& f, std::ostream& out) {
  if (f.matrix.empty()) throw InputError("--matrix is required");
  const SymMatrixd a = io::matrix_from_json(load_json_arg(f.matrix, "matrix"));
  const double locus = f.tolLocus.value_or(kDefaultLocusTolerance);
  json r = {{"dim", a.dim()}};
  if (f.spacetime) {
    const AngleResult<double> res = spacetime_lifted_angle(a, locus);
    r["angle"] = res.angle;
    r["on_degenerate_locus"] = res.onDegenerateLocus;
    r["method"] = method_name(res.method);
  } else {
    r["angle"] = lifted_angle(a);
    r["lagrangian_angle"] = lagrangian_angle(a);
  }
  out << r.dump(2) << "\n";
  return 0;
}

int cmd_check(const Flags& f, std::ostream& out) {
  const double band = f.tolBand.value_or(kDefaultBand);
  std::optional<SymMatrixd> a;
  int dim = 0;
  if (!f.matrix.empty()) {
    a = io::matrix_from_json(load_json_arg(f.matrix, "matrix"));
    dim = static_cast<int>(a->dim());
  } else if (f.sampleDim) {
    dim = *f.sampleDim + (f.spacetime ? 1 : 0);
  } else {
    throw InputError("--matrix or --sample-dim is required");
  }
  const int n = f.spacetime ? dim - 1 : dim;
  if (n < 1) throw DomainError("space-time matrices need dimension at least 2");
  const Phase c{phase_flag(f, n), n};
  json r;
  if (!a) {
    a = f.spacetime ? sample_calFc_member(c, f.seed.value_or(0))
                    : sample_Fc_member(c, f.seed.value_or(0));
    r["matrix"] = io::matrix_to_json(*a);
    r["seed"] = f.seed.value_or(0);
  }
  Membership m{};
  std::string set;
  if (f.spacetime) {
    m = f.dual ? in_dual_calFc(*a, c, band) : in_calFc(*a, c, band);
    set = f.dual ? "dual_spacetime" : "spacetime";
  } else {
    m = f.dual ? in_Fc(*a, Phase{-c.value, n}, band) : in_Fc(*a, c, band);
    set = f.dual ? "dual_space" : "space";
  }
  r["status"] = std::string(to_string(m.status));
  r["margin"] = m.margin;
  r["phase"] = c.value;
  r["subequation"] = set;
  out << r.dump(2) << "\n";
  return 0;
}

int cmd_envelope(const Flags& f, std::ostream& out, std::ostream& err) {
  RunConfig cfg = load_config(f);
  if (!f.out.empty()) cfg.outGrid = f.out;
  const EnvelopeProblem p = envelope_problem(cfg);
  const SpaceGrid w = envelope(p, SweepOptions{cfg.tol.sweep, cfg.maxSweeps, 0.0});
  std::ostringstream csv;
  io::write_grid_csv(csv, w);
  const bool toFile = emit(cfg.outGrid, csv.str(), out);
  const Eigen::VectorXd margins = membership_margins(w, p.phase);
  json result = {{"command", "envelope"},
                 {"nodes", w.size()},
                 {"min_margin", margins.size() ? margins.minCoeff() : 0.0},
                 {"max_obstacle_gap", (p.caps() - w.values).maxCoeff()}};
  emit_summary(cfg, result, toFile, out, err);
  return 0;
}

int cmd_dirichlet(const Flags& f, std::ostream& out, std::ostream& err) {
  RunConfig cfg = load_config(f);
  if (!f.out.empty()) cfg.outGrid = f.out;
  const SpaceGrid u = dirichlet(cfg.spaceGrid(), dirichlet_trace(cfg), cfg.phase,
                                NewtonOptions{cfg.tol.newton, cfg.maxNewton});
  std::ostringstream csv;
  io::write_grid_csv(csv, u);
  const bool toFile = emit(cfg.outGrid, csv.str(), out);
  const Eigen::VectorXd margins = membership_margins(u, cfg.phase);
  json result = {{"command", "dirichlet"},
                 {"nodes", u.size()},
                 {"residual", margins.size() ? margins.cwiseAbs().maxCoeff() : 0.0}};
  emit_summary(cfg, result, toFile, out, err);
  return 0;
}

int cmd_dsl_solve(const Flags& f, std::ostream& out, std::ostream& err) {
  RunConfig cfg = load_config(f);
  if (!f.out.empty()) cfg.outSolution = f.out;
  DslOptions opts;
  opts.timeSamples = cfg.nt;
  opts.tauSamples = cfg.ntau;
  opts.tauRange = cfg.tauRange;
  opts.threads = cfg.threads;
  opts.sweep = SweepOptions{cfg.tol.sweep, cfg.maxSweeps, 0.0};
  opts.capCheck = cfg.capCheck;
  opts.capTol = cfg.tol.cap;
  const DSLSolution sol = solve_dsl(boundary_data(cfg), opts);

  std::ostringstream csv;
  io::write_solution_csv(csv, sol.u, sol.geometry);
  const bool toFile = emit(cfg.outSolution, csv.str(), out);
  const json diagnostics = io::reports_to_json(sol.diagnostics);
  if (!cfg.outDiagnostics.empty()) io::write_text_file(cfg.outDiagnostics, diagnostics.dump(2) + "\n");
  json result = {{"command", "dsl-solve"},
                 {"phase", cfg.phase},
                 {"tau_range", {sol.tauGrid(0), sol.tauGrid(sol.tauGrid.size() - 1)}},
                 {"diagnostics", diagnostics},
                 {"warnings", sol.warnings}};
  emit_summary(cfg, result, toFile, out, err);
  return 0;
}

int cmd_verify(const Flags& f, std::ostream& out) {
  if (f.solution.empty()) throw InputError("--solution is required");
  std::istringstream in(io::read_text_file(f.solution));
  const io::SolutionTable table = io::read_solution_csv(in);
  const int n = table.geometry.dim();
  double c = 0.0;
  if (!f.phase.empty()) {
    c = evaluate_constant(f.phase, n);
  } else if (!f.config.empty()) {
    c = load_config(f).phase;
  } else {
    throw InputError("--phase or --config is required");
  }
  const Phase phase{c, n};
  std::vector<CheckReport> reports;
  reports.push_back(verify_time_convexity(table.u));
  reports.push_back(verify_min_principle(table.u, table.geometry, phase));
  for (auto& r : verify_angle_residual(table.u, table.geometry, phase)) reports.push_back(r);
  const json diagnostics = io::reports_to_json(reports);
  emit(f.out, diagnostics.dump(2) + "\n", out);
  bool pass = true;
  for (const auto& r : reports) pass = pass && r.pass;
  return pass ? 0 : 1;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Lagrangian angles, subequation checks and degenerate special Lagrangian solves"};
  app.require_subcommand(1);
  Flags f;

  auto tol_flags = [&](CLI::App* sub, bool locus, bool band, bool sweep, bool newton, bool cap) {
    if (locus) sub->add_option("--tol-locus", f.tolLocus, "Degenerate-locus tolerance")->check(CLI::PositiveNumber);
    if (band) sub->add_option("--tol-band", f.tolBand, "Membership boundary band")->check(CLI::PositiveNumber);
    if (sweep) sub->add_option("--tol-sweep", f.tolSweep, "Envelope sweep stop")->check(CLI::PositiveNumber);
    if (newton) sub->add_option("--tol-newton", f.tolNewton, "Dirichlet residual target")->check(CLI::PositiveNumber);
    if (cap) sub->add_option("--tol-cap", f.tolCap, "Cap membership slack")->check(CLI::PositiveNumber);
  };

  auto* angle = app.add_subcommand("angle", "Lifted angle of a symmetric matrix");
  angle->add_option("--matrix", f.matrix, "Matrix JSON file or inline JSON")->required();
  angle->add_flag("--spacetime", f.spacetime, "Space-time angle (first coordinate is time)");
  tol_flags(angle, true, false, false, false, false);

  auto* check = app.add_subcommand("check", "Subequation membership of a matrix");
  check->add_option("--matrix", f.matrix, "Matrix JSON file or inline JSON");
  check->add_option("--sample-dim", f.sampleDim, "Sample a member for space dimension n")
      ->check(CLI::Range(1, 8));
  check->add_option("--phase", f.phase, "Phase c (number or expression in n, pi)")->required();
  check->add_flag("--spacetime", f.spacetime, "Test the space-time subequation");
  check->add_flag("--dual", f.dual, "Test the dual subequation");
  check->add_option("--seed", f.seed, "Sampler seed");
  tol_flags(check, false, true, false, false, false);

  auto* env = app.add_subcommand("envelope", "Obstacle problem on a grid");
  auto* dir = app.add_subcommand("dirichlet", "Dirichlet problem on a grid");
  auto* dsl = app.add_subcommand("dsl-solve", "Degenerate special Lagrangian solve on [0,1] x D");
  for (auto* sub : {env, dir, dsl}) {
    sub->add_option("--config", f.config, "Run configuration JSON")->required();
    sub->add_option("--phase", f.phase, "Override the configured phase");
    sub->add_option("--out", f.out, "Output CSV path (default: stdout)");
  }
  tol_flags(env, false, false, true, false, false);
  tol_flags(dir, false, false, false, true, false);
  tol_flags(dsl, false, false, true, false, true);
  dsl->add_option("--tau-samples", f.tauSamples, "Number of dual slopes");
  dsl->add_option("--threads", f.threads, "Worker threads for the slope sweep")->check(CLI::PositiveNumber);
  dsl->add_option("--seed", f.seed, "Recorded in the echoed configuration");

  auto* ver = app.add_subcommand("verify", "Check a solution CSV");
  ver->add_option("--solution", f.solution, "Solution CSV (t,x[,y],u)")->required();
  ver->add_option("--phase", f.phase, "Phase c");
  ver->add_option("--config", f.config, "Take the phase from a run configuration");
  ver->add_option("--out", f.out, "Diagnostics JSON path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*angle) return cmd_angle(f, out);
    if (*check) return cmd_check(f, out);
    if (*env) return cmd_envelope(f, out, err);
    if (*dir) return cmd_dirichlet(f, out, err);
    if (*dsl) return cmd_dsl_solve(f, out, err);
    return cmd_verify(f, out);
  } catch (const ConvergenceError& e) {
    err << "convergence error: " << e.what() << "\n";
    return 3;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    err << "precondition error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace slag::cli
