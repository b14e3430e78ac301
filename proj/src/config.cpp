#include "slag/config.hpp"

#include <cmath>
#include <set>

#include "slag/expr.hpp"

namespace slag {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& field, const std::string& what) {
  throw InputError("config field '" + field + "': " + what);
}

void only_keys(const json& obj, const std::string& where, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) bad(where.empty() ? key : where + "." + key, "unknown field");
  }
}

const json& object_at(const json& j, const std::string& key, const std::string& field) {
  const json& o = j.at(key);
  if (!o.is_object()) bad(field, "must be an object");
  return o;
}

// A real number given as a JSON number or a constant expression.
double real_value(const json& v, const std::string& field, int n) {
  if (v.is_number()) {
    const double d = v.get<double>();
    if (!std::isfinite(d)) bad(field, "must be finite");
    return d;
  }
  if (v.is_string()) {
    try {
      return evaluate_constant(v.get<std::string>(), n);
    } catch (const InputError& e) {
      bad(field, e.what());
    }
  }
  bad(field, "must be a number or a constant expression");
}

double positive_real(const json& v, const std::string& field, int n) {
  const double d = real_value(v, field, n);
  if (!(d > 0)) bad(field, "must be positive");
  return d;
}

Eigen::Index count_value(const json& v, const std::string& field, Eigen::Index min) {
  if (!v.is_number_integer()) bad(field, "must be an integer");
  const auto c = v.get<long long>();
  if (c < min) bad(field, "must be at least " + std::to_string(min));
  return static_cast<Eigen::Index>(c);
}

std::vector<double> bounds(const json& v, const std::string& field, int n) {
  std::vector<double> out;
  if (v.is_array()) {
    for (std::size_t k = 0; k < v.size(); ++k) {
      out.push_back(real_value(v[k], field + "[" + std::to_string(k) + "]", n));
    }
  } else {
    out.assign(static_cast<std::size_t>(n), real_value(v, field, n));
  }
  if (static_cast<int>(out.size()) != n) bad(field, "must have " + std::to_string(n) + " entries");
  return out;
}

// Values at every node of g, from an expression or an array of node values.
Eigen::VectorXd node_values(const json& spec, const std::string& field, const SpaceGrid& g,
                            double t, int n) {
  Eigen::VectorXd out(g.size());
  if (spec.is_string()) {
    Expression e;
    try {
      e = Expression::parse(spec.get<std::string>());
    } catch (const InputError& err) {
      bad(field, err.what());
    }
    for (Eigen::Index s = 0; s < g.size(); ++s) {
      const Eigen::VectorXd p = g.point(s);
      out(s) = e({t, p(0), p.size() > 1 ? p(1) : 0.0, static_cast<double>(n)});
    }
  } else if (spec.is_array()) {
    if (static_cast<Eigen::Index>(spec.size()) != g.size()) {
      bad(field, "array must list " + std::to_string(g.size()) + " node values");
    }
    for (Eigen::Index s = 0; s < g.size(); ++s) {
      out(s) = real_value(spec[static_cast<std::size_t>(s)], field, n);
    }
  } else {
    bad(field, "must be an expression string or an array");
  }
  if (!out.allFinite()) bad(field, "evaluates to a non-finite value");
  return out;
}

// Values at boundary nodes only (ordered as boundaryIndices()).
Eigen::VectorXd trace_values(const json& spec, const std::string& field, const SpaceGrid& g,
                             double t, int n) {
  const auto& b = g.boundaryIndices();
  if (spec.is_array() && spec.size() == b.size()) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(b.size()));
    for (std::size_t k = 0; k < b.size(); ++k) {
      out(static_cast<Eigen::Index>(k)) = real_value(spec[k], field, n);
    }
    return out;
  }
  if (spec.is_array()) bad(field, "array must list " + std::to_string(b.size()) + " boundary values");
  const Eigen::VectorXd all = node_values(spec, field, g, t, n);
  Eigen::VectorXd out(static_cast<Eigen::Index>(b.size()));
  for (std::size_t k = 0; k < b.size(); ++k) out(static_cast<Eigen::Index>(k)) = all(b[k]);
  return out;
}

}  // namespace

void RunConfig::setPhase(const json& spec) {
  phaseSpec = spec;
  phase = real_value(spec, "phase", n);
}

SpaceGrid RunConfig::spaceGrid() const {
  try {
    if (n == 1) return SpaceGrid::interval(lower[0], upper[0], nx);
    return SpaceGrid::rectangle(lower[0], upper[0], lower[1], upper[1], nx, ny);
  } catch (const DomainError& e) {
    bad("grid", e.what());
  }
}

json RunConfig::echo() const {
  json j;
  j["n"] = n;
  j["domain"] = {{"min", lower}, {"max", upper}};
  json grid = {{"nx", nx}, {"nt", nt}, {"ntau", ntau}, {"nr", nr}};
  if (n == 2) grid["ny"] = ny;
  j["grid"] = grid;
  j["phase"] = phaseSpec;
  j["boundary"] = boundary;
  if (tauRange) j["tau_range"] = {tauRange->lo, tauRange->hi};
  j["threads"] = threads;
  j["seed"] = seed;
  j["cap_check"] = capCheck == CapCheck::Error ? "error" : "warn";
  j["tolerances"] = {{"band", tol.band},     {"locus", tol.locus}, {"sweep", tol.sweep},
                     {"newton", tol.newton}, {"cap", tol.cap},     {"max_sweeps", maxSweeps},
                     {"max_newton", maxNewton}};
  json out = json::object();
  if (!outGrid.empty()) out["grid"] = outGrid;
  if (!outSolution.empty()) out["solution"] = outSolution;
  if (!outDiagnostics.empty()) out["diagnostics"] = outDiagnostics;
  if (!outConfig.empty()) out["config"] = outConfig;
  j["output"] = out;
  return j;
}

RunConfig parse_config(const json& j) {
  if (!j.is_object()) throw InputError("config: top level must be a JSON object");
  only_keys(j, "", {"n", "domain", "grid", "phase", "boundary", "tau_range", "threads", "seed",
                    "cap_check", "tolerances", "output"});
  RunConfig c;
  if (j.contains("n")) {
    if (!j["n"].is_number_integer() || (j["n"] != 1 && j["n"] != 2)) bad("n", "must be 1 or 2");
    c.n = j["n"].get<int>();
  }

  c.lower.assign(static_cast<std::size_t>(c.n), -1.0);
  c.upper.assign(static_cast<std::size_t>(c.n), 1.0);
  if (j.contains("domain")) {
    const json& d = object_at(j, "domain", "domain");
    only_keys(d, "domain", {"min", "max"});
    if (d.contains("min")) c.lower = bounds(d["min"], "domain.min", c.n);
    if (d.contains("max")) c.upper = bounds(d["max"], "domain.max", c.n);
  }
  for (int a = 0; a < c.n; ++a) {
    if (!(c.upper[static_cast<std::size_t>(a)] > c.lower[static_cast<std::size_t>(a)])) {
      bad("domain", "max must exceed min on every axis");
    }
  }

  c.nx = c.n == 1 ? 201 : 65;
  bool nyGiven = false;
  bool nrGiven = false;
  if (j.contains("grid")) {
    const json& g = object_at(j, "grid", "grid");
    only_keys(g, "grid", {"nx", "ny", "nt", "ntau", "nr"});
    if (g.contains("nx")) c.nx = count_value(g["nx"], "grid.nx", 3);
    if (g.contains("ny")) {
      if (c.n == 1) bad("grid.ny", "only allowed for n = 2");
      c.ny = count_value(g["ny"], "grid.ny", 3);
      nyGiven = true;
    }
    if (g.contains("nt")) c.nt = count_value(g["nt"], "grid.nt", 3);
    if (g.contains("ntau")) c.ntau = count_value(g["ntau"], "grid.ntau", 3);
    if (g.contains("nr")) {
      c.nr = count_value(g["nr"], "grid.nr", 2);
      nrGiven = true;
    }
  }
  if (c.n == 2 && !nyGiven) {
    const double h = (c.upper[0] - c.lower[0]) / static_cast<double>(c.nx - 1);
    c.ny = static_cast<Eigen::Index>(std::llround((c.upper[1] - c.lower[1]) / h)) + 1;
    if (c.ny < 3) bad("grid.ny", "derived value is below 3");
  }
  if (!nrGiven) c.nr = c.nt;

  c.setPhase(j.contains("phase") ? j["phase"] : json(0.0));

  if (j.contains("boundary")) c.boundary = object_at(j, "boundary", "boundary");
  if (j.contains("tau_range")) {
    const json& r = j["tau_range"];
    if (!r.is_array() || r.size() != 2) bad("tau_range", "must be [lo, hi]");
    const double lo = real_value(r[0], "tau_range[0]", c.n);
    const double hi = real_value(r[1], "tau_range[1]", c.n);
    if (!(hi > lo)) bad("tau_range", "hi must exceed lo");
    c.tauRange = SlopeRange{lo, hi};
  }
  if (j.contains("threads")) c.threads = static_cast<int>(count_value(j["threads"], "threads", 1));
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) bad("seed", "must be a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("cap_check")) {
    const json& v = j["cap_check"];
    if (v == "error") {
      c.capCheck = CapCheck::Error;
    } else if (v == "warn") {
      c.capCheck = CapCheck::Warn;
    } else {
      bad("cap_check", "must be \"error\" or \"warn\"");
    }
  }
  if (j.contains("tolerances")) {
    const json& t = object_at(j, "tolerances", "tolerances");
    only_keys(t, "tolerances", {"band", "locus", "sweep", "newton", "cap", "max_sweeps", "max_newton"});
    if (t.contains("band")) c.tol.band = positive_real(t["band"], "tolerances.band", c.n);
    if (t.contains("locus")) c.tol.locus = positive_real(t["locus"], "tolerances.locus", c.n);
    if (t.contains("sweep")) c.tol.sweep = positive_real(t["sweep"], "tolerances.sweep", c.n);
    if (t.contains("newton")) c.tol.newton = positive_real(t["newton"], "tolerances.newton", c.n);
    if (t.contains("cap")) c.tol.cap = positive_real(t["cap"], "tolerances.cap", c.n);
    if (t.contains("max_sweeps")) c.maxSweeps = count_value(t["max_sweeps"], "tolerances.max_sweeps", 1);
    if (t.contains("max_newton")) {
      c.maxNewton = static_cast<int>(count_value(t["max_newton"], "tolerances.max_newton", 1));
    }
  }
  if (j.contains("output")) {
    const json& o = object_at(j, "output", "output");
    only_keys(o, "output", {"grid", "solution", "diagnostics", "config"});
    auto path = [&](const char* key, std::string& dst) {
      if (!o.contains(key)) return;
      if (!o[key].is_string()) bad(std::string("output.") + key, "must be a path string");
      dst = o[key].get<std::string>();
    };
    path("grid", c.outGrid);
    path("solution", c.outSolution);
    path("diagnostics", c.outDiagnostics);
    path("config", c.outConfig);
  }
  c.spaceGrid();  // geometry errors surface at parse time
  return c;
}

BoundaryData boundary_data(const RunConfig& cfg) {
  const json& b = cfg.boundary;
  only_keys(b, "boundary", {"g", "cap_bottom", "cap_top", "lateral"});
  const SpaceGrid grid = cfg.spaceGrid();
  BoundaryData g;
  g.phase = cfg.phase;
  g.rGrid = uniform_samples(0.0, 1.0, cfg.nr);

  const bool whole = b.contains("g");
  auto pick = [&](const char* key) -> const json& {
    if (b.contains(key)) return b[key];
    if (whole) return b["g"];
    bad(std::string("boundary.") + key, "missing (give it or boundary.g)");
  };
  if (whole && !b["g"].is_string()) bad("boundary.g", "must be an expression string");

  g.capBottom = grid.withValues(node_values(pick("cap_bottom"), "boundary.cap_bottom", grid, 0.0, cfg.n));
  g.capTop = grid.withValues(node_values(pick("cap_top"), "boundary.cap_top", grid, 1.0, cfg.n));

  const auto& bnodes = grid.boundaryIndices();
  const auto nb = static_cast<Eigen::Index>(bnodes.size());
  g.lateral.resize(cfg.nr, nb);
  const json& lat = pick("lateral");
  if (lat.is_string()) {
    Expression e;
    try {
      e = Expression::parse(lat.get<std::string>());
    } catch (const InputError& err) {
      bad("boundary.lateral", err.what());
    }
    for (Eigen::Index k = 0; k < cfg.nr; ++k) {
      for (Eigen::Index y = 0; y < nb; ++y) {
        const Eigen::VectorXd p = grid.point(bnodes[static_cast<std::size_t>(y)]);
        g.lateral(k, y) = e({g.rGrid(k), p(0), p.size() > 1 ? p(1) : 0.0, static_cast<double>(cfg.n)});
      }
    }
  } else if (lat.is_array()) {
    if (static_cast<Eigen::Index>(lat.size()) != cfg.nr) {
      bad("boundary.lateral", "array must have grid.nr = " + std::to_string(cfg.nr) + " rows");
    }
    for (Eigen::Index k = 0; k < cfg.nr; ++k) {
      const json& row = lat[static_cast<std::size_t>(k)];
      if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != nb) {
        bad("boundary.lateral", "each row must list " + std::to_string(nb) + " boundary values");
      }
      for (Eigen::Index y = 0; y < nb; ++y) {
        g.lateral(k, y) = real_value(row[static_cast<std::size_t>(y)], "boundary.lateral", cfg.n);
      }
    }
  } else {
    bad("boundary.lateral", "must be an expression string or an array of rows");
  }
  if (!g.lateral.allFinite()) bad("boundary.lateral", "evaluates to a non-finite value");
  return g;
}

EnvelopeProblem envelope_problem(const RunConfig& cfg) {
  const json& b = cfg.boundary;
  only_keys(b, "boundary", {"obstacle", "trace"});
  if (!b.contains("obstacle")) bad("boundary.obstacle", "missing");
  if (!b.contains("trace")) bad("boundary.trace", "missing");
  const SpaceGrid grid = cfg.spaceGrid();
  EnvelopeProblem p;
  p.obstacle = grid.withValues(node_values(b["obstacle"], "boundary.obstacle", grid, 0.0, cfg.n));
  p.boundaryTrace = trace_values(b["trace"], "boundary.trace", grid, 0.0, cfg.n);
  p.phase = cfg.phase;
  return p;
}

Eigen::VectorXd dirichlet_trace(const RunConfig& cfg) {
  const json& b = cfg.boundary;
  only_keys(b, "boundary", {"trace"});
  if (!b.contains("trace")) bad("boundary.trace", "missing");
  return trace_values(b["trace"], "boundary.trace", cfg.spaceGrid(), 0.0, cfg.n);
}

}  // namespace slag
