#include "slag/dsl.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "slag/angles.hpp"

namespace slag {

namespace {

constexpr double kPi = std::numbers::pi;

void require_dsl_phase(double c, int n) {
  if (!(c >= n * kPi / 2 && c < (n + 1) * kPi / 2)) {
    std::ostringstream os;
    os.precision(17);
    os << "phase c = " << c << " outside [n pi/2, (n+1) pi/2) for n = " << n;
    throw DomainError(os.str());
  }
}

std::string describe_node(const SpaceGrid& g, Eigen::Index s) {
  std::ostringstream os;
  os.precision(10);
  const Eigen::VectorXd p = g.point(s);
  os << "x=" << p(0);
  if (p.size() > 1) os << ",y=" << p(1);
  return os.str();
}

std::vector<Eigen::Index> stencil_neighbors(const SpaceGrid& g, Eigen::Index s) {
  if (g.dim() == 1) return {s - 1, s + 1};
  const Eigen::Index ny = g.count(1);
  return {s - ny - 1, s - ny, s - ny + 1, s - 1, s + 1, s + ny - 1, s + ny, s + ny + 1};
}

double max_abs_diff(const SymMatrixd& a, const SymMatrixd& b) {
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

void check_family_geometry(const SampledFamily& u, const SpaceGrid& geometry) {
  u.validate();
  if (u.spaceSize() != geometry.size()) {
    throw DomainError("family space size does not match the space grid");
  }
}

// Linear interpolation of column `col` of (grid, values) at t.
double interpolate(const Eigen::VectorXd& grid, const Eigen::MatrixXd& values, Eigen::Index col,
                   double t) {
  if (t <= grid(0)) return values(0, col);
  const Eigen::Index last = grid.size() - 1;
  if (t >= grid(last)) return values(last, col);
  const auto it = std::upper_bound(grid.data(), grid.data() + grid.size(), t);
  const Eigen::Index k = (it - grid.data()) - 1;
  const double w = (t - grid(k)) / (grid(k + 1) - grid(k));
  return (1 - w) * values(k, col) + w * values(k + 1, col);
}

// Central-difference space-time Hessian of a sampled family at time row k
// (1 ≤ k ≤ K-2) and interior space node s; time comes first.
SymMatrixd spacetime_hessian(const SampledFamily& u, const SpaceGrid& g, Eigen::Index k,
                             Eigen::Index s) {
  const int n = g.dim();
  const double dm = u.grid(k) - u.grid(k - 1);
  const double dp = u.grid(k + 1) - u.grid(k);
  const double h = g.spacing();
  Eigen::MatrixXd hess(n + 1, n + 1);
  hess(0, 0) = 2.0 * ((u.values(k + 1, s) - u.values(k, s)) / dp -
                      (u.values(k, s) - u.values(k - 1, s)) / dm) /
               (dp + dm);
  const Eigen::Index stride[2] = {n == 1 ? 1 : g.count(1), 1};
  for (int a = 0; a < n; ++a) {
    const Eigen::Index e = stride[a];
    hess(0, a + 1) = hess(a + 1, 0) =
        (u.values(k + 1, s + e) - u.values(k + 1, s - e) - u.values(k - 1, s + e) +
         u.values(k - 1, s - e)) /
        (2.0 * h * (dp + dm));
  }
  const SpaceGrid slice = g.withValues(u.values.row(k).transpose());
  hess.bottomRightCorner(n, n) = discrete_hessian(slice, s).matrix();
  return SymMatrixd(hess);
}

struct Tally {
  Eigen::Index count = 0;
  Eigen::Index good = 0;
  double worst = 0.0;
  bool seen = false;
  std::string where;

  void add(double value, bool ok, bool worseIfLower, const std::string& at) {
    ++count;
    if (ok) ++good;
    if (!seen || (worseIfLower ? value < worst : value > worst)) {
      worst = value;
      where = at;
      seen = true;
    }
  }

  CheckReport report(std::string name, double tol, double required) const {
    CheckReport r;
    r.name = std::move(name);
    r.nodeCount = count;
    r.worstMargin = worst;
    r.passFraction = count > 0 ? static_cast<double>(good) / static_cast<double>(count) : 1.0;
    r.pass = r.passFraction >= required;
    r.tolerance = tol;
    r.detail = where;
    return r;
  }
};

}  // namespace

void BoundaryData::validate(double tol) const {
  if (capBottom.dim() < 1 || !capBottom.sameGeometry(capTop)) {
    throw DomainError("boundary data: caps must share one space grid");
  }
  require_dsl_phase(phase, spaceDim());
  if (!capBottom.values.allFinite() || !capTop.values.allFinite()) {
    throw DomainError("boundary data: caps must be finite");
  }
  const auto& b = capBottom.boundaryIndices();
  if (rGrid.size() < 2 || lateral.rows() != rGrid.size() ||
      lateral.cols() != static_cast<Eigen::Index>(b.size())) {
    throw DomainError("boundary data: lateral table shape does not match its grids");
  }
  if (!lateral.allFinite() || !rGrid.allFinite()) {
    throw DomainError("boundary data: lateral values must be finite");
  }
  for (Eigen::Index k = 1; k < rGrid.size(); ++k) {
    if (!(rGrid(k) > rGrid(k - 1))) throw DomainError("boundary data: r grid must increase");
  }
  if (std::abs(rGrid(0)) > 1e-12 || std::abs(rGrid(rGrid.size() - 1) - 1.0) > 1e-12) {
    throw DomainError("boundary data: r grid must span [0, 1]");
  }
  const Eigen::Index last = rGrid.size() - 1;
  for (std::size_t k = 0; k < b.size(); ++k) {
    const auto col = static_cast<Eigen::Index>(k);
    const double d0 = std::abs(lateral(0, col) - capBottom.values(b[k]));
    const double d1 = std::abs(lateral(last, col) - capTop.values(b[k]));
    if (d0 > tol || d1 > tol) {
      std::ostringstream os;
      os.precision(17);
      os << "boundary data: caps and lateral data disagree at corner "
         << describe_node(capBottom, b[k]) << " (" << std::max(d0, d1) << ")";
      throw PreconditionError(os.str());
    }
  }
}

EnvelopeProblem obstacle_for_tau(const BoundaryData& g, double tau) {
  EnvelopeProblem p;
  p.obstacle = g.capBottom.withValues(g.capBottom.values.cwiseMin(
      (g.capTop.values.array() - tau).matrix()));
  const Eigen::Index cols = g.lateral.cols();
  p.boundaryTrace.resize(cols);
  for (Eigen::Index y = 0; y < cols; ++y) {
    p.boundaryTrace(y) = (g.lateral.col(y) - tau * g.rGrid).minCoeff();
  }
  p.phase = g.phase - kPi / 2;
  return p;
}

SlopeRange boundary_slope_range(const BoundaryData& g) {
  SampledFamily caps;
  caps.grid = Eigen::Vector2d(0.0, 1.0);
  caps.spaceShape = g.capBottom.counts();
  caps.values.resize(2, g.capBottom.size());
  caps.values.row(0) = g.capBottom.values.transpose();
  caps.values.row(1) = g.capTop.values.transpose();
  SampledFamily lateral;
  lateral.grid = g.rGrid;
  lateral.spaceShape = {g.lateral.cols()};
  lateral.values = g.lateral;
  const SlopeRange a = slope_range(caps);
  const SlopeRange b = slope_range(lateral);
  return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)};
}

DSLSolution solve_dsl(const BoundaryData& g, const DslOptions& opts) {
  g.validate();
  if (opts.timeSamples < 3) throw DomainError("solve_dsl: need at least 3 time samples");
  if (opts.tauSamples < 2) throw DomainError("solve_dsl: need at least 2 tau samples");
  DSLSolution sol;
  sol.geometry = g.capBottom.withValues(Eigen::VectorXd::Zero(g.capBottom.size()));
  const double a = g.phase - kPi / 2;

  // The cap condition g(i, ·) ∈ F_{c-π/2} is a hypothesis of the construction.
  for (const auto* cap : {&g.capBottom, &g.capTop}) {
    const Eigen::VectorXd margins = membership_margins(*cap, a);
    std::ostringstream bad;
    int offending = 0;
    const auto& interior = cap->interiorIndices();
    for (Eigen::Index k = 0; k < margins.size(); ++k) {
      if (margins(k) < -opts.capTol) {
        if (offending < 10) {
          bad << (offending ? "; " : "") << describe_node(*cap, interior[static_cast<std::size_t>(k)])
              << " margin " << margins(k);
        }
        ++offending;
      }
    }
    if (offending > 0) {
      std::ostringstream os;
      os << (cap == &g.capBottom ? "bottom" : "top") << " cap is not of type F_{c-pi/2} at "
         << offending << " node(s): " << bad.str();
      if (opts.capCheck == CapCheck::Error) throw PreconditionError(os.str());
      sol.warnings.push_back(os.str());
    }
  }

  const SlopeRange range = opts.tauRange ? *opts.tauRange : boundary_slope_range(g);
  if (!(range.hi > range.lo)) throw DomainError("solve_dsl: empty tau range");
  sol.tauGrid = uniform_samples(range.lo, range.hi, opts.tauSamples);

  SampledFamily h;
  h.grid = sol.tauGrid;
  h.spaceShape = g.capBottom.counts();
  h.values.resize(opts.tauSamples, g.capBottom.size());
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(opts.tauSamples));
  auto work = [&](int worker, int workers) {
    for (Eigen::Index j = worker; j < opts.tauSamples; j += workers) {
      try {
        h.values.row(j) = envelope(obstacle_for_tau(g, sol.tauGrid(j)), opts.sweep).values.transpose();
      } catch (...) {
        failures[static_cast<std::size_t>(j)] = std::current_exception();
      }
    }
  };
  const int workers = std::max(1, opts.threads);
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
  }
  for (Eigen::Index j = 0; j < opts.tauSamples; ++j) {
    if (!failures[static_cast<std::size_t>(j)]) continue;
    try {
      std::rethrow_exception(failures[static_cast<std::size_t>(j)]);
    } catch (const ConvergenceError& e) {
      std::ostringstream os;
      os.precision(17);
      os << "tau = " << sol.tauGrid(j) << ": " << e.what();
      throw ConvergenceError(os.str(), e.residual());
    }
  }

  sol.u = inverse_partial_legendre(h, uniform_samples(0.0, 1.0, opts.timeSamples));

  // Boundary match against caps and lateral data.
  Tally match;
  const Eigen::Index last = opts.timeSamples - 1;
  for (Eigen::Index s = 0; s < g.capBottom.size(); ++s) {
    const double e0 = std::abs(sol.u.values(0, s) - g.capBottom.values(s));
    const double e1 = std::abs(sol.u.values(last, s) - g.capTop.values(s));
    match.add(std::max(e0, e1), true, false, "t=0/1," + describe_node(g.capBottom, s));
  }
  const auto& b = g.capBottom.boundaryIndices();
  for (Eigen::Index k = 0; k < opts.timeSamples; ++k) {
    for (std::size_t y = 0; y < b.size(); ++y) {
      const double ref = interpolate(g.rGrid, g.lateral, static_cast<Eigen::Index>(y), sol.u.grid(k));
      std::ostringstream at;
      at << "t=" << sol.u.grid(k) << "," << describe_node(g.capBottom, b[y]);
      match.add(std::abs(sol.u.values(k, b[y]) - ref), true, false, at.str());
    }
  }
  const double boundaryTol =
      opts.boundaryFactor * (g.capBottom.spacing() + (range.hi - range.lo) / static_cast<double>(opts.tauSamples));
  CheckReport bm = match.report("boundary_match", boundaryTol, 1.0);
  bm.pass = bm.worstMargin <= boundaryTol;
  bm.passFraction = bm.pass ? 1.0 : 0.0;
  sol.diagnostics.push_back(bm);

  if (opts.runVerifiers) {
    const Phase c{g.phase, g.spaceDim()};
    sol.diagnostics.push_back(verify_time_convexity(sol.u));
    sol.diagnostics.push_back(verify_min_principle(sol.u, sol.geometry, c));
    for (auto& r : verify_angle_residual(sol.u, sol.geometry, c)) sol.diagnostics.push_back(r);
  }
  return sol;
}

InfHessian hessian_of_inf(const SpaceTimeFunction& f, const Eigen::VectorXd& x,
                          const InfHessianOptions& opts) {
  if (!(opts.t1 > opts.t0)) throw DomainError("hessian_of_inf: empty time interval");
  // Golden-section search for the minimizer in t.
  const double invPhi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = opts.t0;
  double hi = opts.t1;
  double m1 = hi - invPhi * (hi - lo);
  double m2 = lo + invPhi * (hi - lo);
  double f1 = f(m1, x);
  double f2 = f(m2, x);
  while (hi - lo > opts.searchTol) {
    if (f1 <= f2) {
      hi = m2;
      m2 = m1;
      f2 = f1;
      m1 = hi - invPhi * (hi - lo);
      f1 = f(m1, x);
    } else {
      lo = m1;
      m1 = m2;
      f1 = f2;
      m2 = lo + invPhi * (hi - lo);
      f2 = f(m2, x);
    }
  }
  const double t = 0.5 * (lo + hi);
  const double width = opts.t1 - opts.t0;
  if (t - opts.t0 <= opts.endpointTol * width || opts.t1 - t <= opts.endpointTol * width) {
    std::ostringstream os;
    os.precision(17);
    os << "hessian_of_inf: minimizer t = " << t << " lies on the interval boundary";
    throw PreconditionError(os.str());
  }

  const Eigen::Index n = x.size();
  const Eigen::Index m = n + 1;
  Eigen::VectorXd p0(m);
  p0(0) = t;
  p0.tail(n) = x;
  Eigen::VectorXd step(m);
  for (Eigen::Index i = 0; i < m; ++i) step(i) = opts.step * std::max(1.0, std::abs(p0(i)));
  auto eval = [&](const Eigen::VectorXd& p) { return f(p(0), p.tail(n)); };
  const double fc = eval(p0);
  Eigen::MatrixXd hess(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    Eigen::VectorXd pp = p0, pm = p0;
    pp(i) += step(i);
    pm(i) -= step(i);
    hess(i, i) = (eval(pp) - 2 * fc + eval(pm)) / (step(i) * step(i));
    for (Eigen::Index j = i + 1; j < m; ++j) {
      Eigen::VectorXd a = p0, b = p0, c = p0, d = p0;
      a(i) += step(i), a(j) += step(j);
      b(i) += step(i), b(j) -= step(j);
      c(i) -= step(i), c(j) += step(j);
      d(i) -= step(i), d(j) -= step(j);
      hess(i, j) = hess(j, i) = (eval(a) - eval(b) - eval(c) + eval(d)) / (4 * step(i) * step(j));
    }
  }
  if (!(hess(0, 0) > 0)) {
    throw PreconditionError("hessian_of_inf: f_tt is not positive at the minimizer");
  }
  const Eigen::VectorXd cross = hess.col(0).tail(n);
  const Eigen::MatrixXd schur =
      hess.bottomRightCorner(n, n) - cross * cross.transpose() / hess(0, 0);
  return {t, SymMatrixd(hess), SymMatrixd(schur)};
}

InfHessian hessian_of_inf(const SampledFamily& f, const SpaceGrid& geometry, Eigen::Index node) {
  check_family_geometry(f, geometry);
  if (geometry.isBoundary(node)) throw DomainError("hessian_of_inf: node must be interior");
  const Eigen::Index last = f.samples() - 1;
  Eigen::Index k = 0;
  f.values.col(node).minCoeff(&k);
  if (k == 0 || k == last) {
    throw PreconditionError("hessian_of_inf: discrete minimizer lies on the time boundary");
  }
  const double um = f.values(k - 1, node);
  const double uc = f.values(k, node);
  const double up = f.values(k + 1, node);
  const double curvature = um - 2 * uc + up;
  if (!(curvature > 0)) {
    throw PreconditionError("hessian_of_inf: f_tt is not positive at the minimizer");
  }
  // Vertex of the parabola through the three samples, as a fraction of a step.
  const double offset = 0.5 * (um - up) / curvature;
  const double dt = offset >= 0 ? f.grid(k + 1) - f.grid(k) : f.grid(k) - f.grid(k - 1);
  const double tMin = f.grid(k) + offset * dt;

  Eigen::MatrixXd hess = spacetime_hessian(f, geometry, k, node).matrix();
  const Eigen::Index other = offset >= 0 ? k + 1 : k - 1;
  if (other >= 1 && other <= last - 1) {
    const double w = std::abs(offset);
    hess = (1 - w) * hess + w * spacetime_hessian(f, geometry, other, node).matrix();
  }
  if (!(hess(0, 0) > 0)) {
    throw PreconditionError("hessian_of_inf: f_tt is not positive at the minimizer");
  }
  const Eigen::Index n = geometry.dim();
  const Eigen::VectorXd cross = hess.col(0).tail(n);
  const Eigen::MatrixXd schur =
      hess.bottomRightCorner(n, n) - cross * cross.transpose() / hess(0, 0);
  return {tMin, SymMatrixd(hess), SymMatrixd(schur)};
}

CheckReport verify_time_convexity(const SampledFamily& u) {
  u.validate();
  if (u.samples() < 3) throw DomainError("verify_time_convexity: need at least 3 time samples");
  const double tol = 1e-8 * (1.0 + u.values.cwiseAbs().maxCoeff());
  Tally tally;
  for (Eigen::Index s = 0; s < u.spaceSize(); ++s) {
    for (Eigen::Index k = 1; k + 1 < u.samples(); ++k) {
      const double dm = u.grid(k) - u.grid(k - 1);
      const double dp = u.grid(k + 1) - u.grid(k);
      const double second = ((u.values(k + 1, s) - u.values(k, s)) / dp -
                             (u.values(k, s) - u.values(k - 1, s)) / dm) *
                            0.5 * (dp + dm);
      std::ostringstream at;
      at << "t=" << u.grid(k) << ",node=" << s;
      tally.add(second, second >= -tol, true, at.str());
    }
  }
  CheckReport r = tally.report("time_convexity", tol, 1.0);
  r.pass = tally.good == tally.count;
  return r;
}

CheckReport verify_min_principle(const SampledFamily& u, const SpaceGrid& geometry,
                                 const Phase& c, double tol, double requiredFraction) {
  check_family_geometry(u, geometry);
  c.requireSpaceTime();
  if (c.spaceDim != geometry.dim()) throw DomainError("verify_min_principle: dimension mismatch");
  const double a = c.value - kPi / 2;
  const double h = geometry.spacing();

  Eigen::VectorXd v(geometry.size());
  std::vector<Eigen::Index> argmin(static_cast<std::size_t>(geometry.size()));
  for (Eigen::Index s = 0; s < geometry.size(); ++s) {
    Eigen::Index k = 0;
    v(s) = u.values.col(s).minCoeff(&k);
    argmin[static_cast<std::size_t>(s)] = k;
  }
  const SpaceGrid vg = geometry.withValues(v);
  std::vector<SymMatrixd> hess(static_cast<std::size_t>(geometry.size()));
  for (Eigen::Index s : geometry.interiorIndices()) {
    hess[static_cast<std::size_t>(s)] = discrete_hessian(vg, s);
  }

  Tally tally;
  for (Eigen::Index s : geometry.interiorIndices()) {
    // v is locally a single time slice (same discrete minimizer on the whole
    // stencil) and its second differences do not jump.
    bool stable = true;
    for (Eigen::Index nb : stencil_neighbors(geometry, s)) {
      if (argmin[static_cast<std::size_t>(nb)] != argmin[static_cast<std::size_t>(s)]) {
        stable = false;
        break;
      }
      if (!geometry.isBoundary(nb) &&
          max_abs_diff(hess[static_cast<std::size_t>(s)], hess[static_cast<std::size_t>(nb)]) >=
              10 * h) {
        stable = false;
        break;
      }
    }
    if (!stable) continue;
    const double margin = lifted_angle(hess[static_cast<std::size_t>(s)]) - a;
    tally.add(margin, margin >= -tol, true, describe_node(geometry, s));
  }
  return tally.report("min_principle", tol, requiredFraction);
}

std::vector<CheckReport> verify_angle_residual(const SampledFamily& u, const SpaceGrid& geometry,
                                               const Phase& c, double tol,
                                               double requiredFraction) {
  check_family_geometry(u, geometry);
  c.requireSpaceTime();
  if (c.spaceDim != geometry.dim()) throw DomainError("verify_angle_residual: dimension mismatch");
  const Eigen::Index nt = u.samples();
  if (nt < 3) throw DomainError("verify_angle_residual: need at least 3 time samples");
  const double h = geometry.spacing();
  const auto& interior = geometry.interiorIndices();

  // Space-time Hessians at every interior node; rows are time indices 1..nt-2.
  std::vector<std::vector<SymMatrixd>> hess(static_cast<std::size_t>(nt));
  std::vector<char> isInterior(static_cast<std::size_t>(geometry.size()), 0);
  for (Eigen::Index s : interior) isInterior[static_cast<std::size_t>(s)] = 1;
  for (Eigen::Index k = 1; k + 1 < nt; ++k) {
    auto& row = hess[static_cast<std::size_t>(k)];
    row.resize(static_cast<std::size_t>(geometry.size()));
    for (Eigen::Index s : interior) row[static_cast<std::size_t>(s)] = spacetime_hessian(u, geometry, k, s);
  }

  Tally residual;
  for (Eigen::Index k = 1; k + 1 < nt; ++k) {
    const double dt = std::max(u.grid(k + 1) - u.grid(k), u.grid(k) - u.grid(k - 1));
    const double jump = 10 * std::max(h, dt);
    for (Eigen::Index s : interior) {
      const SymMatrixd& here = hess[static_cast<std::size_t>(k)][static_cast<std::size_t>(s)];
      bool stable = true;
      for (Eigen::Index kk : {k - 1, k + 1}) {
        if (kk < 1 || kk + 1 >= nt) continue;
        if (max_abs_diff(here, hess[static_cast<std::size_t>(kk)][static_cast<std::size_t>(s)]) >= jump) {
          stable = false;
        }
      }
      for (Eigen::Index nb : stencil_neighbors(geometry, s)) {
        if (!stable) break;
        if (!isInterior[static_cast<std::size_t>(nb)]) continue;
        if (max_abs_diff(here, hess[static_cast<std::size_t>(k)][static_cast<std::size_t>(nb)]) >= jump) {
          stable = false;
        }
      }
      if (!stable) continue;
      const double r = std::abs(spacetime_lifted_angle(here).angle - c.value);
      std::ostringstream at;
      at << "t=" << u.grid(k) << "," << describe_node(geometry, s);
      residual.add(r, r <= tol, false, at.str());
    }
  }

  Tally relation;
  for (Eigen::Index s : interior) {
    Eigen::Index k = 0;
    u.values.col(s).minCoeff(&k);
    if (k == 0 || k + 1 >= nt) continue;
    if (!(hess[static_cast<std::size_t>(k)][static_cast<std::size_t>(s)](0, 0) > 10 * h)) continue;
    InfHessian ih;
    try {
      ih = hessian_of_inf(u, geometry, s);
    } catch (const PreconditionError&) {
      continue;
    }
    const double r = std::abs(lifted_angle(ih.schur) -
                              (spacetime_lifted_angle(ih.full).angle - kPi / 2));
    relation.add(r, r <= tol, false, describe_node(geometry, s));
  }

  return {residual.report("angle_residual", tol, requiredFraction),
          relation.report("inf_hessian_relation", tol, requiredFraction)};
}

}  // namespace slag
