#include "slag/solvers.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "slag/angles.hpp"
#include "slag/hull.hpp"

namespace slag {

namespace {

constexpr double kPi = std::numbers::pi;

// θ̃ of [[xx, xy], [xy, yy]].
double angle_2x2(double xx, double xy, double yy) {
  const double m = 0.5 * (xx + yy);
  const double d = std::hypot(0.5 * (xx - yy), xy);
  return std::atan(m + d) + std::atan(m - d);
}

struct Stencil2d {
  Eigen::Index ny;
  double h;

  double hxx(const Eigen::VectorXd& w, Eigen::Index s) const {
    return (w(s + ny) - 2 * w(s) + w(s - ny)) / (h * h);
  }
  double hyy(const Eigen::VectorXd& w, Eigen::Index s) const {
    return (w(s + 1) - 2 * w(s) + w(s - 1)) / (h * h);
  }
  double hxy(const Eigen::VectorXd& w, Eigen::Index s) const {
    return (w(s + ny + 1) - w(s + ny - 1) - w(s - ny + 1) + w(s - ny - 1)) / (4 * h * h);
  }
};

// Closed-form node update for n = 2: with r = tan(a - π/2) ≥ 0 the condition
// θ̃(H) ≥ a reads λ_i > r and (λ1 - r)(λ2 - r) ≥ 1 + r². Own-node Hessian is
// B - (2w/h²) I, so the largest admissible w solves a quadratic.
struct LocalSolve2d {
  double h2;
  double r;
  double rhoH4;

  LocalSolve2d(double h, double a) : h2(h * h), r(std::tan(a - kPi / 2)) {
    rhoH4 = (1 + r * r) * h2 * h2;
  }

  double operator()(double sx, double sy, double cross) const {
    const double half = 0.5 * (sx - sy);
    const double quarter = 0.25 * cross;
    return 0.25 * (sx + sy) - 0.5 * std::sqrt(half * half + quarter * quarter + rhoH4) -
           0.5 * r * h2;
  }
};

Eigen::VectorXd initial_from_caps(const SpaceGrid& g, const Eigen::VectorXd& caps) {
  double top = -std::numeric_limits<double>::infinity();
  for (Eigen::Index s : g.boundaryIndices()) top = std::max(top, caps(s));
  Eigen::VectorXd w = caps;
  for (Eigen::Index s : g.interiorIndices()) w(s) = std::min(caps(s), top);
  return w;
}

[[noreturn]] void not_converged(const char* who, long sweeps, double change) {
  std::ostringstream os;
  os << who << ": no convergence after " << sweeps << " sweeps (last sup change " << change
     << ")";
  throw ConvergenceError(os.str(), change);
}

SpaceGrid envelope_1d(const EnvelopeProblem& p) {
  const SpaceGrid& g = p.obstacle;
  const Eigen::VectorXd caps = p.caps();
  const double kappa = std::tan(p.phase);
  const double center = 0.5 * (g.lower()[0] + g.upper()[0]);
  Eigen::VectorXd xs(g.size());
  Eigen::VectorXd shift(g.size());
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    xs(i) = g.coord(i, 0);
    const double x = xs(i) - center;
    shift(i) = 0.5 * kappa * x * x;
  }
  Eigen::VectorXd w = lower_hull_values(xs, caps - shift) + shift;
  return g.withValues(w.cwiseMin(caps));
}

SpaceGrid envelope_2d(const EnvelopeProblem& p, const SweepOptions& opts) {
  const SpaceGrid& g = p.obstacle;
  const Eigen::VectorXd caps = p.caps();
  const Eigen::Index nx = g.count(0);
  const Eigen::Index ny = g.count(1);
  const LocalSolve2d solve(g.spacing(), p.phase);
  const double nmax = static_cast<double>(std::max(nx, ny) - 1);
  double omega = opts.relaxation > 0 ? opts.relaxation : 2.0 / (1.0 + std::sin(kPi / nmax));

  Eigen::VectorXd w = initial_from_caps(g, caps);
  double best = std::numeric_limits<double>::infinity();
  long sinceBest = 0;
  for (long sweep = 1; sweep <= opts.maxSweeps; ++sweep) {
    double change = 0.0;
    for (Eigen::Index i = 1; i + 1 < nx; ++i) {
      for (Eigen::Index j = 1; j + 1 < ny; ++j) {
        const Eigen::Index s = i * ny + j;
        const double target = solve(w(s + ny) + w(s - ny), w(s + 1) + w(s - 1),
                                    w(s + ny + 1) - w(s + ny - 1) - w(s - ny + 1) +
                                        w(s - ny - 1));
        const double next = std::min(caps(s), w(s) + omega * (target - w(s)));
        change = std::max(change, std::abs(next - w(s)));
        w(s) = next;
      }
    }
    if (!std::isfinite(change)) not_converged("envelope", sweep, change);
    if (change < opts.tol) return g.withValues(w);
    // Over-relaxation of the nonlinear update can stall on strongly
    // anisotropic Hessians; fall back towards plain Gauss–Seidel.
    if (change < best) {
      best = change;
      sinceBest = 0;
    } else if (++sinceBest > 200 && omega > 1.0) {
      omega = 1.0 + 0.5 * (omega - 1.0);
      best = change;
      sinceBest = 0;
    }
  }
  not_converged("envelope", opts.maxSweeps, best);
}

}  // namespace

void require_envelope_phase(double a, int n) {
  if (n < 1 || n > 2) throw DomainError("only space dimensions 1 and 2 are supported");
  if (!(a >= (n - 1) * kPi / 2 && a < n * kPi / 2)) {
    std::ostringstream os;
    os.precision(17);
    os << "phase a = " << a << " outside [(n-1) pi/2, n pi/2) for n = " << n;
    throw DomainError(os.str());
  }
}

void EnvelopeProblem::validate() const {
  require_envelope_phase(phase, obstacle.dim());
  if (!obstacle.values.allFinite()) throw DomainError("envelope: obstacle must be finite");
  if (boundaryTrace.size() != static_cast<Eigen::Index>(obstacle.boundaryIndices().size())) {
    throw DomainError("envelope: boundary trace size does not match boundary node count");
  }
  if (!boundaryTrace.allFinite()) throw DomainError("envelope: boundary trace must be finite");
}

Eigen::VectorXd EnvelopeProblem::caps() const {
  Eigen::VectorXd c = obstacle.values;
  const auto& b = obstacle.boundaryIndices();
  for (std::size_t k = 0; k < b.size(); ++k) {
    c(b[k]) = std::min(c(b[k]), boundaryTrace(static_cast<Eigen::Index>(k)));
  }
  return c;
}

Eigen::VectorXd convex_envelope_1d(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys) {
  if (xs.size() < 2 || xs.size() != ys.size()) {
    throw DomainError("convex_envelope_1d: need at least two points with matching arrays");
  }
  for (Eigen::Index k = 1; k < xs.size(); ++k) {
    if (!(xs(k) > xs(k - 1))) throw DomainError("convex_envelope_1d: xs must be increasing");
  }
  return lower_hull_values(xs, ys).cwiseMin(ys);
}

SpaceGrid envelope(const EnvelopeProblem& p, const SweepOptions& opts) {
  p.validate();
  return p.obstacle.dim() == 1 ? envelope_1d(p) : envelope_2d(p, opts);
}

SpaceGrid envelope_oracle(const EnvelopeProblem& p, const SweepOptions& opts) {
  p.validate();
  const SpaceGrid& g = p.obstacle;
  const Eigen::VectorXd caps = p.caps();
  const double h = g.spacing();
  Eigen::VectorXd w = caps;

  if (g.dim() == 1) {
    // Projected SOR on w_i <- min(cap_i, (w_{i-1} + w_{i+1})/2 - tan(a) h²/2).
    const Eigen::Index n = g.size();
    const double drop = 0.5 * std::tan(p.phase) * h * h;
    const double omega = opts.relaxation > 0
                             ? opts.relaxation
                             : 2.0 / (1.0 + std::sin(kPi / static_cast<double>(n - 1)));
    for (long sweep = 1; sweep <= opts.maxSweeps; ++sweep) {
      double change = 0.0;
      for (Eigen::Index i = 1; i + 1 < n; ++i) {
        const double target = 0.5 * (w(i - 1) + w(i + 1)) - drop;
        const double next = std::min(caps(i), (1 - omega) * w(i) + omega * target);
        change = std::max(change, std::abs(next - w(i)));
        w(i) = next;
      }
      if (change < opts.tol) return g.withValues(w);
    }
    not_converged("envelope_oracle", opts.maxSweeps, 0.0);
  }

  // n = 2: plain Gauss–Seidel, red-black ordering, started from the obstacle.
  const Eigen::Index nx = g.count(0);
  const Eigen::Index ny = g.count(1);
  const LocalSolve2d solve(h, p.phase);
  w = initial_from_caps(g, caps);
  double change = 0.0;
  for (long sweep = 1; sweep <= opts.maxSweeps; ++sweep) {
    change = 0.0;
    for (int color = 0; color < 2; ++color) {
      for (Eigen::Index i = 1; i + 1 < nx; ++i) {
        for (Eigen::Index j = 1 + (i + 1 + color) % 2; j + 1 < ny; j += 2) {
          const Eigen::Index s = i * ny + j;
          const double next = std::min(
              caps(s), solve(w(s + ny) + w(s - ny), w(s + 1) + w(s - 1),
                             w(s + ny + 1) - w(s + ny - 1) - w(s - ny + 1) + w(s - ny - 1)));
          change = std::max(change, std::abs(next - w(s)));
          w(s) = next;
        }
      }
    }
    if (change < opts.tol) return g.withValues(w);
  }
  not_converged("envelope_oracle", opts.maxSweeps, change);
}

SymMatrixd discrete_hessian(const SpaceGrid& w, Eigen::Index node) {
  if (w.isBoundary(node)) throw DomainError("discrete_hessian: node must be interior");
  const double h = w.spacing();
  if (w.dim() == 1) {
    Eigen::Matrix<double, 1, 1> m;
    m(0, 0) = (w.values(node + 1) - 2 * w.values(node) + w.values(node - 1)) / (h * h);
    return SymMatrixd(m);
  }
  const Stencil2d st{w.count(1), h};
  Eigen::Matrix2d m;
  m(0, 0) = st.hxx(w.values, node);
  m(1, 1) = st.hyy(w.values, node);
  m(0, 1) = m(1, 0) = st.hxy(w.values, node);
  return SymMatrixd(m);
}

Eigen::VectorXd membership_margins(const SpaceGrid& w, double a) {
  const auto& interior = w.interiorIndices();
  Eigen::VectorXd out(static_cast<Eigen::Index>(interior.size()));
  for (std::size_t k = 0; k < interior.size(); ++k) {
    out(static_cast<Eigen::Index>(k)) = lifted_angle(discrete_hessian(w, interior[k])) - a;
  }
  return out;
}

namespace detail {
double local_solve_2d(double sx, double sy, double cross, double h, double a) {
  return LocalSolve2d(h, a)(sx, sy, cross);
}
}  // namespace detail

namespace {

// Angle residual θ̃(H_h u) - a at interior nodes of a 2-D grid.
Eigen::VectorXd residual_2d(const SpaceGrid& g, const Eigen::VectorXd& u, double a,
                            const std::vector<Eigen::Index>& interior) {
  const Stencil2d st{g.count(1), g.spacing()};
  Eigen::VectorXd r(static_cast<Eigen::Index>(interior.size()));
  for (std::size_t k = 0; k < interior.size(); ++k) {
    const Eigen::Index s = interior[k];
    r(static_cast<Eigen::Index>(k)) = angle_2x2(st.hxx(u, s), st.hxy(u, s), st.hyy(u, s)) - a;
  }
  return r;
}

Eigen::VectorXd poisson_start(const SpaceGrid& g, const Eigen::VectorXd& boundaryValues,
                              double laplacian) {
  const Eigen::Index ny = g.count(1);
  const double h2 = g.spacing() * g.spacing();
  const auto& interior = g.interiorIndices();
  std::vector<Eigen::Index> slot(static_cast<std::size_t>(g.size()), -1);
  for (std::size_t k = 0; k < interior.size(); ++k) {
    slot[static_cast<std::size_t>(interior[k])] = static_cast<Eigen::Index>(k);
  }
  const auto m = static_cast<Eigen::Index>(interior.size());
  std::vector<Eigen::Triplet<double>> trip;
  Eigen::VectorXd rhs = Eigen::VectorXd::Constant(m, laplacian * h2);
  for (Eigen::Index k = 0; k < m; ++k) {
    const Eigen::Index s = interior[static_cast<std::size_t>(k)];
    trip.emplace_back(k, k, -4.0);
    for (Eigen::Index nb : {s + ny, s - ny, s + 1, s - 1}) {
      const Eigen::Index col = slot[static_cast<std::size_t>(nb)];
      if (col >= 0) {
        trip.emplace_back(k, col, 1.0);
      } else {
        rhs(k) -= boundaryValues(nb);
      }
    }
  }
  Eigen::SparseMatrix<double> lap(m, m);
  lap.setFromTriplets(trip.begin(), trip.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(lap);
  if (lu.info() != Eigen::Success) throw NumericalError("dirichlet: Laplacian factorization failed");
  const Eigen::VectorXd x = lu.solve(rhs);
  Eigen::VectorXd u = boundaryValues;
  for (Eigen::Index k = 0; k < m; ++k) u(interior[static_cast<std::size_t>(k)]) = x(k);
  return u;
}

SpaceGrid dirichlet_2d(const SpaceGrid& domain, const Eigen::VectorXd& full, double a,
                       const NewtonOptions& opts) {
  const Eigen::Index ny = domain.count(1);
  const double h = domain.spacing();
  const double h2 = h * h;
  const auto& interior = domain.interiorIndices();
  const auto m = static_cast<Eigen::Index>(interior.size());
  std::vector<Eigen::Index> slot(static_cast<std::size_t>(domain.size()), -1);
  for (Eigen::Index k = 0; k < m; ++k) slot[static_cast<std::size_t>(interior[k])] = k;

  Eigen::VectorXd u = poisson_start(domain, full, 2.0 * std::tan(0.5 * a));
  Eigen::VectorXd res = residual_2d(domain, u, a, interior);
  double norm = res.lpNorm<Eigen::Infinity>();
  const Stencil2d st{ny, h};

  for (int it = 0; it < opts.maxIterations; ++it) {
    if (norm <= 1e-14) break;
    // Jacobian of θ̃(H) is tr((I + H²)^{-1} dH).
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(9 * m));
    for (Eigen::Index k = 0; k < m; ++k) {
      const Eigen::Index s = interior[static_cast<std::size_t>(k)];
      Eigen::Matrix2d hess;
      hess << st.hxx(u, s), st.hxy(u, s), st.hxy(u, s), st.hyy(u, s);
      const Eigen::Matrix2d mm = (Eigen::Matrix2d::Identity() + hess * hess).inverse();
      const double cxx = mm(0, 0) / h2;
      const double cyy = mm(1, 1) / h2;
      const double cxy = 2.0 * mm(0, 1) / (4.0 * h2);
      auto add = [&](Eigen::Index node, double v) {
        const Eigen::Index col = slot[static_cast<std::size_t>(node)];
        if (col >= 0) trip.emplace_back(k, col, v);
      };
      add(s, -2.0 * (cxx + cyy));
      add(s + ny, cxx);
      add(s - ny, cxx);
      add(s + 1, cyy);
      add(s - 1, cyy);
      add(s + ny + 1, cxy);
      add(s - ny - 1, cxy);
      add(s + ny - 1, -cxy);
      add(s - ny + 1, -cxy);
    }
    Eigen::SparseMatrix<double> jac(m, m);
    jac.setFromTriplets(trip.begin(), trip.end());
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(jac);
    if (lu.info() != Eigen::Success) {
      throw ConvergenceError("dirichlet: singular Newton Jacobian", norm);
    }
    const Eigen::VectorXd step = lu.solve(-res);

    double alpha = 1.0;
    Eigen::VectorXd trial = u;
    Eigen::VectorXd trialRes;
    double trialNorm = norm;
    for (; alpha >= 1.0 / 1024; alpha *= 0.5) {
      trial = u;
      for (Eigen::Index k = 0; k < m; ++k) trial(interior[static_cast<std::size_t>(k)]) += alpha * step(k);
      trialRes = residual_2d(domain, trial, a, interior);
      trialNorm = trialRes.lpNorm<Eigen::Infinity>();
      if (trialNorm <= (1 - 1e-4 * alpha) * norm) break;
    }
    if (!(trialNorm < norm)) {
      // Stagnation is only an error before the target is met.
      if (norm <= opts.tol) break;
      std::ostringstream os;
      os << "dirichlet: Newton stagnated at residual " << norm;
      throw ConvergenceError(os.str(), norm);
    }
    const bool polishing = norm <= opts.tol;
    u = trial;
    res = trialRes;
    const double previous = norm;
    norm = trialNorm;
    if (polishing && norm > 0.5 * previous) break;
  }
  if (!(norm <= opts.tol)) {
    std::ostringstream os;
    os << "dirichlet: residual " << norm << " above target after " << opts.maxIterations
       << " Newton iterations";
    throw ConvergenceError(os.str(), norm);
  }
  return domain.withValues(u);
}

}  // namespace

SpaceGrid dirichlet(const SpaceGrid& domain, const Eigen::VectorXd& boundaryTrace, double a,
                    const NewtonOptions& opts) {
  require_envelope_phase(a, domain.dim());
  const auto& b = domain.boundaryIndices();
  if (boundaryTrace.size() != static_cast<Eigen::Index>(b.size())) {
    throw DomainError("dirichlet: boundary trace size does not match boundary node count");
  }
  if (!boundaryTrace.allFinite()) throw DomainError("dirichlet: boundary trace must be finite");
  Eigen::VectorXd full = Eigen::VectorXd::Zero(domain.size());
  for (std::size_t k = 0; k < b.size(); ++k) full(b[k]) = boundaryTrace(static_cast<Eigen::Index>(k));

  if (domain.dim() == 2) return dirichlet_2d(domain, full, a, opts);

  // u = tan(a) x²/2 plus the chord matching the two boundary values.
  const Eigen::Index n = domain.size();
  const double x0 = domain.lower()[0];
  const double x1 = domain.upper()[0];
  const double center = 0.5 * (x0 + x1);
  const double kappa = std::tan(a);
  auto q = [&](double x) { return 0.5 * kappa * (x - center) * (x - center); };
  const double f0 = full(0) - q(x0);
  const double f1 = full(n - 1) - q(x1);
  Eigen::VectorXd u(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = domain.coord(i, 0);
    u(i) = q(x) + f0 + (f1 - f0) * (x - x0) / (x1 - x0);
  }
  u(0) = full(0);
  u(n - 1) = full(n - 1);
  return domain.withValues(u);
}

}  // namespace slag
