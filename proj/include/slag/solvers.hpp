#pragma once

// Obstacle (envelope) and Dirichlet solvers for the space subequation F_a,
// a ∈ [(n-1)π/2, nπ/2), on uniform grids with n ∈ {1, 2}.
//
// Discrete Hessian stencil (shared by solvers and membership checks):
//   H_xx = (w[i+1,j] - 2w[i,j] + w[i-1,j]) / h²          (same for yy)
//   H_xy = (w[i+1,j+1] - w[i+1,j-1] - w[i-1,j+1] + w[i-1,j-1]) / (4h²)

#include "slag/grid.hpp"
#include "slag/sym_matrix.hpp"

namespace slag {

/// Obstacle problem P(v; f): the largest discrete F_a-subsolution w with
/// w ≤ v on the grid and w ≤ f on boundary nodes.
struct EnvelopeProblem {
  SpaceGrid obstacle;             ///< v, boundary nodes included
  Eigen::VectorXd boundaryTrace;  ///< f, ordered as obstacle.boundaryIndices()
  double phase = 0.0;             ///< a

  /// Throws DomainError on non-finite data or a phase outside the range.
  void validate() const;
  /// v with boundary nodes replaced by min(v, f).
  Eigen::VectorXd caps() const;
};

struct SweepOptions {
  double tol = 1e-12;        ///< stop when the sup-norm change of a sweep drops below
  long maxSweeps = 100000;
  double relaxation = 0.0;   ///< 0 selects the default for the solver
};

struct NewtonOptions {
  double tol = 1e-6;         ///< sup-norm angle residual at interior nodes
  int maxIterations = 100;
};

/// Throws DomainError unless a ∈ [(n-1)π/2, nπ/2) and n ∈ {1, 2}.
void require_envelope_phase(double a, int n);

/// Lower convex hull of (xs, ys) evaluated at xs; never exceeds ys.
Eigen::VectorXd convex_envelope_1d(const Eigen::VectorXd& xs, const Eigen::VectorXd& ys);

/// P(v; f). n = 1: exact shifted-hull construction. n = 2: over-relaxed
/// nonlinear Gauss–Seidel with node-local closed-form solves.
SpaceGrid envelope(const EnvelopeProblem& p, const SweepOptions& opts = {});

/// Reference iteration for P(v; f): projected node-local updates started from
/// the obstacle, run until the sup change falls below opts.tol.
SpaceGrid envelope_oracle(const EnvelopeProblem& p, const SweepOptions& opts = {});

/// F_a-harmonic function with boundary values f (ordered as boundaryIndices()).
SpaceGrid dirichlet(const SpaceGrid& domain, const Eigen::VectorXd& boundaryTrace, double a,
                    const NewtonOptions& opts = {});

/// Discrete Hessian at an interior node.
SymMatrixd discrete_hessian(const SpaceGrid& w, Eigen::Index node);

/// θ̃(H_h w) - a at every interior node, ordered as w.interiorIndices().
Eigen::VectorXd membership_margins(const SpaceGrid& w, double a);

namespace detail {
/// Largest value of w[i,j] for which the node's own discrete Hessian satisfies
/// θ̃ ≥ a, a ∈ [π/2, π), given neighbor sums sx, sy and the cross difference
/// w[i+1,j+1] - w[i+1,j-1] - w[i-1,j+1] + w[i-1,j-1].
double local_solve_2d(double sx, double sy, double cross, double h, double a);
}  // namespace detail

}  // namespace slag
