#pragma once

// Weak solutions of the degenerate special Lagrangian equation on [0,1] × D
// through the time-Legendre transform of a family of obstacle problems:
//
//   u(t, x) = max_τ [ h_τ(x) + τ t ],
//   h_τ     = P_{c-π/2}( min{g(0,·), g(1,·) - τ} ; min_r [g(r,·)|∂D - r τ] ),
//
// together with discrete verifiers for the minimum principle, convexity in
// time and the space-time angle residual.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "slag/grid.hpp"
#include "slag/solvers.hpp"
#include "slag/sym_matrix.hpp"
#include "slag/transform.hpp"

namespace slag {

/// Dirichlet data g on ∂([0,1] × D).
struct BoundaryData {
  SpaceGrid capBottom;      ///< g(0, ·) on the closed space grid
  SpaceGrid capTop;         ///< g(1, ·)
  Eigen::VectorXd rGrid;    ///< lateral time samples, strictly increasing, 0 to 1
  Eigen::MatrixXd lateral;  ///< g(r, y): rows follow rGrid, columns capBottom.boundaryIndices()
  double phase = 0.0;       ///< c

  int spaceDim() const { return capBottom.dim(); }

  /// Shapes, finiteness, phase range [nπ/2, (n+1)π/2), and corner
  /// consistency of caps with the lateral data to within `tol`.
  void validate(double tol = 1e-9) const;
};

/// Result of a discrete check. `worstMargin` is the extreme value of the
/// checked statistic (smallest margin, smallest second difference, or largest
/// residual, depending on the check).
struct CheckReport {
  std::string name;
  bool pass = true;
  double worstMargin = 0.0;
  Eigen::Index nodeCount = 0;
  double passFraction = 1.0;
  double tolerance = 0.0;
  std::string detail;  ///< location of the worst node, if any
};

enum class CapCheck { Error, Warn };

struct DslOptions {
  Eigen::Index timeSamples = 101;
  Eigen::Index tauSamples = 401;
  std::optional<SlopeRange> tauRange;  ///< derived from the boundary data when empty
  int threads = 1;
  SweepOptions sweep;
  CapCheck capCheck = CapCheck::Error;
  double capTol = 1e-9;
  double boundaryFactor = 5.0;  ///< boundary match tolerance factor on h + Δτ
  bool runVerifiers = true;
};

struct DSLSolution {
  SpaceGrid geometry;  ///< space grid of the solution
  SampledFamily u;     ///< u(t, x), rows follow u.grid (time)
  Eigen::VectorXd tauGrid;
  std::vector<CheckReport> diagnostics;
  std::vector<std::string> warnings;
};

/// Obstacle problem for one dual slope τ.
EnvelopeProblem obstacle_for_tau(const BoundaryData& g, double tau);

/// Slope range covering the time difference quotients of the caps and of the
/// lateral data.
SlopeRange boundary_slope_range(const BoundaryData& g);

DSLSolution solve_dsl(const BoundaryData& g, const DslOptions& opts = {});

/// Hessian data at the time-minimizer of f(·, x).
struct InfHessian {
  double tMin = 0.0;
  SymMatrixd full;   ///< space-time Hessian of f at (tMin, x), time first
  SymMatrixd schur;  ///< ∇²_x f - (∇²_tx f)^T ∇²_tx f / f_tt, the Hessian of inf_t f
};

using SpaceTimeFunction = std::function<double(double t, const Eigen::VectorXd& x)>;

struct InfHessianOptions {
  double t0 = 0.0;
  double t1 = 1.0;
  double searchTol = 1e-12;
  double step = 1e-4;         ///< central-difference step, relative to max(1, |coordinate|)
  double endpointTol = 1e-6;  ///< minimizers this close (relative) to an endpoint are rejected
};

InfHessian hessian_of_inf(const SpaceTimeFunction& f, const Eigen::VectorXd& x,
                          const InfHessianOptions& opts = {});

/// Grid version: discrete minimizer in t with parabolic refinement; the
/// finite-difference Hessian is interpolated to the refined time.
InfHessian hessian_of_inf(const SampledFamily& f, const SpaceGrid& geometry, Eigen::Index node);

CheckReport verify_time_convexity(const SampledFamily& u);

/// v(x) = min_t u(t, x) must be of type F_{c-π/2}: margin θ̃(H_h v) - (c - π/2)
/// at stable interior nodes.
CheckReport verify_min_principle(const SampledFamily& u, const SpaceGrid& geometry,
                                 const Phase& c, double tol = 1e-6,
                                 double requiredFraction = 0.99);

/// |Θ̃(H_h u) - c| at stable interior space-time nodes ("angle_residual"),
/// plus the relation θ̃(Hess inf_t u) = Θ̃(Hess u) - π/2 at discrete time
/// minimizers with u_tt > 10 h ("inf_hessian_relation").
std::vector<CheckReport> verify_angle_residual(const SampledFamily& u, const SpaceGrid& geometry,
                                               const Phase& c, double tol = 1e-3,
                                               double requiredFraction = 0.95);

}  // namespace slag
