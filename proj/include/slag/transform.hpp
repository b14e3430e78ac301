#pragma once

// Partial Legendre transforms in the single time variable.
//
//   f*(τ, x) = min_t [ f(t, x) - τ t ]      (negative of the usual transform)
//   g*(t, x) = max_τ [ g(τ, x) + τ t ]
//
// For f convex in t the pair is involutive: f** = f.

#include "slag/grid.hpp"

namespace slag {

/// f*(τ, x) on `tauGrid` (strictly increasing) via the lower hull in t.
SampledFamily partial_legendre(const SampledFamily& f, const Eigen::VectorXd& tauGrid);
/// O(K |τ|) reference implementation of partial_legendre.
SampledFamily partial_legendre_naive(const SampledFamily& f, const Eigen::VectorXd& tauGrid);

/// g*(t, x) on `tGrid` (strictly increasing) via the upper hull in τ.
SampledFamily inverse_partial_legendre(const SampledFamily& g, const Eigen::VectorXd& tGrid);
SampledFamily inverse_partial_legendre_naive(const SampledFamily& g,
                                             const Eigen::VectorXd& tGrid);

struct SlopeRange {
  double lo;
  double hi;
};

/// Extreme one-sided difference quotients in the parameter over all space
/// points, widened on each side by 5% of max(hi - lo, 1).
SlopeRange slope_range(const SampledFamily& f);

/// Convex minorant in the parameter of every space column (hull projection).
SampledFamily convex_minorant(const SampledFamily& f);

}  // namespace slag
