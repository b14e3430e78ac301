#include "slag/transform.hpp"

#include <algorithm>
#include <limits>

#include "slag/hull.hpp"

namespace slag {

namespace {

void check_query_grid(const Eigen::VectorXd& grid, const char* who) {
  if (grid.size() == 0) throw DomainError(std::string(who) + ": empty output grid");
  if (!grid.allFinite()) throw DomainError(std::string(who) + ": non-finite output grid");
  for (Eigen::Index k = 1; k < grid.size(); ++k) {
    if (!(grid(k) > grid(k - 1))) {
      throw DomainError(std::string(who) + ": output grid must be strictly increasing");
    }
  }
}

SampledFamily with_grid(const SampledFamily& like, const Eigen::VectorXd& grid) {
  SampledFamily out;
  out.grid = grid;
  out.spaceShape = like.spaceShape;
  out.values.resize(grid.size(), like.spaceSize());
  return out;
}

}  // namespace

SampledFamily partial_legendre(const SampledFamily& f, const Eigen::VectorXd& tauGrid) {
  f.validate();
  check_query_grid(tauGrid, "partial_legendre");
  SampledFamily out = with_grid(f, tauGrid);
  for (Eigen::Index s = 0; s < f.spaceSize(); ++s) {
    out.values.col(s) = min_affine(f.grid, f.values.col(s), tauGrid);
  }
  return out;
}

SampledFamily partial_legendre_naive(const SampledFamily& f, const Eigen::VectorXd& tauGrid) {
  f.validate();
  check_query_grid(tauGrid, "partial_legendre_naive");
  SampledFamily out = with_grid(f, tauGrid);
  for (Eigen::Index s = 0; s < f.spaceSize(); ++s) {
    for (Eigen::Index j = 0; j < tauGrid.size(); ++j) {
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index k = 0; k < f.samples(); ++k) {
        best = std::min(best, f.values(k, s) - tauGrid(j) * f.grid(k));
      }
      out.values(j, s) = best;
    }
  }
  return out;
}

SampledFamily inverse_partial_legendre(const SampledFamily& g, const Eigen::VectorXd& tGrid) {
  g.validate();
  check_query_grid(tGrid, "inverse_partial_legendre");
  SampledFamily out = with_grid(g, tGrid);
  for (Eigen::Index s = 0; s < g.spaceSize(); ++s) {
    const Eigen::VectorXd negated = -g.values.col(s);
    out.values.col(s) = -min_affine(g.grid, negated, tGrid);
  }
  return out;
}

SampledFamily inverse_partial_legendre_naive(const SampledFamily& g,
                                             const Eigen::VectorXd& tGrid) {
  g.validate();
  check_query_grid(tGrid, "inverse_partial_legendre_naive");
  SampledFamily out = with_grid(g, tGrid);
  for (Eigen::Index s = 0; s < g.spaceSize(); ++s) {
    for (Eigen::Index k = 0; k < tGrid.size(); ++k) {
      double best = -std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < g.samples(); ++j) {
        best = std::max(best, g.values(j, s) + g.grid(j) * tGrid(k));
      }
      out.values(k, s) = best;
    }
  }
  return out;
}

SlopeRange slope_range(const SampledFamily& f) {
  f.validate();
  if (f.samples() < 2) throw DomainError("slope_range: need at least two parameter samples");
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (Eigen::Index s = 0; s < f.spaceSize(); ++s) {
    for (Eigen::Index k = 0; k + 1 < f.samples(); ++k) {
      const double q = (f.values(k + 1, s) - f.values(k, s)) / (f.grid(k + 1) - f.grid(k));
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    }
  }
  const double pad = 0.05 * std::max(hi - lo, 1.0);
  return {lo - pad, hi + pad};
}

SampledFamily convex_minorant(const SampledFamily& f) {
  f.validate();
  SampledFamily out = f;
  for (Eigen::Index s = 0; s < f.spaceSize(); ++s) {
    out.values.col(s) = lower_hull_values(f.grid, f.values.col(s));
  }
  return out;
}

}  // namespace slag
