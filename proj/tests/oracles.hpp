#pragma once

// Test-side reference computations, written independently of the library
// routes they check.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

namespace oracle {

inline constexpr double kPi = std::numbers::pi;

/// Σ arctan of eigenvalues through the general (non-symmetric) eigensolver.
inline double lifted_angle(const Eigen::MatrixXd& a) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) s += std::atan(es.eigenvalues()(i).real());
  return s;
}

/// Σ arg λ(I_n + iA), I_n = diag(0, 1, ..., 1). Valid off the degenerate locus.
inline double spacetime_angle(const Eigen::MatrixXd& a) {
  const Eigen::Index m = a.rows();
  Eigen::MatrixXcd c = std::complex<double>(0, 1) * a.cast<std::complex<double>>();
  for (Eigen::Index i = 1; i < m; ++i) c(i, i) += 1.0;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(c, false);
  double s = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) s += std::arg(ces.eigenvalues()(i));
  return s;
}

/// Θ̃ with the π/2 rule on matrices whose first row and column vanish exactly.
inline double spacetime_angle_usc(const Eigen::MatrixXd& a) {
  const Eigen::Index m = a.rows();
  if (a.col(0).cwiseAbs().maxCoeff() == 0.0) {
    return kPi / 2 + lifted_angle(a.bottomRightCorner(m - 1, m - 1));
  }
  return spacetime_angle(a);
}

inline Eigen::MatrixXd random_symmetric(std::mt19937_64& rng, Eigen::Index m, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::MatrixXd a(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i; j < m; ++j) a(i, j) = a(j, i) = u(rng);
  }
  return a;
}

/// B Bᵀ with B of random rank up to m.
inline Eigen::MatrixXd random_psd(std::mt19937_64& rng, Eigen::Index m, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  std::uniform_int_distribution<Eigen::Index> rank(0, m);
  const Eigen::Index r = rank(rng);
  Eigen::MatrixXd b(m, r);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < r; ++j) b(i, j) = g(rng);
  }
  return b * b.transpose();
}

/// Fourth-order central differences on a uniform grid, square cells, node
/// index i * ny + j; node must be at least two cells from the boundary.
inline Eigen::Matrix2d hessian_4th_order(const Eigen::VectorXd& w, Eigen::Index ny, double h,
                                         Eigen::Index i, Eigen::Index j) {
  auto at = [&](Eigen::Index a, Eigen::Index b) { return w(a * ny + b); };
  const double c = 12.0 * h * h;
  const double xx = (-at(i + 2, j) + 16 * at(i + 1, j) - 30 * at(i, j) + 16 * at(i - 1, j) -
                     at(i - 2, j)) / c;
  const double yy = (-at(i, j + 2) + 16 * at(i, j + 1) - 30 * at(i, j) + 16 * at(i, j - 1) -
                     at(i, j - 2)) / c;
  auto dx = [&](Eigen::Index b) {
    return (-at(i + 2, b) + 8 * at(i + 1, b) - 8 * at(i - 1, b) + at(i - 2, b)) / (12 * h);
  };
  const double xy = (-dx(j + 2) + 8 * dx(j + 1) - 8 * dx(j - 1) + dx(j - 2)) / (12 * h);
  Eigen::Matrix2d m;
  m << xx, xy, xy, yy;
  return m;
}

}  // namespace oracle
