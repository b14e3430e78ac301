#pragma once

// Lagrangian-angle calculus on real symmetric matrices.
//
//   lifted angle          θ̃(A) = Σ arctan λ_i(A)                 ∈ (-mπ/2, mπ/2)
//   space-time angle      Θ̃(A) = tr arg(I_n + iA),  I_n = diag(0,1,...,1)
//
// Θ̃ is evaluated off the degenerate locus S = {diag(0, A+)} through the
// block identity
//
//   Θ̃(A) = θ̃(A+) + arg(i a00 + a0^T (I + iA+)^{-1} a0),
//
// and on S by its upper semicontinuous extension π/2 + θ̃(A+).

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "slag/errors.hpp"
#include "slag/sym_matrix.hpp"

namespace slag {

inline constexpr double kDefaultLocusTolerance = 1e-9;

enum class AngleMethod { BlockFormula, DirectEigensolve, Limit };

template <typename Scalar>
struct AngleResult {
  Scalar angle;
  bool onDegenerateLocus;
  AngleMethod method;
};

template <typename Scalar>
struct ResolventParts {
  SymMatrix<Scalar> real;
  SymMatrix<Scalar> imag;
};

namespace detail {

template <typename Scalar>
Eigen::SelfAdjointEigenSolver<typename SymMatrix<Scalar>::MatrixType> eigensolve(
    const SymMatrix<Scalar>& a, int options) {
  Eigen::SelfAdjointEigenSolver<typename SymMatrix<Scalar>::MatrixType> es(a.matrix(),
                                                                           options);
  if (es.info() != Eigen::Success) {
    throw NumericalError("symmetric eigensolve failed to converge");
  }
  return es;
}

template <typename Derived>
typename Derived::Scalar sum_arctan(const Eigen::MatrixBase<Derived>& eigenvalues) {
  using std::atan;
  typename Derived::Scalar total(0);
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) total += atan(eigenvalues(i));
  return total;
}

}  // namespace detail

/// θ̃(A): sum of arctan over the eigenvalues of A.
template <typename Scalar>
Scalar lifted_angle(const SymMatrix<Scalar>& a) {
  const auto es = detail::eigensolve(a, Eigen::EigenvaluesOnly);
  return detail::sum_arctan(es.eigenvalues());
}

/// θ(A) = arg det(I + iA), branch (-π, π]. Only used to pin the branch of θ̃.
template <typename Scalar>
Scalar lagrangian_angle(const SymMatrix<Scalar>& a) {
  using Complex = std::complex<Scalar>;
  using CMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index m = a.dim();
  CMatrix c = CMatrix::Identity(m, m) + Complex(0, 1) * a.matrix().template cast<Complex>();
  return std::arg(c.partialPivLu().determinant());
}

template <typename Scalar>
BlockParts<Scalar> block_decompose(const SymMatrix<Scalar>& a) {
  const Eigen::Index m = a.dim();
  if (m < 2) throw DomainError("block_decompose: dimension must be at least 2");
  return BlockParts<Scalar>{a(0, 0), a.matrix().col(0).tail(m - 1),
                            SymMatrix<Scalar>(a.matrix().bottomRightCorner(m - 1, m - 1))};
}

/// A ∈ S (A = diag(0, A+)) up to a tolerance relative to 1 + ||A||_F.
template <typename Scalar>
bool in_degenerate_locus(const SymMatrix<Scalar>& a, Scalar tol = Scalar(kDefaultLocusTolerance)) {
  if (a.dim() < 2) throw DomainError("in_degenerate_locus: dimension must be at least 2");
  using std::abs;
  const Eigen::Index m = a.dim();
  const Scalar bound = tol * (Scalar(1) + a.norm());
  return abs(a(0, 0)) <= bound && a.matrix().col(0).tail(m - 1).norm() <= bound;
}

/// I_n^η = diag(η, 1, ..., 1) of dimension n + 1.
template <typename Scalar = double>
SymMatrix<Scalar> degenerate_identity(Scalar eta, int n) {
  if (!(eta >= Scalar(0))) throw DomainError("degenerate_identity: eta must be >= 0");
  if (n < 1) throw DomainError("degenerate_identity: n must be >= 1");
  typename SymMatrix<Scalar>::VectorType d = SymMatrix<Scalar>::VectorType::Ones(n + 1);
  d(0) = eta;
  return SymMatrix<Scalar>::diagonal(d);
}

/// Θ̃(A) via the block identity, with the π/2 branch on S.
template <typename Scalar>
AngleResult<Scalar> spacetime_lifted_angle(const SymMatrix<Scalar>& a,
                                           Scalar tol = Scalar(kDefaultLocusTolerance)) {
  const auto parts = block_decompose(a);
  const auto es = detail::eigensolve(parts.aplus, Eigen::ComputeEigenvectors);
  const Scalar base = detail::sum_arctan(es.eigenvalues());
  if (in_degenerate_locus(a, tol)) {
    return {std::numbers::pi_v<Scalar> / 2 + base, true, AngleMethod::BlockFormula};
  }
  // a0^T (I + iA+)^{-1} a0 = Σ b_k^2 / (1 + iλ_k), b = Q^T a0.
  const typename SymMatrix<Scalar>::VectorType b = es.eigenvectors().transpose() * parts.a0;
  Scalar re(0), im(0);
  for (Eigen::Index k = 0; k < b.size(); ++k) {
    const Scalar lam = es.eigenvalues()(k);
    const Scalar w = b(k) * b(k) / (Scalar(1) + lam * lam);
    re += w;
    im -= w * lam;
  }
  im += parts.a00;
  return {base + std::arg(std::complex<Scalar>(re, im)), false, AngleMethod::BlockFormula};
}

/// Θ̃(A) as Σ arg λ over the eigenvalues of the non-normal matrix I_n + iA.
/// Reference route only; undefined on S.
template <typename Scalar>
Scalar spacetime_angle_direct(const SymMatrix<Scalar>& a,
                              Scalar tol = Scalar(kDefaultLocusTolerance)) {
  if (in_degenerate_locus(a, tol)) {
    throw DomainError("spacetime_angle_direct: matrix lies on the degenerate locus");
  }
  using Complex = std::complex<Scalar>;
  using CMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index m = a.dim();
  CMatrix c = Complex(0, 1) * a.matrix().template cast<Complex>();
  for (Eigen::Index i = 1; i < m; ++i) c(i, i) += Scalar(1);
  Eigen::ComplexEigenSolver<CMatrix> ces(c, false);
  if (ces.info() != Eigen::Success) {
    throw NumericalError("spacetime_angle_direct: complex eigensolve failed");
  }
  Scalar total(0);
  for (Eigen::Index i = 0; i < m; ++i) total += std::arg(ces.eigenvalues()(i));
  return total;
}

/// θ̃(I_n^p A I_n^p); tends to Θ̃(A) as p -> ∞ for A off S.
template <typename Scalar>
Scalar scaled_angle(const SymMatrix<Scalar>& a, Scalar p) {
  if (!(p > Scalar(0))) throw DomainError("scaled_angle: p must be positive");
  if (a.dim() < 2) throw DomainError("scaled_angle: dimension must be at least 2");
  typename SymMatrix<Scalar>::MatrixType scaled = a.matrix();
  scaled.row(0) *= p;
  scaled.col(0) *= p;
  return lifted_angle(SymMatrix<Scalar>(scaled));
}

/// det C through the first-pivot Schur complement c00 · det(C+ - c0 c0^T / c00)
/// for complex symmetric C (transpose, not conjugate transpose).
template <typename Derived>
std::complex<typename Eigen::NumTraits<typename Derived::Scalar>::Real> schur_det(
    const Eigen::MatrixBase<Derived>& c) {
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  using Complex = std::complex<Real>;
  using CMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
  if (c.rows() != c.cols() || c.rows() < 1) {
    throw DomainError("schur_det: matrix must be square and non-empty");
  }
  const CMatrix cm = c.template cast<Complex>();
  const Eigen::Index m = cm.rows();
  const Complex c00 = cm(0, 0);
  if (std::abs(c00) <= Real(1e-14) * (Real(1) + cm.norm())) {
    throw DomainError("schur_det: leading entry c00 vanishes");
  }
  if (m == 1) return c00;
  const CMatrix c0 = cm.col(0).tail(m - 1);
  const CMatrix reduced =
      cm.bottomRightCorner(m - 1, m - 1) - c0 * c0.transpose() / c00;
  return c00 * reduced.partialPivLu().determinant();
}

/// Real and imaginary parts of (I + iC)^{-1}.
template <typename Scalar>
ResolventParts<Scalar> resolvent_parts(const SymMatrix<Scalar>& c) {
  const auto es = detail::eigensolve(c, Eigen::ComputeEigenvectors);
  const auto& q = es.eigenvectors();
  const auto& lam = es.eigenvalues().array();
  const auto denom = Scalar(1) + lam * lam;
  typename SymMatrix<Scalar>::VectorType re = (Scalar(1) / denom).matrix();
  typename SymMatrix<Scalar>::VectorType im = (-lam / denom).matrix();
  return {SymMatrix<Scalar>(q * re.asDiagonal() * q.transpose()),
          SymMatrix<Scalar>(q * im.asDiagonal() * q.transpose())};
}

}  // namespace slag
