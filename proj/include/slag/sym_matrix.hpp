#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <sstream>

#include "slag/errors.hpp"

namespace slag {

/// Dense real symmetric matrix. Construction symmetrizes the input as
/// (M + M^T)/2 and rejects inputs whose asymmetry exceeds 1e-12 relative to
/// (1 + ||M||_F); after construction entries are exactly symmetric.
template <typename Scalar>
class SymMatrix {
 public:
  using MatrixType = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using VectorType = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  static constexpr Scalar kAsymmetryTolerance = Scalar(1e-12);

  SymMatrix() : SymMatrix(MatrixType::Zero(1, 1)) {}

  template <typename Derived>
  explicit SymMatrix(const Eigen::MatrixBase<Derived>& m) {
    if (m.rows() != m.cols()) {
      throw InputError("SymMatrix: matrix is not square");
    }
    if (m.rows() < 1) {
      throw InputError("SymMatrix: dimension must be at least 1");
    }
    MatrixType full = m.template cast<Scalar>();
    if (!full.allFinite()) {
      throw InputError("SymMatrix: entries must be finite");
    }
    const Scalar asym = (full - full.transpose()).norm();
    if (asym > kAsymmetryTolerance * (Scalar(1) + full.norm())) {
      std::ostringstream os;
      os << "SymMatrix: input is not symmetric (||M - M^T||_F = " << asym << ")";
      throw InputError(os.str());
    }
    m_ = (full + full.transpose()) / Scalar(2);
  }

  static SymMatrix zero(Eigen::Index dim) { return SymMatrix(MatrixType::Zero(dim, dim)); }
  static SymMatrix identity(Eigen::Index dim) {
    return SymMatrix(MatrixType::Identity(dim, dim));
  }
  template <typename Derived>
  static SymMatrix diagonal(const Eigen::MatrixBase<Derived>& d) {
    return SymMatrix(MatrixType(d.template cast<Scalar>().asDiagonal()));
  }

  Eigen::Index dim() const { return m_.rows(); }
  const MatrixType& matrix() const { return m_; }
  Scalar operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }
  Scalar norm() const { return m_.norm(); }

  friend SymMatrix operator+(const SymMatrix& a, const SymMatrix& b) {
    return SymMatrix(a.m_ + b.m_);
  }
  friend SymMatrix operator-(const SymMatrix& a, const SymMatrix& b) {
    return SymMatrix(a.m_ - b.m_);
  }
  friend SymMatrix operator*(Scalar s, const SymMatrix& a) { return SymMatrix(s * a.m_); }
  friend bool operator==(const SymMatrix& a, const SymMatrix& b) {
    return a.dim() == b.dim() && a.m_ == b.m_;
  }

 private:
  MatrixType m_;
};

using SymMatrixd = SymMatrix<double>;

/// Block decomposition A = [[a00, a0^T], [a0, A+]] of a matrix of dim >= 2.
template <typename Scalar>
struct BlockParts {
  Scalar a00;
  typename SymMatrix<Scalar>::VectorType a0;
  SymMatrix<Scalar> aplus;

  SymMatrix<Scalar> assemble() const {
    const Eigen::Index m = a0.size() + 1;
    typename SymMatrix<Scalar>::MatrixType full(m, m);
    full(0, 0) = a00;
    full.block(0, 1, 1, m - 1) = a0.transpose();
    full.block(1, 0, m - 1, 1) = a0;
    full.block(1, 1, m - 1, m - 1) = aplus.matrix();
    return SymMatrix<Scalar>(full);
  }
};

/// A phase value in radians tied to a spatial dimension n. Space subequations
/// F_c need c in (-n pi/2, n pi/2); space-time subequations need
/// c in (-(n+1) pi/2, (n+1) pi/2).
struct Phase {
  double value = 0.0;
  int spaceDim = 1;

  static double spaceLimit(int n) { return n * std::numbers::pi / 2; }
  static double spaceTimeLimit(int n) { return (n + 1) * std::numbers::pi / 2; }

  bool validForSpace() const {
    return spaceDim >= 1 && std::abs(value) < spaceLimit(spaceDim);
  }
  bool validForSpaceTime() const {
    return spaceDim >= 1 && std::abs(value) < spaceTimeLimit(spaceDim);
  }

  void requireSpace() const {
    if (!validForSpace()) {
      std::ostringstream os;
      os.precision(17);
      os << "phase " << value << " outside (-n pi/2, n pi/2) for n = " << spaceDim;
      throw DomainError(os.str());
    }
  }
  void requireSpaceTime() const {
    if (!validForSpaceTime()) {
      std::ostringstream os;
      os.precision(17);
      os << "phase " << value << " outside (-(n+1) pi/2, (n+1) pi/2) for n = " << spaceDim;
      throw DomainError(os.str());
    }
  }
};

}  // namespace slag
