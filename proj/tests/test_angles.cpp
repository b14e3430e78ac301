#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <random>

#include "oracles.hpp"
#include "slag/angles.hpp"

using namespace slag;
using oracle::kPi;

namespace {

SymMatrixd sym(std::initializer_list<std::initializer_list<double>> rows) {
  const auto m = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd a(m, m);
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) a(i, j++) = v;
    ++i;
  }
  return SymMatrixd(a);
}

SymMatrixd diag(std::initializer_list<double> d) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(d.size()));
  Eigen::Index i = 0;
  for (double x : d) v(i++) = x;
  return SymMatrixd::diagonal(v);
}

}  // namespace

TEST(SymMatrix, SymmetrizesWithinTolerance) {
  Eigen::Matrix2d m;
  m << 1.0, 2.0 + 1e-14, 2.0, 3.0;
  const SymMatrixd a(m);
  EXPECT_EQ(a(0, 1), a(1, 0));
  EXPECT_NEAR(a(0, 1), 2.0, 1e-14);
}

TEST(SymMatrix, RejectsAsymmetricNonFiniteAndEmpty) {
  Eigen::Matrix2d m;
  m << 1.0, 2.0, 2.5, 3.0;
  EXPECT_THROW(SymMatrixd{m}, InputError);
  m << 1.0, NAN, NAN, 3.0;
  EXPECT_THROW(SymMatrixd{m}, InputError);
  EXPECT_THROW(SymMatrixd{Eigen::MatrixXd(2, 3)}, InputError);
  EXPECT_THROW(SymMatrixd{Eigen::MatrixXd(0, 0)}, InputError);
}

TEST(LiftedAngle, ClosedForms) {
  EXPECT_NEAR(lifted_angle(SymMatrixd::zero(2)), 0.0, 1e-15);
  EXPECT_NEAR(lifted_angle(SymMatrixd::identity(2)), kPi / 2, 1e-15);
  EXPECT_NEAR(lifted_angle(diag({std::sqrt(3.0), -1.0})), kPi / 12, 1e-15);
}

TEST(LiftedAngle, MatchesOracleAndBranch) {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 300; ++k) {
    const Eigen::Index m = 1 + k % 4;
    const Eigen::MatrixXd a = oracle::random_symmetric(rng, m, -5, 5);
    const SymMatrixd s(a);
    const double th = lifted_angle(s);
    EXPECT_NEAR(th, oracle::lifted_angle(a), 1e-10);
    EXPECT_LT(std::abs(th), m * kPi / 2);
    // exp(iθ̃) = det(I + iA)/|det(I + iA)|
    const std::complex<double> d =
        (Eigen::MatrixXcd::Identity(m, m) + std::complex<double>(0, 1) * a.cast<std::complex<double>>())
            .determinant();
    EXPECT_LT(std::abs(std::polar(1.0, th) - d / std::abs(d)), 1e-9);
    const double theta = lagrangian_angle(s);
    EXPECT_NEAR(std::remainder(theta - th, 2 * kPi), 0.0, 1e-9);
  }
}

TEST(BlockDecompose, Examples) {
  auto p = block_decompose(sym({{0, 1}, {1, 0}}));
  EXPECT_EQ(p.a00, 0.0);
  EXPECT_EQ(p.a0(0), 1.0);
  EXPECT_EQ(p.aplus(0, 0), 0.0);

  p = block_decompose(diag({2, 3, 4}));
  EXPECT_EQ(p.a00, 2.0);
  EXPECT_EQ(p.a0, Eigen::Vector2d::Zero());
  EXPECT_EQ(p.aplus, diag({3, 4}));

  const SymMatrixd a = sym({{1, 2, 3}, {2, 5, 6}, {3, 6, 9}});
  p = block_decompose(a);
  EXPECT_EQ(p.a00, 1.0);
  EXPECT_EQ(p.a0, Eigen::Vector2d(2, 3));
  EXPECT_EQ(p.aplus, sym({{5, 6}, {6, 9}}));
  EXPECT_EQ(p.assemble(), a);

  EXPECT_THROW(block_decompose(diag({1})), DomainError);
}

TEST(DegenerateLocus, Examples) {
  EXPECT_TRUE(in_degenerate_locus(diag({0, 5})));
  EXPECT_FALSE(in_degenerate_locus(sym({{0, 1}, {1, 0}})));
  EXPECT_TRUE(in_degenerate_locus(sym({{1e-12, 0}, {0, 2}})));
  EXPECT_FALSE(in_degenerate_locus(sym({{1e-6, 0}, {0, 2}})));
  EXPECT_THROW(in_degenerate_locus(diag({0})), DomainError);
}

TEST(SpacetimeAngle, Examples) {
  auto r = spacetime_lifted_angle(SymMatrixd::zero(3));
  EXPECT_TRUE(r.onDegenerateLocus);
  EXPECT_EQ(r.method, AngleMethod::BlockFormula);
  EXPECT_NEAR(r.angle, kPi / 2, 1e-15);

  r = spacetime_lifted_angle(SymMatrixd::identity(3));
  EXPECT_FALSE(r.onDegenerateLocus);
  EXPECT_NEAR(r.angle, kPi, 1e-15);

  const SymMatrixd swap = sym({{0, 1}, {1, 0}});
  EXPECT_NEAR(spacetime_lifted_angle(swap).angle, 0.0, 1e-15);
  EXPECT_NEAR(spacetime_angle_direct(swap), 0.0, 1e-14);
  EXPECT_NEAR(spacetime_angle_direct(SymMatrixd::identity(3)), kPi, 1e-14);

  r = spacetime_lifted_angle(diag({0, 1}));
  EXPECT_TRUE(r.onDegenerateLocus);
  EXPECT_NEAR(r.angle, 3 * kPi / 4, 1e-15);
  EXPECT_THROW(spacetime_angle_direct(diag({0, 1})), DomainError);
}

TEST(SpacetimeAngle, ArgTermWithinHalfTurn) {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 500; ++k) {
    const Eigen::Index m = 2 + k % 3;
    const SymMatrixd a(oracle::random_symmetric(rng, m, -5, 5));
    const double gap = spacetime_lifted_angle(a).angle - lifted_angle(block_decompose(a).aplus);
    EXPECT_LE(std::abs(gap), kPi / 2 + 1e-14);
  }
}

TEST(SpacetimeAngle, UpperSemicontinuousAtLocus) {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 100; ++k) {
    const Eigen::Index m = 2 + k % 3;
    Eigen::MatrixXd a = oracle::random_symmetric(rng, m, -3, 3);
    a.row(0).setZero();
    a.col(0).setZero();
    const double at = spacetime_lifted_angle(SymMatrixd(a)).angle;
    const Eigen::MatrixXd b = oracle::random_symmetric(rng, m, -1, 1);
    // The excess over the limit value decays with the perturbation size.
    for (double eps = 1e-4; eps > 1e-9; eps /= 10) {
      EXPECT_LE(spacetime_lifted_angle(SymMatrixd(a + eps * b)).angle, at + 1e3 * eps);
    }
    // Approaching along diag(δ, 0, ..., 0), δ > 0, attains the value.
    Eigen::MatrixXd d = a;
    d(0, 0) = 1e-7;
    EXPECT_NEAR(spacetime_lifted_angle(SymMatrixd(d)).angle, at, 1e-6);
  }
}

TEST(ScaledAngle, Examples) {
  EXPECT_NEAR(scaled_angle(SymMatrixd::identity(2), 10.0), std::atan(100.0) + kPi / 4, 1e-14);
  EXPECT_NEAR(scaled_angle(SymMatrixd::zero(2), 7.0), 0.0, 1e-15);
  EXPECT_NEAR(scaled_angle(SymMatrixd::identity(2), 1e6), 3 * kPi / 4, 1e-11);
  EXPECT_THROW(scaled_angle(SymMatrixd::identity(2), 0.0), DomainError);
}

TEST(ScaledAngle, ErrorShrinksWithScale) {
  std::mt19937_64 rng(5);
  for (int k = 0; k < 100; ++k) {
    const SymMatrixd a(oracle::random_symmetric(rng, 2 + k % 3, -5, 5));
    const double target = spacetime_lifted_angle(a).angle;
    EXPECT_LT(std::abs(scaled_angle(a, 100.0) - target), std::abs(scaled_angle(a, 10.0) - target));
  }
}

TEST(SchurDet, Examples) {
  using C = std::complex<double>;
  Eigen::Matrix2d r;
  r << 2, 1, 1, 3;
  EXPECT_NEAR(std::abs(schur_det(r) - C(5, 0)), 0.0, 1e-14);
  Eigen::Matrix2cd d = Eigen::Matrix2cd::Zero();
  d(0, 0) = C(0, 1);
  d(1, 1) = C(1, 1);
  EXPECT_NEAR(std::abs(schur_det(d) - C(-1, 1)), 0.0, 1e-14);
  Eigen::Matrix2d z;
  z << 0, 1, 1, 2;
  EXPECT_THROW(schur_det(z), DomainError);
}

TEST(SchurDet, MatchesDeterminant) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int k = 0; k < 1000; ++k) {
    const Eigen::Index m = 1 + k % 5;
    Eigen::MatrixXcd c(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = i; j < m; ++j) c(i, j) = c(j, i) = {u(rng), u(rng)};
    }
    if (std::abs(c(0, 0)) < 0.1) c(0, 0) += 0.5;
    const auto det = c.determinant();
    EXPECT_LE(std::abs(schur_det(c) - det), 1e-10 * std::max(1.0, std::abs(det)));
  }
}

TEST(Resolvent, Examples) {
  auto r = resolvent_parts(diag({1}));
  EXPECT_NEAR(r.real(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(r.imag(0, 0), -0.5, 1e-15);
  r = resolvent_parts(diag({-1}));
  EXPECT_NEAR(r.imag(0, 0), 0.5, 1e-15);
  r = resolvent_parts(SymMatrixd::zero(2));
  EXPECT_TRUE(r.real.matrix().isIdentity(1e-15));
  EXPECT_TRUE(r.imag.matrix().isZero(1e-15));
}

TEST(Resolvent, MatchesComplexInverseAndSigns) {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 300; ++k) {
    const Eigen::Index m = 1 + k % 4;
    Eigen::MatrixXd c = oracle::random_symmetric(rng, m, -3, 3);
    if (k % 2 == 0) c = oracle::random_psd(rng, m, 1.0);
    const auto r = resolvent_parts(SymMatrixd(c));
    const Eigen::MatrixXcd inv =
        (Eigen::MatrixXcd::Identity(m, m) + std::complex<double>(0, 1) * c.cast<std::complex<double>>())
            .inverse();
    EXPECT_LT((inv.real() - r.real.matrix()).norm(), 1e-12);
    EXPECT_LT((inv.imag() - r.imag.matrix()).norm(), 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> re(r.real.matrix()), im(r.imag.matrix()),
        cc(c);
    EXPECT_GT(re.eigenvalues().minCoeff(), 0.0);
    const bool cPsd = cc.eigenvalues().minCoeff() >= -1e-12;
    const bool imNsd = im.eigenvalues().maxCoeff() <= 1e-12;
    EXPECT_EQ(cPsd, imNsd);
  }
}

TEST(DegenerateIdentity, Examples) {
  EXPECT_EQ(degenerate_identity(0.0, 1), diag({0, 1}));
  EXPECT_EQ(degenerate_identity(1.0, 2), SymMatrixd::identity(3));
  EXPECT_EQ(degenerate_identity(4.0, 1), diag({4, 1}));
  EXPECT_THROW(degenerate_identity(-1.0, 1), DomainError);
}

TEST(SpacetimeAngle, BlockFormulaAgreesWithEigenvalueRoute) {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 600; ++k) {
    const Eigen::MatrixXd a = oracle::random_symmetric(rng, 2 + k % 3, -5, 5);
    EXPECT_NEAR(spacetime_lifted_angle(SymMatrixd(a)).angle, oracle::spacetime_angle(a), 1e-8);
  }
}

TEST(Templates, LongDoubleInstantiation) {
  using SymL = SymMatrix<long double>;
  Eigen::Matrix<long double, 2, 2> m;
  m << 0, 1, 1, 0;
  EXPECT_NEAR(static_cast<double>(spacetime_lifted_angle(SymL(m)).angle), 0.0, 1e-15);
  EXPECT_NEAR(static_cast<double>(lifted_angle(SymL::identity(2))), kPi / 2, 1e-15);
}
