#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "slag/angles.hpp"
#include "slag/solvers.hpp"

using namespace slag;
using oracle::kPi;

namespace {

EnvelopeProblem problem(const SpaceGrid& g, const std::function<double(const Eigen::VectorXd&)>& v,
                        const std::function<double(const Eigen::VectorXd&)>& f, double a) {
  EnvelopeProblem p;
  p.obstacle = g;
  for (Eigen::Index s = 0; s < g.size(); ++s) p.obstacle.values(s) = v(g.point(s));
  const auto& b = g.boundaryIndices();
  p.boundaryTrace.resize(static_cast<Eigen::Index>(b.size()));
  for (std::size_t k = 0; k < b.size(); ++k) {
    p.boundaryTrace(static_cast<Eigen::Index>(k)) = f(g.point(b[k]));
  }
  p.phase = a;
  return p;
}

Eigen::VectorXd trace_of(const SpaceGrid& g, const std::function<double(const Eigen::VectorXd&)>& f) {
  const auto& b = g.boundaryIndices();
  Eigen::VectorXd t(static_cast<Eigen::Index>(b.size()));
  for (std::size_t k = 0; k < b.size(); ++k) t(static_cast<Eigen::Index>(k)) = f(g.point(b[k]));
  return t;
}

// Random smooth obstacle: a few cosine modes, plus a random trace offset.
EnvelopeProblem random_problem(std::mt19937_64& rng, const SpaceGrid& g, double a) {
  std::uniform_real_distribution<double> u(-1, 1);
  const double c1 = u(rng), c2 = u(rng), c3 = u(rng), k1 = 1 + 3 * std::abs(u(rng)),
               k2 = 1 + 3 * std::abs(u(rng)), off = 0.3 * u(rng);
  auto v = [=](const Eigen::VectorXd& x) {
    const double y = x.size() > 1 ? x(1) : 0.0;
    return c1 * std::cos(k1 * x(0)) + c2 * std::sin(k2 * y + x(0)) + c3 * x.squaredNorm();
  };
  auto f = [=](const Eigen::VectorXd& x) { return v(x) + off * std::cos(5 * x(0)); };
  return problem(g, v, f, a);
}

}  // namespace

TEST(Envelope, OwnEnvelope) {
  const SpaceGrid g = SpaceGrid::interval(-1, 1, 401);
  auto sq = [](const Eigen::VectorXd& x) { return x(0) * x(0); };
  const auto p = problem(g, sq, [](const Eigen::VectorXd&) { return 1.0; }, 0.0);
  EXPECT_LE((envelope(p).values - p.obstacle.values).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LE((envelope_oracle(p).values - p.obstacle.values).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Envelope, ChordBound) {
  const SpaceGrid g = SpaceGrid::interval(-1, 1, 401);
  const auto p = problem(g, [](const Eigen::VectorXd&) { return 1.0; },
                         [](const Eigen::VectorXd&) { return 0.0; }, 0.0);
  EXPECT_LE(envelope(p).values.cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LE(envelope_oracle(p).values.cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Envelope, QuarterTurnParabola) {
  const SpaceGrid g = SpaceGrid::interval(-1, 1, 401);
  const auto p = problem(g, [](const Eigen::VectorXd&) { return 0.0; },
                         [](const Eigen::VectorXd&) { return 0.0; }, kPi / 4);
  Eigen::VectorXd expect(g.size());
  for (Eigen::Index i = 0; i < g.size(); ++i) expect(i) = 0.5 * (std::pow(g.coord(i, 0), 2) - 1);
  EXPECT_LE((envelope(p).values - expect).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LE((envelope_oracle(p).values - expect).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Envelope, ZeroPhaseIsConvexEnvelope) {
  std::mt19937_64 rng(8);
  const SpaceGrid g = SpaceGrid::interval(-2, 1, 101);
  for (int k = 0; k < 20; ++k) {
    const auto p = random_problem(rng, g, 0.0);
    Eigen::VectorXd xs(g.size());
    for (Eigen::Index i = 0; i < g.size(); ++i) xs(i) = g.coord(i, 0);
    EXPECT_LE((envelope(p).values - convex_envelope_1d(xs, p.caps())).cwiseAbs().maxCoeff(),
              1e-12);
  }
}

TEST(Envelope, AdmissibleObstacleIsFixed) {
  const SpaceGrid g = SpaceGrid::rectangle(-1, 1, -1, 1, 17, 17);
  auto v = [](const Eigen::VectorXd& x) { return 2 * x.squaredNorm() + 0.3 * x(0) * x(1); };
  const auto p = problem(g, v, v, 2 * kPi / 3);
  EXPECT_GE(membership_margins(p.obstacle, p.phase).minCoeff(), 0.0);
  EXPECT_LE((envelope(p).values - p.obstacle.values).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Envelope, MatchesOracleOneDimension) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> phase(0, kPi / 2 - 0.05);
  const SpaceGrid g = SpaceGrid::interval(-1, 1, 401);
  for (int k = 0; k < 10; ++k) {
    const auto p = random_problem(rng, g, phase(rng));
    EXPECT_LE((envelope(p).values - envelope_oracle(p).values).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(Envelope, MatchesOracleTwoDimensions) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> phase(kPi / 2, kPi - 0.3);
  const SpaceGrid g = SpaceGrid::rectangle(-1, 1, -1, 1, 21, 21);
  for (int k = 0; k < 3; ++k) {
    const auto p = random_problem(rng, g, phase(rng));
    EXPECT_LE((envelope(p).values - envelope_oracle(p).values).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(Envelope, CandidateConstraintsAndMaximality) {
  std::mt19937_64 rng(3);
  for (int dim : {1, 2}) {
    const SpaceGrid g = dim == 1 ? SpaceGrid::interval(-1, 1, 201)
                                 : SpaceGrid::rectangle(-1, 1, -1, 1, 25, 25);
    for (int k = 0; k < 3; ++k) {
      const double a = dim == 1 ? 0.3 * k : kPi / 2 + 0.3 * k;
      const auto p = random_problem(rng, g, a);
      const SpaceGrid w = envelope(p);
      const Eigen::VectorXd caps = p.caps();
      EXPECT_TRUE((w.values.array() <= caps.array()).all());
      const Eigen::VectorXd m = membership_margins(w, a);
      EXPECT_GE(m.minCoeff(), -1e-7);
      // Each interior node is either on the obstacle or has zero margin.
      const auto& in = g.interiorIndices();
      for (std::size_t i = 0; i < in.size(); ++i) {
        const double slack = caps(in[i]) - w.values(in[i]);
        EXPECT_LE(std::min(slack, std::abs(m(static_cast<Eigen::Index>(i)))), 1e-6);
      }
    }
  }
}

TEST(Envelope, Rejections) {
  const SpaceGrid g = SpaceGrid::interval(-1, 1, 11);
  auto zero = [](const Eigen::VectorXd&) { return 0.0; };
  EXPECT_THROW(envelope(problem(g, zero, zero, kPi / 2)), DomainError);
  EXPECT_THROW(envelope(problem(g, zero, zero, -0.1)), DomainError);
  auto p = problem(g, zero, zero, 0.1);
  p.boundaryTrace.resize(3);
  EXPECT_THROW(envelope(p), DomainError);
  p = problem(g, zero, zero, 0.1);
  p.obstacle.values(3) = INFINITY;
  EXPECT_THROW(envelope(p), DomainError);
  const SpaceGrid r = SpaceGrid::rectangle(-1, 1, -1, 1, 9, 9);
  EXPECT_THROW(envelope(problem(r, zero, zero, 0.2)), DomainError);
  SweepOptions few;
  few.maxSweeps = 2;
  EXPECT_THROW(envelope(problem(r, [](const Eigen::VectorXd& x) { return std::cos(3 * x(0)); },
                                zero, 2.0),
                        few),
               ConvergenceError);
}

TEST(LocalSolve, AttainsPhase) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  std::uniform_real_distribution<double> phase(kPi / 2, kPi - 0.01);
  for (int k = 0; k < 1000; ++k) {
    const double h = 0.05, a = phase(rng);
    const double sx = u(rng), sy = u(rng), cross = 0.1 * u(rng);
    const double w = detail::local_solve_2d(sx, sy, cross, h, a);
    Eigen::Matrix2d hess;
    hess << (sx - 2 * w) / (h * h), cross / (4 * h * h), cross / (4 * h * h),
        (sy - 2 * w) / (h * h);
    EXPECT_NEAR(oracle::lifted_angle(hess), a, 1e-9);
    // Raising the node leaves the phase set.
    const double w2 = w + 1e-6;
    hess << (sx - 2 * w2) / (h * h), cross / (4 * h * h), cross / (4 * h * h),
        (sy - 2 * w2) / (h * h);
    EXPECT_LT(oracle::lifted_angle(hess), a);
  }
}

TEST(Dirichlet, OneDimensionalClosedForms) {
  const SpaceGrid g = SpaceGrid::interval(0, 1, 101);
  Eigen::VectorXd f(2);
  f << 0, 0.5;
  const SpaceGrid u = dirichlet(g, f, kPi / 4);
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    EXPECT_NEAR(u.values(i), 0.5 * std::pow(g.coord(i, 0), 2), 1e-14);
  }
  f << 2, -1;
  const SpaceGrid l = dirichlet(g, f, 0.0);
  for (Eigen::Index i = 0; i < g.size(); ++i) EXPECT_NEAR(l.values(i), 2 - 3 * g.coord(i, 0), 1e-14);
}

TEST(Dirichlet, QuadraticOnSquare) {
  const SpaceGrid g = SpaceGrid::rectangle(0, 1, 0, 1, 33, 33);
  auto q = [](const Eigen::VectorXd& x) { return 0.5 * x.squaredNorm(); };
  const SpaceGrid u = dirichlet(g, trace_of(g, q), kPi / 2);
  EXPECT_LE(membership_margins(u, kPi / 2).cwiseAbs().maxCoeff(), 1e-6);
  for (Eigen::Index s = 0; s < g.size(); ++s) EXPECT_NEAR(u.values(s), q(g.point(s)), 1e-6);
}

TEST(Dirichlet, GenericDataSolvesDiscreteEquation) {
  const SpaceGrid g = SpaceGrid::rectangle(-1, 1, -1, 1, 33, 33);
  auto f = [](const Eigen::VectorXd& x) { return x(0) * x(0) + 0.5 * x(1) * x(1) + 0.2 * std::sin(x(0) + x(1)); };
  for (double a : {kPi / 2, 2 * kPi / 3, 0.9 * kPi}) {
    const SpaceGrid u = dirichlet(g, trace_of(g, f), a);
    EXPECT_LE(membership_margins(u, a).cwiseAbs().maxCoeff(), 1e-6);
    for (std::size_t k = 0; k < g.boundaryIndices().size(); ++k) {
      const Eigen::Index s = g.boundaryIndices()[k];
      EXPECT_EQ(u.values(s), f(g.point(s)));
    }
  }
}

TEST(Dirichlet, Rejections) {
  const SpaceGrid g = SpaceGrid::rectangle(0, 1, 0, 1, 9, 9);
  const Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.boundaryIndices().size()));
  EXPECT_THROW(dirichlet(g, f, kPi / 4), DomainError);
  EXPECT_THROW(dirichlet(g, Eigen::VectorXd::Zero(3), kPi / 2), DomainError);
  NewtonOptions none;
  none.maxIterations = 0;
  Eigen::VectorXd wavy = f;
  for (Eigen::Index k = 0; k < wavy.size(); ++k) wavy(k) = std::cos(static_cast<double>(k));
  EXPECT_THROW(dirichlet(g, wavy, kPi / 2, none), ConvergenceError);
}

TEST(DiscreteHessian, Stencil) {
  const SpaceGrid g = SpaceGrid::rectangle(0, 1, 0, 1, 11, 11);
  SpaceGrid w = g;
  for (Eigen::Index s = 0; s < g.size(); ++s) {
    const Eigen::VectorXd x = g.point(s);
    w.values(s) = 3 * x(0) * x(0) - x(0) * x(1) + 0.5 * x(1) * x(1);
  }
  const SymMatrixd hess = discrete_hessian(w, g.index(4, 6));
  EXPECT_NEAR(hess(0, 0), 6, 1e-9);
  EXPECT_NEAR(hess(0, 1), -1, 1e-9);
  EXPECT_NEAR(hess(1, 1), 1, 1e-9);
  EXPECT_THROW(discrete_hessian(w, 0), DomainError);
}

TEST(Envelope, MonotoneInData) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u01(0, 1);
  for (int dim : {1, 2}) {
    const SpaceGrid g = dim == 1 ? SpaceGrid::interval(-1, 1, 101)
                                 : SpaceGrid::rectangle(-1, 1, -1, 1, 17, 17);
    for (int k = 0; k < 4; ++k) {
      const double a = dim == 1 ? 1.2 * u01(rng) : kPi / 2 + 1.2 * u01(rng);
      const auto lo = random_problem(rng, g, a);
      auto hi = lo;
      for (Eigen::Index s = 0; s < g.size(); ++s) hi.obstacle.values(s) += 0.2 * u01(rng);
      for (Eigen::Index s = 0; s < hi.boundaryTrace.size(); ++s) hi.boundaryTrace(s) += 0.2 * u01(rng);
      const Eigen::VectorXd gap = envelope(hi).values - envelope(lo).values;
      EXPECT_GE(gap.minCoeff(), dim == 1 ? 0.0 : -1e-9);
    }
  }
}

TEST(Envelope, ConvexAlongGridLines) {
  std::mt19937_64 rng(13);
  const SpaceGrid line = SpaceGrid::interval(-1, 1, 201);
  const double h = line.spacing();
  for (double a : {0.0, 0.5, 1.3}) {
    const SpaceGrid w = envelope(random_problem(rng, line, a));
    for (Eigen::Index i = 1; i + 1 < line.size(); ++i) {
      EXPECT_GE(w.values(i + 1) - 2 * w.values(i) + w.values(i - 1), std::tan(a) * h * h - 1e-10);
    }
  }
  const SpaceGrid sq = SpaceGrid::rectangle(-1, 1, -1, 1, 21, 21);
  const SpaceGrid w = envelope(random_problem(rng, sq, 2.0));
  for (Eigen::Index s : sq.interiorIndices()) {
    EXPECT_GE(w.values(s + 21) - 2 * w.values(s) + w.values(s - 21), -1e-10);
    EXPECT_GE(w.values(s + 1) - 2 * w.values(s) + w.values(s - 1), -1e-10);
  }
}

TEST(Envelope, HugeObstacleGivesDirichletSolution) {
  auto f = [](const Eigen::VectorXd& x) { return x(0) * x(0) + 0.3 * std::sin(2 * x.sum()); };
  auto big = [](const Eigen::VectorXd&) { return 1e9; };
  const SpaceGrid line = SpaceGrid::interval(-1, 1, 101);
  const auto p1 = problem(line, big, f, 0.7);
  EXPECT_LE((envelope(p1).values - dirichlet(line, p1.boundaryTrace, 0.7).values).cwiseAbs().maxCoeff(),
            1e-8);
  const SpaceGrid sq = SpaceGrid::rectangle(-1, 1, -1, 1, 17, 17);
  const auto p2 = problem(sq, big, f, 2.0);
  NewtonOptions tight;
  tight.tol = 1e-12;
  EXPECT_LE((envelope(p2).values - dirichlet(sq, p2.boundaryTrace, 2.0, tight).values).cwiseAbs().maxCoeff(),
            1e-8);
}
