#include "slag/subeq.hpp"

#include <numbers>
#include <random>
#include <sstream>

namespace slag {

std::string_view to_string(MembershipStatus s) {
  switch (s) {
    case MembershipStatus::Inside:
      return "inside";
    case MembershipStatus::Boundary:
      return "boundary";
    case MembershipStatus::Outside:
      return "outside";
  }
  return "unknown";
}

namespace {

constexpr double kPi = std::numbers::pi;

Eigen::MatrixXd random_orthogonal(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = normal(rng);
  return Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
}

// Symmetric n×n matrix with arctan-eigenvalues μ_i ∈ (-π/2, π/2) whose sum
// exceeds `target` ∈ [(n-1)π/2, nπ/2).
Eigen::MatrixXd random_with_angle_above(int n, double target, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::exponential_distribution<double> expo(1.0);
  const double budget = n * kPi / 2 - target;
  const double total = budget * (0.02 + 0.97 * unit(rng));
  Eigen::VectorXd w(n);
  for (int i = 0; i < n; ++i) w(i) = expo(rng) + 1e-3;
  w *= total / w.sum();
  Eigen::VectorXd lam(n);
  for (int i = 0; i < n; ++i) lam(i) = 1.0 / std::tan(w(i));
  const Eigen::MatrixXd q = random_orthogonal(n, rng);
  return q * lam.asDiagonal() * q.transpose();
}

[[noreturn]] void exhausted(const char* who, const Phase& c, int budget) {
  std::ostringstream os;
  os.precision(17);
  os << who << ": no member found for c = " << c.value << " after " << budget << " draws";
  throw SamplingError(os.str());
}

}  // namespace

SymMatrixd sample_calFc_member(const Phase& c, std::uint64_t seed, int budget) {
  const int n = c.spaceDim;
  if (n < 1 || c.value < n * kPi / 2 || c.value >= (n + 1) * kPi / 2) {
    throw DomainError("sample_calFc_member: phase must lie in [n pi/2, (n+1) pi/2)");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal;
  for (int draw = 0; draw < budget; ++draw) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + 1, n + 1);
    a.bottomRightCorner(n, n) = random_with_angle_above(n, c.value - kPi / 2, rng);
    if (unit(rng) >= 0.1) {
      a(0, 0) = std::exp(-3.0 + 5.0 * unit(rng));
      const double scale = std::exp(-6.0 + 7.0 * unit(rng));
      for (int i = 1; i <= n; ++i) {
        a(0, i) = a(i, 0) = scale * normal(rng);
      }
    }
    SymMatrixd candidate(a);
    if (spacetime_lifted_angle(candidate).angle >= c.value) return candidate;
  }
  exhausted("sample_calFc_member", c, budget);
}

SymMatrixd sample_Fc_member(const Phase& a, std::uint64_t seed, int budget) {
  const int n = a.spaceDim;
  if (n < 1 || a.value < (n - 1) * kPi / 2 || a.value >= n * kPi / 2) {
    throw DomainError("sample_Fc_member: phase must lie in [(n-1) pi/2, n pi/2)");
  }
  std::mt19937_64 rng(seed);
  for (int draw = 0; draw < budget; ++draw) {
    SymMatrixd candidate(random_with_angle_above(n, a.value, rng));
    if (lifted_angle(candidate) >= a.value) return candidate;
  }
  exhausted("sample_Fc_member", a, budget);
}

}  // namespace slag
