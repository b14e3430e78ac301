#pragma once

#include <cmath>
#include <cstdint>
#include <string_view>

#include "slag/angles.hpp"
#include "slag/sym_matrix.hpp"

namespace slag {

inline constexpr double kDefaultBand = 1e-9;

enum class MembershipStatus { Inside, Boundary, Outside };

std::string_view to_string(MembershipStatus s);

/// Tri-state membership with the signed angle margin (angle - phase).
struct Membership {
  MembershipStatus status;
  double margin;

  static Membership classify(double margin, double band) {
    if (std::abs(margin) <= band) return {MembershipStatus::Boundary, margin};
    return {margin > 0 ? MembershipStatus::Inside : MembershipStatus::Outside, margin};
  }
  bool member() const { return status != MembershipStatus::Outside; }
};

/// A ∈ F_c  ⇔  θ̃(A) ≥ c, for A of dimension n = c.spaceDim.
template <typename Scalar>
Membership in_Fc(const SymMatrix<Scalar>& a, const Phase& c, double band = kDefaultBand) {
  c.requireSpace();
  if (a.dim() != c.spaceDim) throw DomainError("in_Fc: matrix dimension must equal n");
  return Membership::classify(static_cast<double>(lifted_angle(a)) - c.value, band);
}

/// A ∈ 𝓕_c  ⇔  Θ̃(A) ≥ c, for A of dimension n + 1.
template <typename Scalar>
Membership in_calFc(const SymMatrix<Scalar>& a, const Phase& c, double band = kDefaultBand) {
  c.requireSpaceTime();
  if (a.dim() != c.spaceDim + 1) throw DomainError("in_calFc: matrix dimension must equal n + 1");
  return Membership::classify(static_cast<double>(spacetime_lifted_angle(a).angle) - c.value,
                              band);
}

/// Membership in the dual subequation, which is 𝓕_{-c}.
template <typename Scalar>
Membership in_dual_calFc(const SymMatrix<Scalar>& a, const Phase& c,
                         double band = kDefaultBand) {
  return in_calFc(a, Phase{-c.value, c.spaceDim}, band);
}

/// Rejection sampler for members of 𝓕_c, c ∈ [nπ/2, (n+1)π/2). Deterministic
/// per seed; throws SamplingError after `budget` rejected draws.
SymMatrixd sample_calFc_member(const Phase& c, std::uint64_t seed, int budget = 100000);

/// Sampler for members of F_a, a ∈ [(n-1)π/2, nπ/2).
SymMatrixd sample_Fc_member(const Phase& a, std::uint64_t seed, int budget = 100000);

}  // namespace slag
