#pragma once

// Order-by-order reconstruction of the chord-involution expansion b(a, eps)
// for a curve germ in affine normalization, and of the eps^3 defect of
// f(f(a)) where f(a) = b(a, eps).
//
// Setup: gamma(t) = (0,0), gamma' = (1,0), gamma'' = (0,1), gamma''' = -k gamma'
// with k(t) = k_sign, k'(t) = p, k''(t) = q. The points gamma(t - eps),
// gamma(t + a eps), gamma(t + eps) are given; P is the meet of the tangents at
// gamma(t + a eps) and gamma(t + eps); the line through P and gamma(t - eps)
// meets the curve again at gamma(t - b eps).

#include <string>
#include <vector>

#include "conics/exact_algebra.hpp"

namespace conics::symbolic {

using algebra::EpsSeries;
using algebra::ParamPoly;
using algebra::RationalFunc;
using algebra::SeriesVec3;

struct JetVector {
  ParamPoly x;
  ParamPoly y;
  friend bool operator==(const JetVector&, const JetVector&) = default;
};

struct JetData {
  int k_sign = 1;
  /// gamma^{(0)} ... gamma^{(max_order)} at the base point.
  std::vector<JetVector> derivatives;

  int max_order() const { return static_cast<int>(derivatives.size()) - 1; }
  const JetVector& operator[](int n) const { return derivatives.at(static_cast<std::size_t>(n)); }
};

/// Jets of the normalized germ up to max_order, obtained by differentiating
/// gamma''' = -k gamma'. Derivative k^{(j)} is the generator j of ParamPoly.
JetData gamma_jet(int k_sign, int max_order = 5);

/// Homogeneous lift (x, y, 1) of gamma(t + shift), truncated at the shift's
/// order. Requires shift(0) = 0 and jet.max_order() >= shift.order().
SeriesVec3 curve_series(const JetData& jet, const EpsSeries& shift);

/// (x', y', 0) for gamma'(t + shift). Requires jet.max_order() > shift.order().
SeriesVec3 tangent_series(const JetData& jet, const EpsSeries& shift);

/// Default truncation order of the incidence condition: terms eps^4..eps^7.
inline constexpr int kConditionOrder = 7;

/// LHS - RHS of
///   det[G(a), G'(a), G(-b)] det[G(1), G'(1), G(-1)]
///     = det[G(a), G'(a), G(-1)] det[G(1), G'(1), G(-b)],
/// where G(s) is the lift of gamma(t + s eps). The result has order `order`
/// and vanishes below eps^4. b_series needs order >= order - 4; its eps^{order-3}
/// term cannot influence the result and is taken as zero.
EpsSeries condition_series(const RationalFunc& a, const EpsSeries& b_series, const JetData& jet,
                           int order = kConditionOrder);

struct DualityExpansion {
  int k_sign = 1;
  /// Truncation order of the condition series that produced the expansion.
  int condition_order = kConditionOrder;
  /// b_0 ... b_{condition_order - 4}.
  std::vector<ParamPoly> b;

  /// b_0 + b_1 eps + ... as a series of order b.size() - 1.
  EpsSeries as_series() const;
};

/// Solves the condition series order by order. The eps^4 coefficient is a
/// quadratic in b_0 over Q(a); the branch with b_0(0) = -1/3 that is a Moebius
/// involution is kept. Each later order is linear in the next unknown.
/// Throws DerivationError when a step has no admissible solution.
DualityExpansion solve_duality_expansion(int k_sign, int condition_order = kConditionOrder);

struct ResidualCertificate {
  int condition_order = kConditionOrder;
  /// zero[i] is true when the eps^i coefficient vanishes identically.
  std::vector<bool> zero;
  /// The residual does not involve the highest curvature derivative present
  /// in the jets, which must drop out at this truncation.
  bool free_of_truncated_jet = false;

  bool all_zero() const;
};

/// Substitutes the expansion back into condition_series.
ResidualCertificate certify_expansion(const DualityExpansion& expansion);

struct InvolutionDefect {
  /// eps^3 coefficient of f(f(a)) - a.
  ParamPoly eps3_coefficient;
  int p_degree = 0;
  int q_degree = 0;
};

/// Composes f(a) = b_0(a) + eps b_1(a) + eps^2 b_2(a) + eps^3 b_3(a) with itself.
/// Throws DerivationError when an eps^0..eps^2 coefficient of f(f(a)) - a fails
/// to vanish.
InvolutionDefect involution_defect(const DualityExpansion& expansion);

/// Closed forms for k = +1 as published:
///   b   = -(3a+1)/(a+3) + 2(a-1)^2(a+1)^2/(3(a+3)^3) eps^2
///         + 2(a-1)^2(a+1)^2(2a^2+9a+5)/(15(a+3)^4) p eps^3
///   f(f(a)) - a = -(a-1)^2(a+1)^2(a^2+6a+1)/(24(a+3)^2) p eps^3
struct PublishedForms {
  std::vector<ParamPoly> b;  // b0..b3
  ParamPoly defect;
};
PublishedForms published_forms();

/// Canonical strings for b_0..b_3 and the defect, one "name = value" per line.
std::string canonical_report(const DualityExpansion& expansion, const InvolutionDefect& defect);

}  // namespace conics::symbolic
