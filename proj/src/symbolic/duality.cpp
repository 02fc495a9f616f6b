#include <sstream>

#include "conics/errors.hpp"
#include "conics/symbolic_verifier.hpp"

namespace conics::symbolic {

using algebra::Monomial;
using algebra::Rational;
using algebra::UniPoly;

namespace {

Rational binomial(int n, int k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(r);
}

ParamPoly curvature_derivative(int k_sign, int j) {
  if (j == 0) return ParamPoly(static_cast<long>(k_sign));
  return ParamPoly::generator(j);
}

void require_shift(const EpsSeries& shift) {
  if (!shift.coeff(0).is_zero()) throw AlgebraError("curve shift must have zero constant term");
}

// sum_n jet[n + offset] shift^n / n!, componentwise.
std::pair<EpsSeries, EpsSeries> taylor_sum(const JetData& jet, const EpsSeries& shift, int offset) {
  const int order = shift.order();
  EpsSeries x(order);
  EpsSeries y(order);
  EpsSeries power = EpsSeries::constant(ParamPoly(1L), order);
  Rational factorial = 1;
  for (int n = 0; n <= order; ++n) {
    if (n > 0) {
      power = power * shift;
      factorial *= n;
    }
    const JetVector& d = jet[n + offset];
    const ParamPoly scale(RationalFunc(Rational(1) / factorial));
    x = x + (scale * d.x) * power;
    y = y + (scale * d.y) * power;
  }
  return {x, y};
}

EpsSeries constant_series(long c, int order) {
  return EpsSeries::constant(ParamPoly(c), order);
}

// The eps^4 coefficient of the condition for a constant b = c.
RationalFunc leading_coefficient_at(const JetData& jet, const Rational& c) {
  const EpsSeries b = EpsSeries::constant(ParamPoly(c), 0);
  const EpsSeries cond = condition_series(RationalFunc::variable(), b, jet, 4);
  const ParamPoly& lead = cond.coeff(4);
  if (!lead.is_scalar()) throw DerivationError("leading condition coefficient depends on curvature derivatives");
  return lead.scalar();
}

bool is_moebius_involution(const RationalFunc& f) {
  try {
    return f.compose(f) == RationalFunc::variable();
  } catch (const AlgebraError&) {
    return false;
  }
}

RationalFunc select_leading_root(const JetData& jet) {
  // Quadratic alpha c^2 + beta c + gamma through samples at c = 0, 1, 2; the
  // sample at c = 3 certifies the degree.
  const RationalFunc c0 = leading_coefficient_at(jet, 0);
  const RationalFunc c1 = leading_coefficient_at(jet, 1);
  const RationalFunc c2 = leading_coefficient_at(jet, 2);
  const RationalFunc c3 = leading_coefficient_at(jet, 3);
  const RationalFunc alpha = (c2 - RationalFunc(2L) * c1 + c0) / RationalFunc(2L);
  const RationalFunc beta = c1 - c0 - alpha;
  const RationalFunc gamma = c0;
  if (!(RationalFunc(9L) * alpha + RationalFunc(3L) * beta + gamma == c3)) {
    throw DerivationError("leading condition coefficient is not quadratic in b0");
  }
  std::vector<RationalFunc> candidates;
  if (alpha.is_zero()) {
    if (beta.is_zero()) throw DerivationError("leading condition coefficient does not involve b0");
    candidates.push_back(-gamma / beta);
  } else {
    const auto root = algebra::rf_sqrt(beta * beta - RationalFunc(4L) * alpha * gamma);
    if (!root) throw DerivationError("leading quadratic has no rational roots over Q(a)");
    candidates.push_back((-beta + *root) / (RationalFunc(2L) * alpha));
    candidates.push_back((-beta - *root) / (RationalFunc(2L) * alpha));
  }
  for (const RationalFunc& r : candidates) {
    Rational at_zero;
    try {
      at_zero = r.evaluate(0);
    } catch (const AlgebraError&) {
      continue;
    }
    if (at_zero == Rational(-1, 3) && is_moebius_involution(r)) return r;
  }
  throw DerivationError("no leading root satisfies b0(0) = -1/3 and b0(b0(a)) = a");
}

EpsSeries series_from(const std::vector<ParamPoly>& coeffs) {
  return EpsSeries(static_cast<int>(coeffs.size()) - 1, coeffs);
}

}  // namespace

JetData gamma_jet(int k_sign, int max_order) {
  if (k_sign != 1 && k_sign != -1) throw AlgebraError("k_sign must be +1 or -1");
  if (max_order < 2) throw AlgebraError("jet order must be at least 2");
  if (max_order - 3 > Monomial::kMaxGenerators) throw AlgebraError("jet order exceeds the supported generators");
  JetData jet;
  jet.k_sign = k_sign;
  jet.derivatives = {{ParamPoly(0L), ParamPoly(0L)}, {ParamPoly(1L), ParamPoly(0L)}, {ParamPoly(0L), ParamPoly(1L)}};
  // gamma^{(n+3)} = -sum_j C(n, j) k^{(j)} gamma^{(n+1-j)}
  for (int n = 0; n + 3 <= max_order; ++n) {
    JetVector next{ParamPoly(0L), ParamPoly(0L)};
    for (int j = 0; j <= n; ++j) {
      const ParamPoly w = ParamPoly(RationalFunc(-binomial(n, j))) * curvature_derivative(k_sign, j);
      const JetVector& g = jet.derivatives[static_cast<std::size_t>(n + 1 - j)];
      next.x = next.x + w * g.x;
      next.y = next.y + w * g.y;
    }
    jet.derivatives.push_back(std::move(next));
  }
  return jet;
}

SeriesVec3 curve_series(const JetData& jet, const EpsSeries& shift) {
  require_shift(shift);
  if (jet.max_order() < shift.order()) {
    throw AlgebraError("jet order " + std::to_string(jet.max_order()) + " is insufficient for truncation order " +
                       std::to_string(shift.order()));
  }
  auto [x, y] = taylor_sum(jet, shift, 0);
  return {std::move(x), std::move(y), constant_series(1, shift.order())};
}

SeriesVec3 tangent_series(const JetData& jet, const EpsSeries& shift) {
  require_shift(shift);
  if (jet.max_order() < shift.order() + 1) {
    throw AlgebraError("jet order " + std::to_string(jet.max_order()) + " is insufficient for tangent order " +
                       std::to_string(shift.order()));
  }
  auto [x, y] = taylor_sum(jet, shift, 1);
  return {std::move(x), std::move(y), EpsSeries(shift.order())};
}

EpsSeries condition_series(const RationalFunc& a, const EpsSeries& b_series, const JetData& jet, int order) {
  if (order < 4) throw AlgebraError("condition order must be at least 4");
  if (b_series.order() < order - 4) {
    throw AlgebraError("b series of order " + std::to_string(b_series.order()) + " cannot determine eps^" +
                       std::to_string(order));
  }
  // Each determinant starts at eps^2, so it is needed modulo eps^{order-1}.
  const int det_order = order - 2;
  const EpsSeries eps = EpsSeries::epsilon(det_order);
  const EpsSeries s_a = ParamPoly(a) * eps;
  const EpsSeries s_minus = -eps;
  const EpsSeries b = b_series.order() > order - 3 ? b_series.truncated(order - 3) : b_series.extended_with_zeros(order - 3);
  const EpsSeries s_b = -b.shift_up(1);

  const SeriesVec3 ga = curve_series(jet, s_a);
  const SeriesVec3 ta = tangent_series(jet, s_a);
  const SeriesVec3 g1 = curve_series(jet, eps);
  const SeriesVec3 t1 = tangent_series(jet, eps);
  const SeriesVec3 gm = curve_series(jet, s_minus);
  const SeriesVec3 gb = curve_series(jet, s_b);

  const EpsSeries d1 = algebra::series_det3(ga, ta, gb).shift_down(2);
  const EpsSeries d2 = algebra::series_det3(g1, t1, gm).shift_down(2);
  const EpsSeries d3 = algebra::series_det3(ga, ta, gm).shift_down(2);
  const EpsSeries d4 = algebra::series_det3(g1, t1, gb).shift_down(2);
  return (d1 * d2 - d3 * d4).shift_up(4);
}

EpsSeries DualityExpansion::as_series() const {
  return series_from(b);
}

DualityExpansion solve_duality_expansion(int k_sign, int condition_order) {
  if (condition_order < 4) throw AlgebraError("condition order must be at least 4");
  const JetData jet = gamma_jet(k_sign, condition_order - 1);
  const RationalFunc a = RationalFunc::variable();

  DualityExpansion out;
  out.k_sign = k_sign;
  out.condition_order = condition_order;
  out.b.push_back(ParamPoly(select_leading_root(jet)));

  for (int j = 1; j + 4 <= condition_order; ++j) {
    std::vector<ParamPoly> trial = out.b;
    trial.emplace_back(0L);
    const EpsSeries at_zero = condition_series(a, series_from(trial), jet, 4 + j);
    for (int i = 0; i < 4 + j; ++i) {
      if (!at_zero.coeff(i).is_zero()) {
        throw DerivationError("eps^" + std::to_string(i) + " coefficient did not vanish while solving for b" +
                              std::to_string(j));
      }
    }
    trial.back() = ParamPoly(1L);
    const EpsSeries at_one = condition_series(a, series_from(trial), jet, 4 + j);
    const ParamPoly constant = at_zero.coeff(4 + j);
    const ParamPoly slope = at_one.coeff(4 + j) - constant;
    if (!slope.is_scalar() || slope.is_zero()) {
      throw DerivationError("non-invertible linear coefficient for b" + std::to_string(j));
    }
    out.b.push_back(ParamPoly(RationalFunc(-1L) / slope.scalar()) * constant);
  }
  return out;
}

bool ResidualCertificate::all_zero() const {
  for (bool z : zero) {
    if (!z) return false;
  }
  return free_of_truncated_jet;
}

ResidualCertificate certify_expansion(const DualityExpansion& expansion) {
  const int order = expansion.condition_order;
  const JetData jet = gamma_jet(expansion.k_sign, order - 1);
  const EpsSeries residual = condition_series(RationalFunc::variable(), expansion.as_series(), jet, order);
  ResidualCertificate cert;
  cert.condition_order = order;
  cert.free_of_truncated_jet = true;
  const int truncated_generator = order - 4;
  for (int i = 0; i <= order; ++i) {
    cert.zero.push_back(residual.coeff(i).is_zero());
    if (truncated_generator >= 1 && residual.coeff(i).depends_on(truncated_generator)) {
      cert.free_of_truncated_jet = false;
    }
  }
  return cert;
}

InvolutionDefect involution_defect(const DualityExpansion& expansion) {
  constexpr int kOrder = 3;
  if (static_cast<int>(expansion.b.size()) <= kOrder) throw DerivationError("expansion must reach b3");
  const std::vector<ParamPoly> b(expansion.b.begin(), expansion.b.begin() + kOrder + 1);
  if (!b[0].is_scalar()) throw DerivationError("b0 must not depend on curvature derivatives");
  const RationalFunc b0 = b[0].scalar();

  const EpsSeries f = series_from(b);
  const EpsSeries increment = f - EpsSeries::constant(b[0], kOrder);
  EpsSeries ff(kOrder);
  for (int i = 0; i <= kOrder; ++i) {
    ff = ff + algebra::compose_shift(b[static_cast<std::size_t>(i)], b0, increment).shift_up(i).truncated(kOrder);
  }
  const EpsSeries defect = ff - EpsSeries::constant(ParamPoly(RationalFunc::variable()), kOrder);
  for (int i = 0; i < kOrder; ++i) {
    if (!defect.coeff(i).is_zero()) {
      throw DerivationError("f(f(a)) - a has a nonzero eps^" + std::to_string(i) + " coefficient");
    }
  }
  InvolutionDefect out;
  out.eps3_coefficient = defect.coeff(kOrder);
  out.p_degree = out.eps3_coefficient.degree_in(1);
  out.q_degree = out.eps3_coefficient.degree_in(2);
  return out;
}

PublishedForms published_forms() {
  const UniPoly a = UniPoly::variable();
  const UniPoly one = UniPoly::constant(1);
  const UniPoly am1 = a - one;
  const UniPoly ap1 = a + one;
  const UniPoly ap3 = a + UniPoly::constant(3);
  const UniPoly sq = am1 * am1 * ap1 * ap1;
  const ParamPoly p = ParamPoly::generator(1);

  PublishedForms out;
  out.b.emplace_back(-RationalFunc(UniPoly::constant(3) * a + one, ap3));
  out.b.emplace_back(0L);
  out.b.emplace_back(RationalFunc(UniPoly::constant(2) * sq, UniPoly::constant(3) * ap3 * ap3 * ap3));
  const UniPoly quad = UniPoly({5, 9, 2});
  out.b.push_back(ParamPoly(RationalFunc(UniPoly::constant(2) * sq * quad, UniPoly::constant(15) * ap3 * ap3 * ap3 * ap3)) *
                  p);
  const UniPoly quad2 = UniPoly({1, 6, 1});
  out.defect = ParamPoly(-RationalFunc(sq * quad2, UniPoly::constant(24) * ap3 * ap3)) * p;
  return out;
}

std::string canonical_report(const DualityExpansion& expansion, const InvolutionDefect& defect) {
  std::ostringstream os;
  for (std::size_t i = 0; i < expansion.b.size(); ++i) os << "b" << i << " = " << expansion.b[i].str() << "\n";
  os << "ffa_eps3 = " << defect.eps3_coefficient.str() << "\n";
  return os.str();
}

}  // namespace conics::symbolic
