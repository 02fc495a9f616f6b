#include <algorithm>
#include <cmath>
#include <sstream>

#include "conics/errors.hpp"
#include "conics/oval_geometry.hpp"

namespace conics::geometry {

namespace {

constexpr double kHalfPi = 1.5707963267948966192313216916398;
constexpr int kTaylorOrder = 36;
constexpr double kGermStep = 1.0 / 32.0;

// (cos(x + n pi/2), sin(x + n pi/2)) without accumulating rounding in n pi/2.
Vec2 quarter_turn(double c, double s, int n) {
  switch (((n % 4) + 4) % 4) {
    case 0:
      return {c, s};
    case 1:
      return {-s, c};
    case 2:
      return {-c, -s};
    default:
      return {s, -c};
  }
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// n-th derivative of h(theta) = h0 + sum (c cos k theta + s sin k theta).
double support_derivative(const FourierSupport& f, double theta, int n) {
  double v = n == 0 ? f.h0 : 0.0;
  for (const auto& h : f.harmonics) {
    const double kt = h.k * theta;
    const Vec2 cs = quarter_turn(std::cos(kt), std::sin(kt), n);
    v += std::pow(static_cast<double>(h.k), n) * (h.cos_coeff * cs.x() + h.sin_coeff * cs.y());
  }
  return v;
}

double det2(const Vec2& u, const Vec2& v) {
  return u.x() * v.y() - u.y() * v.x();
}

// Taylor coefficients of k around c.
std::vector<double> shifted_poly(const std::vector<double>& k, double c) {
  std::vector<double> out(k.size(), 0.0);
  for (std::size_t j = 0; j < k.size(); ++j) {
    double acc = 0.0;
    for (std::size_t i = k.size(); i-- > j;) acc = acc * c + k[i] * binomial(static_cast<int>(i), static_cast<int>(j));
    out[j] = acc;
  }
  return out;
}

// gamma''' = -k gamma' in coefficient form:
// (n+3)(n+2)(n+1) g_{n+3} = -sum_j kappa_j (n-j+1) g_{n-j+1}.
detail::TaylorSegment make_segment(double t0, const Vec2& g0, const Vec2& g1, const Vec2& g2,
                                   const std::vector<double>& k_poly) {
  const std::vector<double> kappa = shifted_poly(k_poly, t0);
  detail::TaylorSegment seg;
  seg.t0 = t0;
  seg.coeffs.assign(kTaylorOrder + 1, Vec2::Zero());
  seg.coeffs[0] = g0;
  seg.coeffs[1] = g1;
  seg.coeffs[2] = 0.5 * g2;
  for (int n = 0; n + 3 <= kTaylorOrder; ++n) {
    Vec2 acc = Vec2::Zero();
    for (int j = 0; j <= n && j < static_cast<int>(kappa.size()); ++j) {
      acc += kappa[static_cast<std::size_t>(j)] * (n - j + 1) * seg.coeffs[static_cast<std::size_t>(n - j + 1)];
    }
    seg.coeffs[static_cast<std::size_t>(n + 3)] = -acc / ((n + 3.0) * (n + 2.0) * (n + 1.0));
  }
  return seg;
}

Jet segment_jet(const detail::TaylorSegment& seg, double t, int order) {
  Jet jet;
  jet.fill(Vec2::Zero());
  const double s = t - seg.t0;
  for (int m = 0; m <= order; ++m) {
    Vec2 acc = Vec2::Zero();
    for (int n = kTaylorOrder; n >= m; --n) {
      double falling = 1.0;
      for (int i = 0; i < m; ++i) falling *= n - i;
      acc = acc * s + falling * seg.coeffs[static_cast<std::size_t>(n)];
    }
    jet[static_cast<std::size_t>(m)] = acc;
  }
  return jet;
}

bool finite(double x) {
  return std::isfinite(x);
}

}  // namespace

std::shared_ptr<const Oval> Oval::ellipse(double A, double B) {
  return from_variant(Ellipse{A, B});
}

std::shared_ptr<const Oval> Oval::fourier_support(double h0, std::vector<Harmonic> harmonics) {
  return from_variant(FourierSupport{h0, std::move(harmonics)});
}

std::shared_ptr<const Oval> Oval::ode_germ(std::vector<double> k_poly, double t_min, double t_max) {
  return from_variant(OdeGerm{std::move(k_poly), t_min, t_max});
}

std::shared_ptr<const Oval> Oval::from_variant(const Variant& v) {
  std::shared_ptr<Oval> oval(new Oval());
  oval->variant_ = v;
  oval->validate();
  return oval;
}

std::string Oval::kind() const {
  switch (variant_.index()) {
    case 0:
      return "ellipse";
    case 1:
      return "fourier_support";
    default:
      return "ode_germ";
  }
}

bool Oval::is_closed() const {
  return !std::holds_alternative<OdeGerm>(variant_);
}

std::pair<double, double> Oval::domain() const {
  if (const auto* g = std::get_if<OdeGerm>(&variant_)) return {g->t_min, g->t_max};
  return {0.0, kTwoPi};
}

void Oval::validate() {
  if (const auto* e = std::get_if<Ellipse>(&variant_)) {
    if (!(e->A > 0.0 && e->B > 0.0 && finite(e->A) && finite(e->B))) {
      throw GeometryError("ellipse semi-axes must be positive and finite");
    }
    scale_ = std::max({1.0, e->A, e->B});
    return;
  }
  if (const auto* f = std::get_if<FourierSupport>(&variant_)) {
    if (!finite(f->h0)) throw GeometryError("fourier_support h0 must be finite");
    for (const auto& h : f->harmonics) {
      if (h.k < 1) throw GeometryError("fourier_support harmonic index must be >= 1");
      if (!finite(h.cos_coeff) || !finite(h.sin_coeff)) {
        throw GeometryError("fourier_support coefficients must be finite");
      }
    }
    double r = 0.0;
    for (int i = 0; i < 1024; ++i) {
      const double th = kTwoPi * i / 1024.0;
      const double rho = support_derivative(*f, th, 0) + support_derivative(*f, th, 2);
      if (!(rho > 0.0)) {
        std::ostringstream os;
        os << "fourier_support is not strictly convex: h + h'' = " << rho << " at theta = " << th;
        throw GeometryError(os.str());
      }
      r = std::max(r, point(th).norm());
    }
    scale_ = std::max(1.0, r);
    return;
  }
  const auto& g = std::get<OdeGerm>(variant_);
  if (g.k_poly.empty()) throw GeometryError("ode_germ needs at least one curvature coefficient");
  for (double c : g.k_poly) {
    if (!finite(c)) throw GeometryError("ode_germ curvature coefficients must be finite");
  }
  if (!(g.t_min <= 0.0 && 0.0 <= g.t_max && g.t_min < g.t_max) || !finite(g.t_min) || !finite(g.t_max)) {
    throw GeometryError("ode_germ t_range must be finite and contain 0");
  }
  // Nodes every kGermStep; each node's series is evaluated within half a step.
  segment_width_ = kGermStep;
  const int n_pos = static_cast<int>(std::ceil(g.t_max / kGermStep));
  const int n_neg = static_cast<int>(std::ceil(-g.t_min / kGermStep));
  std::vector<detail::TaylorSegment> pos;
  std::vector<detail::TaylorSegment> neg;
  pos.push_back(make_segment(0.0, Vec2(0, 0), Vec2(1, 0), Vec2(0, 1), g.k_poly));
  for (int i = 1; i <= n_pos; ++i) {
    const Jet j = segment_jet(pos.back(), i * kGermStep, 2);
    pos.push_back(make_segment(i * kGermStep, j[0], j[1], j[2], g.k_poly));
  }
  neg.push_back(pos.front());
  for (int i = 1; i <= n_neg; ++i) {
    const Jet j = segment_jet(neg.back(), -i * kGermStep, 2);
    neg.push_back(make_segment(-i * kGermStep, j[0], j[1], j[2], g.k_poly));
  }
  segments_.assign(neg.rbegin(), neg.rend());
  segments_.insert(segments_.end(), pos.begin() + 1, pos.end());
  double r = 0.0;
  for (int i = 0; i <= 256; ++i) {
    const double t = g.t_min + (g.t_max - g.t_min) * i / 256.0;
    const Jet j = jet(t, 2);
    if (!(det2(j[1], j[2]) > 0.0)) throw GeometryError("ode_germ lost convexity on its range");
    r = std::max(r, j[0].norm());
  }
  scale_ = std::max(1.0, r);
}

Jet Oval::germ_jet(double t, int order) const {
  const auto& g = std::get<OdeGerm>(variant_);
  const double slack = 1e-12 * std::max(1.0, g.t_max - g.t_min);
  if (!(t >= g.t_min - slack && t <= g.t_max + slack)) {
    std::ostringstream os;
    os << "parameter " << t << " outside ode_germ range [" << g.t_min << ", " << g.t_max << "]";
    throw GeometryError(os.str());
  }
  const double first = segments_.front().t0;
  long idx = std::lround((t - first) / segment_width_);
  idx = std::clamp(idx, 0L, static_cast<long>(segments_.size()) - 1);
  return segment_jet(segments_[static_cast<std::size_t>(idx)], t, order);
}

Jet Oval::jet(double t, int order) const {
  if (order < 0 || order > kMaxJetOrder) throw GeometryError("jet order must be in 0..5");
  if (!std::isfinite(t)) throw GeometryError("curve parameter must be finite");
  Jet out;
  out.fill(Vec2::Zero());
  if (const auto* e = std::get_if<Ellipse>(&variant_)) {
    const double c = std::cos(t);
    const double s = std::sin(t);
    for (int n = 0; n <= order; ++n) {
      const Vec2 q = quarter_turn(c, s, n);
      out[static_cast<std::size_t>(n)] = Vec2(e->A * q.x(), e->B * q.y());
    }
    return out;
  }
  if (const auto* f = std::get_if<FourierSupport>(&variant_)) {
    // gamma = h n + h' n_perp and gamma' = (h + h'') n_perp; higher orders by Leibniz.
    const double c = std::cos(t);
    const double s = std::sin(t);
    std::array<double, kMaxJetOrder + 2> h{};
    for (int n = 0; n <= order + 1; ++n) h[static_cast<std::size_t>(n)] = support_derivative(*f, t, n);
    out[0] = h[0] * Vec2(c, s) + h[1] * Vec2(-s, c);
    for (int m = 1; m <= order; ++m) {
      Vec2 acc = Vec2::Zero();
      for (int i = 0; i <= m - 1; ++i) {
        const double rho_i = h[static_cast<std::size_t>(i)] + support_derivative(*f, t, i + 2);
        acc += binomial(m - 1, i) * rho_i * quarter_turn(c, s, 1 + (m - 1 - i));
      }
      out[static_cast<std::size_t>(m)] = acc;
    }
    return out;
  }
  return germ_jet(t, order);
}

Vec2 Oval::point(double t) const {
  return jet(t, 0)[0];
}

Vec2 Oval::tangent(double t) const {
  return jet(t, 1)[1];
}

double Oval::wrap(double t) const {
  if (!is_closed()) return t;
  double r = std::fmod(t, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

bool Oval::is_centrally_symmetric(double tol) const {
  if (!is_closed()) return false;
  for (int i = 0; i < 256; ++i) {
    const double t = kTwoPi * i / 256.0;
    if ((point(t + kHalfPi * 2.0) + point(t)).norm() > tol * scale_) return false;
  }
  return true;
}

std::vector<Vec2> eval_jet(const Oval& oval, double t, int order) {
  const Jet j = oval.jet(t, order);
  return {j.begin(), j.begin() + order + 1};
}

}  // namespace conics::geometry
