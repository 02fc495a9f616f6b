#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <sstream>

#include "conics/errors.hpp"
#include "conics/experiments.hpp"
#include "conics/symbolic_verifier.hpp"

namespace conics::experiments {

using geometry::circle_distance;
using geometry::kTwoPi;
using geometry::line_join;
using geometry::line_meet;
using geometry::ProjLine;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double det2(const Vec2& u, const Vec2& v) {
  return u.x() * v.y() - u.y() * v.x();
}

ProjLine tangent_line(const Oval& oval, double t) {
  const geometry::Jet j = oval.jet(t, 1);
  return geometry::line_through(j[0], j[1]);
}

PlanePoint finite_meet(const ProjLine& l1, const ProjLine& l2, const char* what) {
  const auto m = line_meet(l1, l2);
  if (const auto* p = std::get_if<PlanePoint>(&m)) return *p;
  throw GeometryError(std::string(what) + " is at infinity");
}

double signed_gap(double y, double x) {
  return std::remainder(y - x, kTwoPi);
}

}  // namespace

IncidenceRecord incidence_defect(const Oval& oval, const PlanePoint& A, double selector) {
  if (!(selector > -1.0 && selector < 1.0)) throw GeometryError("selector must lie in (-1, 1)");
  IncidenceRecord rec;
  rec.curve = oval.kind();
  rec.A = A;
  rec.selector = selector;
  rec.tangency_A = geometry::tangents_from_point(oval, A);
  double t1 = rec.tangency_A.first;
  double t2 = rec.tangency_A.second;
  if (oval.is_closed()) {
    // Keep the arc facing A, where det(gamma - A, gamma') < 0.
    const double mid = 0.5 * (t1 + t2);
    const geometry::Jet j = oval.jet(mid, 1);
    if (det2(j[0] - A, j[1]) > 0.0) {
      std::swap(t1, t2);
      t2 += kTwoPi;
    }
  }
  const PlanePoint e1 = oval.point(t1);
  const PlanePoint e2 = oval.point(t2);
  rec.chord_length = (e2 - e1).norm();
  const ProjLine a = line_join(e1, e2);
  const double t_b = 0.5 * (t1 + t2) + selector * 0.5 * (t2 - t1);
  rec.B = finite_meet(tangent_line(oval, t_b), a, "B");
  rec.tangency_B = geometry::tangents_from_point(oval, rec.B);
  const ProjLine b = line_join(oval.point(rec.tangency_B.first), oval.point(rec.tangency_B.second));
  rec.defect = geometry::point_line_distance(A, b) / rec.chord_length;
  return rec;
}

double germ_chord_map(const Oval& germ, double a, double eps) {
  if (germ.is_closed()) throw GeometryError("chord map needs an ode_germ curve");
  const auto [lo, hi] = germ.domain();
  if (-1.5 * eps < lo || 1.5 * eps > hi) throw GeometryError("construction leaves the germ's range");
  const PlanePoint P = finite_meet(tangent_line(germ, a * eps), tangent_line(germ, eps), "tangent meet");
  const ProjLine L = line_join(P, germ.point(-eps));
  auto g = [&](double s) {
    const geometry::Jet j = germ.jet(s, 1);
    return std::pair<double, double>(L.value(j[0]), L.l.x() * j[1].x() + L.l.y() * j[1].y());
  };
  const double s_lo = -eps * (1.0 - 1e-3);
  const double s_hi = 1.5 * eps;
  if ((g(s_lo).first < 0.0) == (g(s_hi).first < 0.0)) throw GeometryError("fourth point not bracketed");
  const double s = geometry::solve_bracketed_fdf(g, s_lo, s_hi, 1e-18);
  return -s / eps;
}

double predicted_defect(int k_sign, double a, double p) {
  static std::mutex mu;
  static std::map<int, symbolic::InvolutionDefect> cache;
  symbolic::InvolutionDefect d;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(k_sign);
    if (it == cache.end()) {
      it = cache.emplace(k_sign, symbolic::involution_defect(symbolic::solve_duality_expansion(k_sign))).first;
    }
    d = it->second;
  }
  const algebra::Rational ar(a);
  double total = 0.0;
  for (const auto& [m, c] : d.eps3_coefficient.terms()) {
    total += c.evaluate(ar).get_d() * std::pow(p, m.degree(1));
  }
  return total;
}

ScalingFit epsilon_scaling_fit(const Oval& germ, double a, const std::vector<double>& epsilons) {
  const auto* g = std::get_if<geometry::OdeGerm>(&germ.variant());
  if (g == nullptr) throw GeometryError("scaling fit needs an ode_germ curve");
  if (epsilons.size() < 3) throw GeometryError("scaling fit needs at least three epsilons");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0) || (i > 0 && !(epsilons[i] < epsilons[i - 1]))) {
      throw GeometryError("epsilons must be positive and strictly decreasing");
    }
  }
  ScalingFit fit;
  fit.a = a;
  fit.epsilons = epsilons;
  fit.k0 = g->k_poly[0];
  fit.p = g->k_poly.size() > 1 ? g->k_poly[1] : 0.0;
  fit.q = g->k_poly.size() > 2 ? 2.0 * g->k_poly[2] : 0.0;
  for (double eps : epsilons) {
    const double b = germ_chord_map(germ, a, eps);
    const double ffa = germ_chord_map(germ, b, eps);
    fit.measured.push_back((ffa - a) / (eps * eps * eps));
  }
  // Neville's scheme for the interpolating polynomial in eps, evaluated at 0.
  std::vector<double> t = fit.measured;
  const std::size_t n = t.size();
  for (std::size_t m = 1; m < n; ++m) {
    for (std::size_t i = 0; i + m < n; ++i) {
      const double ei = epsilons[i];
      const double em = epsilons[i + m];
      t[i] = (em * t[i] - ei * t[i + 1]) / (em - ei);
    }
  }
  fit.extrapolated = t[0];
  if (std::abs(fit.k0) < 1e-12) {
    fit.predicted = kNaN;
    fit.relative_error = kNaN;
    return fit;
  }
  // The chord construction is affine invariant, so the coefficient depends on
  // k(0) only through its sign.
  fit.predicted = predicted_defect(fit.k0 > 0.0 ? 1 : -1, a, fit.p);
  fit.relative_error = fit.predicted == 0.0 ? std::abs(fit.extrapolated)
                                            : std::abs(fit.extrapolated - fit.predicted) / std::abs(fit.predicted);
  return fit;
}

double DefectReport::value(const std::string& key) const {
  for (const auto& [k, v] : values) {
    if (k == key) return v;
  }
  throw Error("no value named " + key + " in " + name);
}

ParallelogramResult parallelogram_test(const OvalPtr& oval, const Vec2& u_in, int samples) {
  if (!oval->is_closed() || !oval->is_centrally_symmetric(1e-12)) {
    throw GeometryError("parallelogram test needs an oval symmetric about the origin");
  }
  if (samples < 4) throw GeometryError("parallelogram test needs at least 4 samples");
  ParallelogramResult res;
  res.u = geometry::canonical_direction(u_in);
  res.v = geometry::conjugate_direction(*oval, res.u);
  const auto fu = dynamics::Involution::parallel(oval, res.u);
  const auto fv = dynamics::Involution::parallel(oval, res.v);
  const geometry::Chord diam_u = geometry::affine_diameter(*oval, res.u);
  const geometry::Chord diam_v = geometry::affine_diameter(*oval, res.v);
  const ProjLine line_u = line_join(diam_u.p1, diam_u.p2);
  const ProjLine line_v = line_join(diam_v.p1, diam_v.p2);

  auto closure = [&](double x) { return signed_gap(fu(fv(fu(fv(x)))), x); };
  std::vector<double> starts;
  std::vector<double> xs(static_cast<std::size_t>(samples) + 1);
  std::vector<double> cs(xs.size());
  for (int i = 0; i <= samples; ++i) {
    xs[static_cast<std::size_t>(i)] = kTwoPi * i / samples;
    cs[static_cast<std::size_t>(i)] = i == samples ? cs[0] : closure(xs[static_cast<std::size_t>(i)]);
  }
  for (int i = 0; i < samples; ++i) {
    const double c0 = cs[static_cast<std::size_t>(i)];
    const double c1 = cs[static_cast<std::size_t>(i) + 1];
    if (std::abs(c0) <= 1e-11) {
      starts.push_back(xs[static_cast<std::size_t>(i)]);
      continue;
    }
    if ((c0 < 0.0) == (c1 < 0.0) || std::abs(c1) <= 1e-11 || std::abs(c0) > 1.0 || std::abs(c1) > 1.0) continue;
    double lo = xs[static_cast<std::size_t>(i)];
    double hi = xs[static_cast<std::size_t>(i) + 1];
    double flo = c0;
    for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = closure(mid);
      if ((fm < 0.0) == (flo < 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    starts.push_back(0.5 * (lo + hi));
  }

  double center = 0.0;
  double midpoint = 0.0;
  double closing = 0.0;
  int degenerate = 0;
  for (double x0 : starts) {
    Parallelogram q;
    q.params[0] = x0;
    q.params[1] = fv(x0);
    q.params[2] = fu(q.params[1]);
    q.params[3] = fv(q.params[2]);
    for (int k = 0; k < 4; ++k) q.vertices[static_cast<std::size_t>(k)] = oval->point(q.params[static_cast<std::size_t>(k)]);
    // Closings through a support point collapse to a segment.
    double shortest = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 4; ++k) {
      shortest = std::min(shortest, (q.vertices[static_cast<std::size_t>(k)] - q.vertices[static_cast<std::size_t>((k + 1) % 4)]).norm());
    }
    if (shortest < 1e-6 * oval->scale()) {
      ++degenerate;
      continue;
    }
    q.closure_defect = circle_distance(fu(q.params[3]), x0);
    Vec2 c = Vec2::Zero();
    for (const auto& p : q.vertices) c += p;
    q.center_offset = (0.25 * c).norm();
    // Sides 0-1 and 2-3 are parallel to v, sides 1-2 and 3-0 to u.
    for (int k = 0; k < 4; ++k) {
      const PlanePoint mid = 0.5 * (q.vertices[static_cast<std::size_t>(k)] + q.vertices[static_cast<std::size_t>((k + 1) % 4)]);
      const ProjLine& diam = (k % 2 == 0) ? line_v : line_u;
      q.midpoint_defect = std::max(q.midpoint_defect, std::abs(diam.value(mid)));
    }
    center = std::max(center, q.center_offset);
    midpoint = std::max(midpoint, q.midpoint_defect);
    closing = std::max(closing, q.closure_defect);
    res.quads.push_back(q);
  }
  res.report.name = "parallelogram_test";
  const bool none = res.quads.empty();
  res.report.values = {{"center_offset", none ? kNaN : center},
                       {"midpoint_defect", none ? kNaN : midpoint},
                       {"closure_defect", none ? kNaN : closing},
                       {"count", static_cast<double>(res.quads.size())},
                       {"degenerate", static_cast<double>(degenerate)}};
  std::ostringstream os;
  os.precision(17);
  os << res.v.x() << " " << res.v.y();
  res.report.metadata = {{"curve", oval->kind()}, {"samples", std::to_string(samples)}, {"conjugate_direction", os.str()}};
  return res;
}

}  // namespace conics::experiments
