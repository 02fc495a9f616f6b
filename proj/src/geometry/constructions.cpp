#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "conics/errors.hpp"
#include "conics/oval_geometry.hpp"

namespace conics::geometry {

namespace {

double det2(const Vec2& u, const Vec2& v) {
  return u.x() * v.y() - u.y() * v.x();
}

// Two simple roots of n . gamma'(t) on a closed oval: the parameters where the
// support lines with normal n touch.
std::pair<double, double> support_params(const Oval& oval, const Vec2& n, const RootTolerances& tol) {
  auto g = [&](double t) { return n.dot(oval.tangent(t)); };
  auto dg = [&](double t) { return n.dot(oval.jet(t, 2)[2]); };
  auto roots = find_roots(g, dg, 0.0, kTwoPi, tol.samples, true, tol.bracket_width);
  if (roots.size() != 2) {
    std::ostringstream os;
    os << "expected two support points, found " << roots.size();
    throw GeometryError(os.str());
  }
  return {oval.wrap(roots[0]), oval.wrap(roots[1])};
}

}  // namespace

Vec3 lift(const PlanePoint& p) {
  return {p.x(), p.y(), 1.0};
}

ProjLine ProjLine::normalized() const {
  const double n = std::hypot(l.x(), l.y());
  if (n == 0.0) throw GeometryError("line at infinity has no affine normalization");
  return {l / n};
}

ProjLine line_join(const PlanePoint& p1, const PlanePoint& p2) {
  const double scale = std::max({1.0, p1.norm(), p2.norm()});
  if ((p1 - p2).norm() <= 1e-15 * scale) throw GeometryError("line_join of coincident points");
  return ProjLine{lift(p1).cross(lift(p2))}.normalized();
}

ProjLine line_through(const PlanePoint& p, const Vec2& d) {
  if (d.norm() == 0.0) throw GeometryError("line direction must be nonzero");
  return ProjLine{lift(p).cross(Vec3(d.x(), d.y(), 0.0))}.normalized();
}

MeetResult line_meet(const ProjLine& l1, const ProjLine& l2) {
  const Vec3 a = l1.l / l1.l.norm();
  const Vec3 b = l2.l / l2.l.norm();
  const Vec3 m = a.cross(b);
  const double n = m.norm();
  if (n <= 1e-15) throw GeometryError("line_meet of identical lines");
  if (std::abs(m.z()) <= 1e-14 * n) {
    return PointAtInfinity{Vec2(m.x(), m.y()).normalized()};
  }
  return PlanePoint(m.x() / m.z(), m.y() / m.z());
}

double point_line_distance(const PlanePoint& p, const ProjLine& line) {
  return std::abs(line.normalized().value(p));
}

Vec2 canonical_direction(const Vec2& d) {
  if (d.norm() == 0.0) throw GeometryError("zero direction");
  Vec2 u = d.normalized();
  if (u.y() < 0.0 || (u.y() == 0.0 && u.x() < 0.0)) u = -u;
  return u;
}

double circle_distance(double s, double t) {
  return std::abs(std::remainder(s - t, kTwoPi));
}

Intersections intersect_line_oval(const Oval& oval, const ProjLine& line, const RootTolerances& tol) {
  const ProjLine l = line.normalized();
  const Vec2 n(l.l.x(), l.l.y());
  auto g = [&](double t) { return l.value(oval.point(t)); };
  auto dg = [&](double t) { return n.dot(oval.tangent(t)); };
  const double band = tol.tangency_band * oval.scale();
  Intersections out;
  if (!oval.is_closed()) {
    const auto [lo, hi] = oval.domain();
    out.params = find_roots(g, dg, lo, hi, tol.samples, false, tol.bracket_width);
    return out;
  }
  // g is monotone between the two support points, so each arc holds at most one root.
  auto [s1, s2] = support_params(oval, n, tol);
  double t_min = s1;
  double t_max = s2;
  if (g(t_min) > g(t_max)) std::swap(t_min, t_max);
  const double g_min = g(t_min);
  const double g_max = g(t_max);
  if (g_min > band || g_max < -band) return out;
  if (std::abs(g_min) <= band || std::abs(g_max) <= band) {
    out.tangent = true;
    out.params.push_back(std::abs(g_min) <= band ? t_min : t_max);
    return out;
  }
  double up_hi = t_max < t_min ? t_max + kTwoPi : t_max;
  double down_hi = t_min < t_max ? t_min + kTwoPi : t_min;
  out.params.push_back(oval.wrap(solve_bracketed(g, dg, t_min, up_hi, tol.bracket_width)));
  out.params.push_back(oval.wrap(solve_bracketed(g, dg, t_max, down_hi, tol.bracket_width)));
  std::sort(out.params.begin(), out.params.end());
  return out;
}

namespace {

enum class PointSide { interior, on_curve, exterior };

// h(t) = det(gamma(t) - a, gamma'(t)) is positive everywhere iff a is inside a
// counterclockwise oval, and negative exactly on the arc visible from an
// exterior point.
struct Visibility {
  PointSide side;
  double t_min;  // minimizer of h
  double lo;
  double hi;  // sampled neighbours of t_min
};

Visibility classify(const Oval& oval, const PlanePoint& a, int samples) {
  auto h = [&](double t) {
    const Jet j = oval.jet(t, 1);
    return det2(j[0] - a, j[1]);
  };
  int best = 0;
  double best_v = h(0.0);
  const double step = kTwoPi / samples;
  for (int i = 1; i < samples; ++i) {
    const double v = h(i * step);
    if (v < best_v) {
      best_v = v;
      best = i;
    }
  }
  const double lo = (best - 1) * step;
  const double hi = (best + 1) * step;
  const auto r = boost::math::tools::brent_find_minima(h, lo, hi, 60);
  const double scale = oval.scale();
  const double band = 1e-12 * scale * scale;
  PointSide side = PointSide::interior;
  if (r.second < -band) {
    side = PointSide::exterior;
  } else if (r.second <= band) {
    side = PointSide::on_curve;
  }
  return {side, r.first, lo, hi};
}

}  // namespace

bool point_is_interior(const Oval& oval, const PlanePoint& a) {
  if (!oval.is_closed()) throw GeometryError("interior test needs a closed oval");
  return classify(oval, a, 256).side == PointSide::interior;
}

bool point_is_exterior(const Oval& oval, const PlanePoint& a) {
  if (!oval.is_closed()) throw GeometryError("exterior test needs a closed oval");
  return classify(oval, a, 256).side == PointSide::exterior;
}

std::pair<double, double> tangents_from_point(const Oval& oval, const PlanePoint& a, const RootTolerances& tol) {
  auto h = [&](double t) {
    const Jet j = oval.jet(t, 1);
    return det2(j[0] - a, j[1]);
  };
  auto dh = [&](double t) {
    const Jet j = oval.jet(t, 2);
    return det2(j[0] - a, j[2]);
  };
  if (!oval.is_closed()) {
    const auto [lo, hi] = oval.domain();
    auto roots = find_roots(h, dh, lo, hi, tol.samples, false, tol.bracket_width);
    if (roots.size() != 2) throw GeometryError("point does not see exactly two tangents to the arc");
    return {roots[0], roots[1]};
  }
  const Visibility vis = classify(oval, a, tol.samples);
  if (vis.side != PointSide::exterior) {
    throw GeometryError(vis.side == PointSide::interior ? "point is inside the oval"
                                                        : "point lies on the oval");
  }
  // h < 0 on the visible arc around t_min and > 0 elsewhere; walk outwards to
  // the sign changes.
  const double step = kTwoPi / tol.samples;
  double lo = vis.t_min;
  double hi = vis.t_min;
  for (int i = 0; i < tol.samples && h(lo) < 0.0; ++i) lo -= step;
  for (int i = 0; i < tol.samples && h(hi) < 0.0; ++i) hi += step;
  const double t1 = oval.wrap(solve_bracketed(h, dh, lo, std::min(lo + step, vis.t_min), tol.bracket_width));
  const double t2 = oval.wrap(solve_bracketed(h, dh, std::max(hi - step, vis.t_min), hi, tol.bracket_width));
  return {std::min(t1, t2), std::max(t1, t2)};
}

ProjLine chord_of_contact(const Oval& oval, const PlanePoint& a, const RootTolerances& tol) {
  const auto [t1, t2] = tangents_from_point(oval, a, tol);
  return line_join(oval.point(t1), oval.point(t2));
}

double affine_curvature(const Oval& oval, double t) {
  const Jet j = oval.jet(t, 4);
  const double d12 = det2(j[1], j[2]);
  if (!(d12 > 0.0)) throw GeometryError("degenerate jet: det(gamma', gamma'') <= 0");
  const double d13 = det2(j[1], j[3]);
  const double d14 = det2(j[1], j[4]);
  const double d23 = det2(j[2], j[3]);
  return d23 / std::pow(d12, 5.0 / 3.0) + (3.0 * d12 * (d14 + d23) - 5.0 * d13 * d13) / (9.0 * std::pow(d12, 8.0 / 3.0));
}

Chord affine_diameter(const Oval& oval, const Vec2& u, const RootTolerances& tol) {
  if (!oval.is_closed()) throw GeometryError("affine diameter needs a closed oval");
  if (u.norm() == 0.0) throw GeometryError("zero direction");
  const Vec2 n(-u.y(), u.x());
  const auto [t1, t2] = support_params(oval, n.normalized(), tol);
  Chord c;
  c.t1 = std::min(t1, t2);
  c.t2 = std::max(t1, t2);
  c.p1 = oval.point(c.t1);
  c.p2 = oval.point(c.t2);
  return c;
}

Vec2 conjugate_direction(const Oval& oval, const Vec2& u, const RootTolerances& tol) {
  const Chord c = affine_diameter(oval, u, tol);
  return canonical_direction(c.p2 - c.p1);
}

std::pair<double, double> support_points(const Oval& oval, const Vec2& u, const RootTolerances& tol) {
  const Chord c = affine_diameter(oval, u, tol);
  return {c.t1, c.t2};
}

}  // namespace conics::geometry
