#include <algorithm>
#include <cmath>
#include <sstream>

#include "conics/circle_dynamics.hpp"
#include "conics/errors.hpp"

namespace conics::dynamics {

using geometry::kTwoPi;

namespace {

constexpr double kFixedSnap = 1e-13;

double wrap2pi(double t) {
  double r = std::fmod(t, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

Vec3 lift_tangent(const Vec2& v) {
  return {v.x(), v.y(), 0.0};
}

double det3(const Vec3& a, const Vec3& b, const Vec3& c) {
  return a.cross(b).dot(c);
}

Involution::Lifted normalize(double v, long long turns) {
  const double j = std::floor(v / kTwoPi);
  double x = v - j * kTwoPi;
  long long k = turns + static_cast<long long>(j);
  if (x >= kTwoPi) {
    x -= kTwoPi;
    ++k;
  }
  if (x < 0.0) x = 0.0;
  return {x, k};
}

}  // namespace

Involution Involution::parallel(OvalPtr oval, const Vec2& u) {
  if (!oval || !oval->is_closed()) throw DynamicsError("involution needs a closed oval");
  if (!(u.norm() > 0.0)) throw DynamicsError("involution direction must be nonzero");
  Involution f;
  f.kind_ = Kind::parallel;
  f.oval_ = std::move(oval);
  const Vec2 d = u.normalized();
  f.center_ = Vec3(d.x(), d.y(), 0.0);
  f.init();
  return f;
}

Involution Involution::pencil(OvalPtr oval, const PlanePoint& p) {
  if (!oval || !oval->is_closed()) throw DynamicsError("involution needs a closed oval");
  Involution f;
  f.kind_ = Kind::pencil;
  f.oval_ = std::move(oval);
  f.center_ = geometry::lift(p);
  f.init();
  return f;
}

void Involution::init() {
  if (kind_ == Kind::parallel) {
    const auto [t1, t2] = geometry::support_points(*oval_, Vec2(center_.x(), center_.y()));
    fixed_ = {t1, t2};
    return;
  }
  const PlanePoint p(center_.x(), center_.y());
  if (geometry::point_is_interior(*oval_, p)) {
    interior_ = true;
    return;
  }
  if (!geometry::point_is_exterior(*oval_, p)) throw DynamicsError("pencil center lies on the oval");
  const auto [t1, t2] = geometry::tangents_from_point(*oval_, p);
  fixed_ = {t1, t2};
}

std::string Involution::describe() const {
  std::ostringstream os;
  os.precision(17);
  if (kind_ == Kind::parallel) {
    os << "parallel(" << center_.x() << "," << center_.y() << ")";
  } else {
    os << "pencil(" << center_.x() << "," << center_.y() << ")";
  }
  return os.str();
}

double Involution::operator()(double t) const {
  t = wrap2pi(t);
  const Vec3 line = center_.cross(geometry::lift(oval_->point(t)));
  const double n = std::hypot(line.x(), line.y());
  const Vec3 l = line / n;
  auto g = [&](double s) {
    const geometry::Jet j = oval_->jet(s, 1);
    return std::pair<double, double>(l.x() * j[0].x() + l.y() * j[0].y() + l.z(), l.x() * j[1].x() + l.y() * j[1].y());
  };
  if (interior_) {
    const double delta = 1e-9;
    return wrap2pi(geometry::solve_bracketed_fdf(g, t + delta, t + kTwoPi - delta));
  }
  const double t1 = fixed_[0];
  const double t2 = fixed_[1];
  if (geometry::circle_distance(t, t1) < kFixedSnap) return t1;
  if (geometry::circle_distance(t, t2) < kFixedSnap) return t2;
  // The involution swaps the two arcs cut out by its fixed points.
  if (t > t1 && t < t2) return wrap2pi(geometry::solve_bracketed_fdf(g, t2, t1 + kTwoPi));
  return wrap2pi(geometry::solve_bracketed_fdf(g, t1, t2));
}

double Involution::derivative(double t, double s) const {
  if (geometry::circle_distance(s, t) < 1e-9) return -1.0;
  const geometry::Jet jt = oval_->jet(t, 1);
  const geometry::Jet js = oval_->jet(s, 1);
  const double num = det3(center_, lift_tangent(jt[1]), geometry::lift(js[0]));
  const double den = det3(center_, geometry::lift(jt[0]), lift_tangent(js[1]));
  return -num / den;
}

Involution::Lifted Involution::lift(Lifted in) const {
  const double y = (*this)(in.x);
  if (interior_) {
    double d = std::fmod(y - in.x, kTwoPi);
    if (d <= 0.0) d += kTwoPi;
    return normalize(in.x + d, in.turns);
  }
  // Degree -1 lift fixing t1: on [t1, t1 + 2 pi) it decreases from t1 to t1 - 2 pi.
  const double t1 = fixed_[0];
  double xp = in.x;
  long long m = 0;
  if (xp < t1) {
    xp += kTwoPi;
    m = -1;
  }
  double r = std::fmod(t1 - y, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (xp - t1 < 1e-6 && r > kTwoPi / 2) r -= kTwoPi;
  if (t1 + kTwoPi - xp < 1e-6 && r < kTwoPi / 2) r += kTwoPi;
  return normalize(t1 - r, -(m + in.turns));
}

CircleMap::CircleMap(Involution f) : oval_(f.oval()), factors_{std::move(f)} {}

bool CircleMap::preserves_orientation() const {
  int reversing = 0;
  for (const auto& f : factors_) reversing += f.preserves_orientation() ? 0 : 1;
  return reversing % 2 == 0;
}

std::string CircleMap::describe() const {
  if (factors_.empty()) return "identity";
  std::string s;
  for (const auto& f : factors_) {
    if (!s.empty()) s += " o ";
    s += f.describe();
  }
  return s;
}

double CircleMap::operator()(double t) const {
  t = wrap2pi(t);
  for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) t = (*it)(t);
  return t;
}

double CircleMap::derivative(double t) const {
  t = wrap2pi(t);
  double d = 1.0;
  for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) {
    const double s = (*it)(t);
    d *= it->derivative(t, s);
    t = s;
  }
  return d;
}

double CircleMap::iterate(double t, long long n) const {
  for (long long i = 0; i < n; ++i) t = (*this)(t);
  return wrap2pi(t);
}

CircleMap CircleMap::inverse() const {
  CircleMap out = *this;
  std::reverse(out.factors_.begin(), out.factors_.end());
  return out;
}

Involution::Lifted CircleMap::lift(Involution::Lifted in) const {
  for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) in = it->lift(in);
  return in;
}

CircleMap involution_parallel(OvalPtr oval, const Vec2& u) {
  return CircleMap(Involution::parallel(std::move(oval), u));
}

CircleMap involution_pencil(OvalPtr oval, const PlanePoint& p) {
  return CircleMap(Involution::pencil(std::move(oval), p));
}

CircleMap compose(const CircleMap& outer, const CircleMap& inner) {
  if (outer.oval_ && inner.oval_ && outer.oval_ != inner.oval_) {
    throw DynamicsError("cannot compose maps of different ovals");
  }
  CircleMap out;
  out.oval_ = outer.oval_ ? outer.oval_ : inner.oval_;
  out.factors_ = outer.factors_;
  out.factors_.insert(out.factors_.end(), inner.factors_.begin(), inner.factors_.end());
  return out;
}

}  // namespace conics::dynamics
