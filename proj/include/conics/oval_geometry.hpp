#pragma once

// Strictly convex plane curves with analytic jets, and projective
// constructions on them through the homogeneous lift (x, y) -> (x, y, 1).

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <array>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace conics::geometry {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using PlanePoint = Eigen::Vector2d;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr int kMaxJetOrder = 5;

/// Position and derivatives gamma^{(0)} ... gamma^{(5)}.
using Jet = std::array<Vec2, kMaxJetOrder + 1>;

struct Ellipse {
  double A = 1.0;
  double B = 1.0;
};

struct Harmonic {
  int k = 0;
  double cos_coeff = 0.0;
  double sin_coeff = 0.0;
};

/// Support function h(theta) = h0 + sum (c_k cos k theta + s_k sin k theta);
/// the curve is parameterized by the normal angle theta.
struct FourierSupport {
  double h0 = 1.0;
  std::vector<Harmonic> harmonics;
};

/// Arc solving gamma''' = -k(t) gamma' with gamma(0) = (0,0), gamma'(0) = (1,0),
/// gamma''(0) = (0,1); k is a polynomial in t (coefficients in ascending order).
struct OdeGerm {
  std::vector<double> k_poly;
  double t_min = -0.5;
  double t_max = 0.5;
};

namespace detail {
/// Taylor coefficients gamma^{(n)}(t0) / n! of a germ around a node.
struct TaylorSegment {
  double t0 = 0.0;
  std::vector<Vec2> coeffs;
};
}  // namespace detail

/// Immutable, validated strictly convex curve. Closed variants are
/// parameterized counterclockwise on [0, 2 pi).
class Oval {
 public:
  using Variant = std::variant<Ellipse, FourierSupport, OdeGerm>;

  static std::shared_ptr<const Oval> ellipse(double A, double B);
  static std::shared_ptr<const Oval> fourier_support(double h0, std::vector<Harmonic> harmonics);
  static std::shared_ptr<const Oval> ode_germ(std::vector<double> k_poly, double t_min, double t_max);
  static std::shared_ptr<const Oval> from_variant(const Variant& v);

  const Variant& variant() const { return variant_; }
  std::string kind() const;
  bool is_closed() const;
  /// Parameter domain: [0, 2 pi) for closed curves, [t_min, t_max] for germs.
  std::pair<double, double> domain() const;
  /// Largest coordinate magnitude of the curve (at least 1); the length scale
  /// used by residual tolerances.
  double scale() const { return scale_; }

  /// Derivatives up to `order`; entries beyond it are left zero.
  /// Throws GeometryError for a germ parameter outside its range.
  Jet jet(double t, int order = kMaxJetOrder) const;
  Vec2 point(double t) const;
  Vec2 tangent(double t) const;

  /// Reduces a closed-curve parameter to [0, 2 pi); identity for germs.
  double wrap(double t) const;

  /// gamma(t + pi) = -gamma(t) within tol at 256 sampled parameters.
  bool is_centrally_symmetric(double tol = 1e-12) const;

 private:
  Oval() = default;
  void validate();
  Jet germ_jet(double t, int order) const;

  Variant variant_;
  double scale_ = 1.0;
  std::vector<detail::TaylorSegment> segments_;
  double segment_width_ = 0.0;
};

using OvalPtr = std::shared_ptr<const Oval>;

/// Analytic jet; thin wrapper over Oval::jet matching the module's operation set.
std::vector<Vec2> eval_jet(const Oval& oval, double t, int order);

/// Line l1 x + l2 y + l3 = 0, defined up to scale.
struct ProjLine {
  Vec3 l;
  /// (l1, l2) has unit length after normalization; signed distance = value.
  ProjLine normalized() const;
  double value(const PlanePoint& p) const { return l.x() * p.x() + l.y() * p.y() + l.z(); }
};

struct PointAtInfinity {
  Vec2 direction;
};

using MeetResult = std::variant<PlanePoint, PointAtInfinity>;

Vec3 lift(const PlanePoint& p);

/// Line through two distinct points. Throws GeometryError for coincident points.
ProjLine line_join(const PlanePoint& p1, const PlanePoint& p2);
/// Line through p with direction d.
ProjLine line_through(const PlanePoint& p, const Vec2& d);
/// Intersection point, or the common direction of parallel lines.
/// Throws GeometryError for identical lines.
MeetResult line_meet(const ProjLine& l1, const ProjLine& l2);
/// Distance from p to the line.
double point_line_distance(const PlanePoint& p, const ProjLine& line);

struct Chord {
  double t1 = 0.0;
  double t2 = 0.0;
  PlanePoint p1;
  PlanePoint p2;
  Vec2 direction() const { return (p2 - p1).normalized(); }
};

struct Intersections {
  std::vector<double> params;  // sorted
  bool tangent = false;        // a single parameter inside the tangency band
};

/// Tolerances shared by the root finders.
struct RootTolerances {
  int samples = 256;
  double bracket_width = 1e-14;
  double tangency_band = 1e-10;  // relative to Oval::scale()
};

/// Parameters where the line meets the curve: 0, 1 (tangent) or 2 for closed
/// ovals.
Intersections intersect_line_oval(const Oval& oval, const ProjLine& line, const RootTolerances& tol = {});

/// Tangency parameters of the two tangent lines from an exterior point, sorted.
/// Throws GeometryError when a is on or inside the curve.
std::pair<double, double> tangents_from_point(const Oval& oval, const PlanePoint& a, const RootTolerances& tol = {});

/// Line through the two tangency points seen from `a`.
ProjLine chord_of_contact(const Oval& oval, const PlanePoint& a, const RootTolerances& tol = {});

/// Affine curvature from the jets of an arbitrary regular parameterization.
/// Throws GeometryError when det(gamma', gamma'') <= 0.
double affine_curvature(const Oval& oval, double t);

/// Chord joining the tangency points of the two support lines parallel to u.
Chord affine_diameter(const Oval& oval, const Vec2& u, const RootTolerances& tol = {});

/// Unit direction of affine_diameter(oval, u), with angle in [0, pi).
Vec2 conjugate_direction(const Oval& oval, const Vec2& u, const RootTolerances& tol = {});

/// Parameters of the two support points with tangent direction u, sorted.
std::pair<double, double> support_points(const Oval& oval, const Vec2& u, const RootTolerances& tol = {});

/// Position of a point relative to a closed oval.
bool point_is_interior(const Oval& oval, const PlanePoint& a);
bool point_is_exterior(const Oval& oval, const PlanePoint& a);

/// Canonical representative of a direction: unit length, angle in [0, pi).
Vec2 canonical_direction(const Vec2& d);

/// Shortest distance between two parameters on the circle R / 2 pi Z.
double circle_distance(double s, double t);

/// Sign changes of f on a uniform grid over [lo, hi] (periodic when `wrap`),
/// each refined by bisection to `width` and polished by a guarded Newton step
/// using df.
template <typename F, typename DF>
std::vector<double> find_roots(F&& f, DF&& df, double lo, double hi, int samples, bool wrap, double width);

}  // namespace conics::geometry

#include "conics/detail/root_finding.hpp"
