#pragma once

// Self-maps of an oval's parameter circle generated by pencil involutions:
// lines of a fixed direction, or lines through a fixed point.

#include <string>
#include <utility>
#include <vector>

#include "conics/oval_geometry.hpp"

namespace conics::dynamics {

using geometry::OvalPtr;
using geometry::PlanePoint;
using geometry::Vec2;
using geometry::Vec3;

/// One pencil involution t -> second intersection of the pencil line through gamma(t).
class Involution {
 public:
  enum class Kind { parallel, pencil };

  static Involution parallel(OvalPtr oval, const Vec2& u);
  static Involution pencil(OvalPtr oval, const PlanePoint& p);

  Kind kind() const { return kind_; }
  const OvalPtr& oval() const { return oval_; }
  /// (u, 0) for a direction, (P, 1) for a point.
  const Vec3& center() const { return center_; }
  bool preserves_orientation() const { return interior_; }
  /// Tangency (or support) parameters; empty for an interior point.
  const std::vector<double>& fixed_points() const { return fixed_; }
  std::string describe() const;

  /// Image in [0, 2 pi).
  double operator()(double t) const;
  /// Derivative from the implicit function rule on det(C, G(t), G(s)) = 0.
  double derivative(double t, double s) const;
  double derivative(double t) const { return derivative(t, (*this)(t)); }

  /// Degree +-1 lift of the factor: position x in [0, 2 pi) plus `turns` full
  /// turns maps to the returned pair.
  struct Lifted {
    double x;
    long long turns;
  };
  Lifted lift(Lifted in) const;

 private:
  Involution() = default;
  void init();

  Kind kind_ = Kind::parallel;
  OvalPtr oval_;
  Vec3 center_ = Vec3::Zero();
  bool interior_ = false;
  std::vector<double> fixed_;
};

/// Composition of involutions, applied right to left: factors.back() first.
class CircleMap {
 public:
  CircleMap() = default;
  explicit CircleMap(Involution f);

  const OvalPtr& oval() const { return oval_; }
  const std::vector<Involution>& factors() const { return factors_; }
  bool preserves_orientation() const;
  bool is_identity() const { return factors_.empty(); }
  std::string describe() const;

  double operator()(double t) const;
  /// Chain-rule derivative through all factors.
  double derivative(double t) const;
  /// F^n for n >= 0.
  double iterate(double t, long long n) const;
  /// Factor list reversed; equals F^{-1} because every factor is an involution.
  CircleMap inverse() const;

  Involution::Lifted lift(Involution::Lifted in) const;

  friend CircleMap compose(const CircleMap& outer, const CircleMap& inner);

 private:
  OvalPtr oval_;
  std::vector<Involution> factors_;
};

CircleMap involution_parallel(OvalPtr oval, const Vec2& u);
CircleMap involution_pencil(OvalPtr oval, const PlanePoint& p);
/// outer o inner. Throws DynamicsError when the ovals differ.
CircleMap compose(const CircleMap& outer, const CircleMap& inner);

struct Convergent {
  long long p = 0;
  long long q = 1;
};

struct RotationEstimate {
  double value = 0.0;  // in [0, 1)
  long long iterations = 0;
  double error_bound = 0.0;
  std::vector<Convergent> convergents;
};

/// Continued-fraction convergents of x with denominators up to max_q.
std::vector<Convergent> convergents(double x, long long max_q, double tol = 1e-12);

/// Birkhoff average of the lift displacement; |value - rho| <= 1/N.
/// Throws DynamicsError for an orientation-reversing map or N < 1.
RotationEstimate rotation_number(const CircleMap& F, double x0, long long N = 1000000);

/// max over a uniform grid of the circle distance between F^q(x) and x.
double periodicity_defect(const CircleMap& F, int q, int grid = 128);

/// max over a uniform grid of the circle distance between f_Q(f_P(f_Q(x))) and f_P(x).
double involution_identity_defect(const OvalPtr& oval, const PlanePoint& P, const PlanePoint& Q, int grid = 128);

/// Parameters with F(t) = t, sorted.
std::vector<double> fixed_points(const CircleMap& F, int samples = 512);

struct MobiusDiagnostics {
  std::vector<double> fixed_points;
  std::vector<double> derivatives;
  double reciprocity_defect = 0.0;
};

/// Throws DynamicsError unless F has exactly two fixed points.
MobiusDiagnostics mobius_reciprocity(const CircleMap& F);

struct ObstructionOptions {
  int overlap_samples = 64;
  double refuse_band = 1e-4;      // refuse when |lambda - 1| is below this
  double koenigs_radius = 1e-5;   // stop iterating once this close to the fixed point
  int max_iterations = 500;
};

struct LinearizationReport {
  double obstruction = 0.0;
  double lambda = 0.0;  // multiplier at the attracting fixed point
  double attracting = 0.0;
  double repelling = 0.0;
  int samples = 0;
  int max_iterations_used = 0;
};

/// Deviation of the transition between the Koenigs coordinates at the two fixed
/// points from a Moebius transition (1/phi_plus linear in phi_minus), relative
/// to the size of 1/phi_plus on the sampled arcs.
LinearizationReport linearization_obstruction(const CircleMap& F, const ObstructionOptions& opts = {});

}  // namespace conics::dynamics
