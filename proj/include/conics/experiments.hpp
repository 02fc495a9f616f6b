#pragma once

// End-to-end measurements: polar incidence on ovals, the eps^3 law of the
// chord map on curvature germs, inscribed parallelograms, and sweeps of
// pencil-pair circle maps.

#include <array>
#include <limits>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "conics/circle_dynamics.hpp"
#include "conics/oval_geometry.hpp"

namespace conics::experiments {

using geometry::Oval;
using geometry::OvalPtr;
using geometry::PlanePoint;
using geometry::Vec2;

struct IncidenceRecord {
  std::string curve;
  PlanePoint A;
  PlanePoint B;
  double selector = 0.0;
  std::pair<double, double> tangency_A;  // tangency parameters seen from A
  std::pair<double, double> tangency_B;
  double chord_length = 0.0;
  /// dist(A, b) / chord_length, where b is the chord of contact of B.
  double defect = 0.0;
};

/// Chord of contact a of A; B is where the tangent at gamma(t_mid + s w) meets
/// a, with t_mid +- w the tangency parameters of A on the visible arc and
/// s = selector in (-1, 1). Throws GeometryError for an inadmissible B.
IncidenceRecord incidence_defect(const Oval& oval, const PlanePoint& A, double selector);

/// Chord map of a germ at scale eps: the line through the meet of the tangents
/// at gamma(a eps), gamma(eps) and the point gamma(-eps) meets the curve again
/// at gamma(-b eps); returns b.
double germ_chord_map(const Oval& germ, double a, double eps);

struct ScalingFit {
  double a = 0.0;
  double k0 = 0.0;
  double p = 0.0;
  double q = 0.0;
  std::vector<double> epsilons;
  std::vector<double> measured;  // (f(f(a)) - a) / eps^3
  double extrapolated = 0.0;
  double predicted = 0.0;  // exact eps^3 coefficient at (a, p); NaN when k0 = 0
  double relative_error = 0.0;
  double noise_floor = 1e-8;
};

/// Polynomial (Richardson) extrapolation of the measured coefficients to eps = 0.
/// Throws GeometryError for a non-germ curve, epsilons that are not strictly
/// decreasing and positive with at least three entries, or a construction
/// leaving the germ's range.
ScalingFit epsilon_scaling_fit(const Oval& germ, double a, const std::vector<double>& epsilons);

/// eps^3 coefficient of f(f(a)) - a from the exact expansion, at numeric (a, p).
double predicted_defect(int k_sign, double a, double p);

struct DefectReport {
  std::string name;
  std::vector<std::pair<std::string, double>> values;
  std::map<std::string, std::string> metadata;

  double value(const std::string& key) const;
};

struct Parallelogram {
  std::array<double, 4> params;
  std::array<PlanePoint, 4> vertices;
  double center_offset = 0.0;
  double midpoint_defect = 0.0;
  double closure_defect = 0.0;
};

struct ParallelogramResult {
  Vec2 u;
  Vec2 v;
  std::vector<Parallelogram> quads;
  DefectReport report;  // center_offset, midpoint_defect, closure_defect, count
};

/// Quadrilaterals x0 -> f_v -> f_u -> f_v -> f_u with v = conjugate_direction(u)
/// started from grid points that close up and from the simple roots of
/// F^2 - id, F = f_u o f_v. Throws GeometryError unless the oval is centrally
/// symmetric about the origin.
ParallelogramResult parallelogram_test(const OvalPtr& oval, const Vec2& u, int samples = 64);

enum class ScanMode { direction_pairs, point_pairs };

struct ScanSpec {
  ScanMode mode = ScanMode::direction_pairs;
  int n = 16;
  /// Point pairs lie on base + s * direction for s evenly spaced in [s_min, s_max].
  PlanePoint base{0.0, 0.0};
  Vec2 direction{1.0, 0.0};
  double s_min = 1.5;
  double s_max = 4.0;
  long long iterations = 10000;
  long long max_denominator = 50;
  int grid = 64;
};

struct ScanRow {
  std::string mode;
  int i = 0;
  int j = 0;
  double param_i = 0.0;
  double param_j = 0.0;
  bool orientation_preserving = true;
  // NaN (empty CSV cell) when not applicable.
  double rotation_number = std::numeric_limits<double>::quiet_NaN();
  double error_bound = std::numeric_limits<double>::quiet_NaN();
  long long convergent_p = 0;
  long long convergent_q = 0;
  double periodicity_defect = std::numeric_limits<double>::quiet_NaN();
  int fixed_point_count = -1;
  double reciprocity_defect = std::numeric_limits<double>::quiet_NaN();
  double obstruction = std::numeric_limits<double>::quiet_NaN();
  std::string status = "ok";
};

/// Direction pairs: all n x n pairs of angles k pi / n. Point pairs: all
/// i < j pairs of the n points on the line. Rows in enumeration order.
std::vector<ScanRow> conjugacy_scan(const OvalPtr& oval, const ScanSpec& spec);

/// Fixed header line followed by one line per row, 17 significant digits.
void write_scan_csv(std::ostream& os, const std::vector<ScanRow>& rows);
extern const char* const kScanCsvHeader;

}  // namespace conics::experiments
