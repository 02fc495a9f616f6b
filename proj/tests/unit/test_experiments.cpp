#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "conics/errors.hpp"
#include "conics/experiments.hpp"

using namespace conics::experiments;
using conics::GeometryError;

TEST_CASE("incidence on conics") {
  auto e = Oval::ellipse(2, 1);
  CHECK(incidence_defect(*e, {2.2, 0.1}, 0.5).defect < 1e-10);
  auto c = Oval::ellipse(1, 1);
  for (double s : {-0.8, -0.3, 0.4, 0.9}) {
    auto r = incidence_defect(*c, {1.3, -0.9}, s);
    CHECK(r.defect < 1e-10);
    CHECK(r.chord_length > 0);
  }
  CHECK_THROWS_AS(incidence_defect(*c, {1.3, -0.9}, 0.0), GeometryError);
  CHECK_THROWS_AS(incidence_defect(*c, {0.1, 0.0}, 0.5), GeometryError);
}

TEST_CASE("incidence fails off conics") {
  auto g = Oval::ode_germ({1.0, 1.0}, -0.5, 0.5);
  auto r = incidence_defect(*g, {0.0, -0.01}, 0.3);
  CHECK(r.defect > 1e-8);
}

TEST_CASE("germ chord map on a conic germ is the Moebius involution") {
  auto g = Oval::ode_germ({1.0}, -0.5, 0.5);
  for (double a : {0.0, 0.3, -0.5}) {
    double b0 = -(3 * a + 1) / (a + 3);
    // b = b0 + b2 eps^2 + ...; only the leading term is eps-independent
    CHECK(std::abs(germ_chord_map(*g, a, 1e-3) - b0) < 1e-5);
  }
}

TEST_CASE("epsilon scaling fit") {
  auto g = Oval::ode_germ({1.0, 1.0}, -0.5, 0.5);
  auto f = epsilon_scaling_fit(*g, 0.0, {0.1, 0.05, 0.025});
  CHECK(f.p == doctest::Approx(1.0));
  CHECK(f.predicted == doctest::Approx(1.0 / 216).epsilon(1e-12));
  CHECK(f.relative_error < 1e-2);

  auto m2 = epsilon_scaling_fit(*Oval::ode_germ({1.0, -2.0}, -0.5, 0.5), 0.5, {0.1, 0.05, 0.025});
  CHECK(m2.relative_error < 1e-2);

  auto conic = epsilon_scaling_fit(*Oval::ode_germ({1.0}, -0.5, 0.5), 0.3, {0.1, 0.05, 0.025});
  CHECK(std::abs(conic.extrapolated) < 1e-8);

  CHECK_THROWS_AS(epsilon_scaling_fit(*g, 0.0, {0.1, 0.2, 0.05}), GeometryError);
  CHECK_THROWS_AS(epsilon_scaling_fit(*g, 0.0, {0.1, 0.05}), GeometryError);
  CHECK_THROWS_AS(epsilon_scaling_fit(*Oval::ellipse(1, 1), 0.0, {0.1, 0.05, 0.025}), GeometryError);
}

TEST_CASE("predicted defect") {
  auto closed = [](double a, double p) {
    return (a - 1) * (a - 1) * (a + 1) * (a + 1) * (a * a + 6 * a + 1) * p / (24 * (a + 3) * (a + 3));
  };
  for (double a : {0.0, 0.3, -0.5}) {
    CHECK(predicted_defect(1, a, 1.0) == doctest::Approx(closed(a, 1.0)));
    CHECK(predicted_defect(-1, a, -2.0) == doctest::Approx(closed(a, -2.0)));
  }
}

TEST_CASE("parallelograms on ellipses") {
  auto e = Oval::ellipse(2, 1);
  auto r = parallelogram_test(e, {1, 0});
  CHECK(r.report.value("count") > 0);
  CHECK(r.report.value("center_offset") < 1e-10);
  CHECK(r.report.value("midpoint_defect") < 1e-10);
  auto c = parallelogram_test(Oval::ellipse(1, 1), Vec2(1, 1).normalized());
  CHECK(c.report.value("center_offset") < 1e-10);
  CHECK(c.report.value("midpoint_defect") < 1e-10);
  for (const auto& q : r.quads) {
    CHECK((q.vertices[0] + q.vertices[2]).norm() < 1e-9);
    CHECK((q.vertices[1] + q.vertices[3]).norm() < 1e-9);
  }
  CHECK_THROWS_AS(parallelogram_test(Oval::fourier_support(1.0, {{3, 0.05, 0.0}}), {1, 0}), GeometryError);
}

TEST_CASE("parallelograms on an even-harmonic oval") {
  auto o = Oval::fourier_support(1.0, {{4, 0.03, 0.0}});
  auto r = parallelogram_test(o, {1, 0});
  CHECK(r.report.value("count") > 0);
  CHECK(r.report.value("center_offset") < 1e-9);
  // off the symmetry axes the closing quadrilaterals collapse to support segments
  auto g = parallelogram_test(o, {1, 0.3});
  CHECK(g.report.value("count") == 0);
  CHECK(std::isnan(g.report.value("center_offset")));
}

TEST_CASE("conjugacy scan") {
  auto e = Oval::ellipse(2, 1);
  ScanSpec spec;
  spec.n = 3;
  spec.iterations = 500;
  auto rows = conjugacy_scan(e, spec);
  CHECK(rows.size() == 9);
  CHECK(rows[0].mode == "direction-pairs");
  for (const auto& r : rows) CHECK(r.status == "ok");

  ScanSpec pts;
  pts.mode = ScanMode::point_pairs;
  pts.n = 4;
  pts.s_min = 2.5;
  pts.s_max = 5.0;
  pts.iterations = 500;
  auto prow = conjugacy_scan(e, pts);
  CHECK(prow.size() == 6);
  for (const auto& r : prow) {
    CHECK(r.fixed_point_count == 2);
    CHECK(r.obstruction < 1e-6);
  }

  std::ostringstream os;
  write_scan_csv(os, prow);
  const std::string csv = os.str();
  CHECK(csv.substr(0, csv.find('\n')) == kScanCsvHeader);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
}
