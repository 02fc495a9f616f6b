#include <doctest.h>

#include <cmath>

#include "conics/circle_dynamics.hpp"
#include "conics/errors.hpp"

using namespace conics::dynamics;
using conics::DynamicsError;
using conics::geometry::kTwoPi;
using conics::geometry::Oval;
using conics::geometry::circle_distance;

namespace {

const double pi = M_PI;

Vec2 dir(double angle) { return {std::cos(angle), std::sin(angle)}; }

CircleMap parallel_pair(const OvalPtr& o, double a, double b) {
  return compose(involution_parallel(o, dir(a)), involution_parallel(o, dir(b)));
}

CircleMap pencil_pair(const OvalPtr& o, PlanePoint P, PlanePoint Q) {
  return compose(involution_pencil(o, P), involution_pencil(o, Q));
}

}  // namespace

TEST_CASE("parallel involutions") {
  auto c = Oval::ellipse(1, 1);
  auto f = involution_parallel(c, {1, 0});
  CHECK(circle_distance(f(pi / 6), 5 * pi / 6) < 1e-12);
  CHECK(circle_distance(f(pi / 2), pi / 2) < 1e-9);
  auto e = Oval::ellipse(2, 1);
  auto g = involution_parallel(e, {1, 0});
  for (double t : {0.3, 1.0, 2.5, 4.0}) CHECK(circle_distance(g(t), pi - t) < 1e-12);
  CHECK_FALSE(f.preserves_orientation());
}

TEST_CASE("pencil involutions") {
  auto c = Oval::ellipse(1, 1);
  auto f = involution_pencil(c, {2, 0});
  CHECK(circle_distance(f(0.0), pi) < 1e-12);
  const auto& fx = f.factors().front().fixed_points();
  REQUIRE(fx.size() == 2);
  CHECK(std::abs(std::cos(fx[0]) - 0.5) < 1e-12);
  CHECK(std::abs(std::cos(fx[1]) - 0.5) < 1e-12);
  auto anti = involution_pencil(c, {0, 0});
  CHECK(anti.preserves_orientation());
  for (double t : {0.0, 1.0, 4.0}) CHECK(circle_distance(anti(t), t + pi) < 1e-12);
  // the map and its derivative agree with finite differences
  auto e = Oval::fourier_support(1.0, {{3, 0.05, 0.0}});
  auto h = involution_pencil(e, {2.5, 0.7});
  const double t = 2.0, dt = 1e-6;
  double fd = std::remainder(h(t + dt) - h(t - dt), kTwoPi) / (2 * dt);
  CHECK(h.derivative(t) == doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("compose") {
  auto c = Oval::ellipse(1, 1);
  auto f = involution_parallel(c, dir(0.4));
  auto ff = compose(f, f);
  for (int i = 0; i < 64; ++i) {
    double t = kTwoPi * i / 64;
    CHECK(circle_distance(ff(t), t) < 1e-12);
  }
  auto F = parallel_pair(c, 0.0, pi / 4);
  for (double t : {0.1, 2.0, 5.0}) CHECK(circle_distance(F(t), t - pi / 2) < 1e-12);
  CHECK(F.preserves_orientation());
  CHECK_THROWS_AS(compose(f, involution_parallel(Oval::ellipse(1, 1), {1, 0})), DynamicsError);
  auto G = pencil_pair(c, {2, 0}, {0, 3});  // line 3x + 2y = 6 misses the circle
  CHECK(G.preserves_orientation());
  CHECK(fixed_points(G).empty());
}

TEST_CASE("rotation numbers on the circle") {
  auto c = Oval::ellipse(1, 1);
  auto r = rotation_number(parallel_pair(c, 0.0, pi / 4), 0.3, 100000);
  CHECK(std::abs(r.value - 0.75) < 1e-5);
  CHECK(r.error_bound == doctest::Approx(1e-5));
  auto r2 = rotation_number(parallel_pair(c, pi / 4, 0.0), 0.3, 100000);
  CHECK(std::abs(r2.value - 0.25) < 1e-5);
  auto r3 = rotation_number(parallel_pair(c, 1.0, 0.0), 0.0, 100000);
  CHECK(std::abs(r3.value - 1 / pi) < 1e-5);
  auto id = rotation_number(parallel_pair(c, 0.7, 0.7), 0.0, 1000);
  CHECK(id.value < 1e-9);
  CHECK_THROWS_AS(rotation_number(involution_parallel(c, {1, 0}), 0.0, 10), DynamicsError);
}

TEST_CASE("convergents") {
  auto cs = convergents(0.75, 50);
  REQUIRE(!cs.empty());
  CHECK(cs.back().p == 3);
  CHECK(cs.back().q == 4);
  auto pi_cs = convergents(pi - 3, 200);
  CHECK(pi_cs.back().q == 113);
}

TEST_CASE("periodicity defect") {
  auto c = Oval::ellipse(1, 1);
  CHECK(periodicity_defect(parallel_pair(c, 0.0, pi / 2), 2) < 1e-10);
  auto e = Oval::ellipse(2, 1);
  CHECK(periodicity_defect(parallel_pair(e, 0.0, pi / 2), 2) < 1e-10);
  // a non-conjugate pair on a Fourier oval: measured, generally nonzero
  auto f = Oval::fourier_support(1.0, {{3, 0.05, 0.0}});
  CHECK(periodicity_defect(parallel_pair(f, 0.0, pi / 2), 2) > 0.0);
}

TEST_CASE("involution identity") {
  auto c = Oval::ellipse(1, 1);
  // Q = (0.5, 5) has polar x/2 + 5y = 1, which passes through P = (2, 0)
  CHECK(involution_identity_defect(c, {2, 0}, {0.5, 5}) < 1e-10);
  // P = (2, 0) is not on the polar x = 1/3 of Q = (3, 0)
  CHECK(involution_identity_defect(c, {2, 0}, {3, 0}) > 0.1);
  auto e = Oval::ellipse(2, 1);
  // polar of Q = (4, 1) on x^2/4 + y^2 = 1 is x + y = 1; P = (3, -2) lies on it
  CHECK(involution_identity_defect(e, {3, -2}, {4, 1}) < 1e-9);
  CHECK(involution_identity_defect(e, {3, 0}, {4, 1}) > 1e-3);
}

TEST_CASE("fixed points") {
  auto c = Oval::ellipse(1, 1);
  auto fx = fixed_points(pencil_pair(c, {2, 0}, {3, 0}));
  REQUIRE(fx.size() == 2);
  CHECK(circle_distance(fx[0], 0.0) < 1e-12);
  CHECK(circle_distance(fx[1], pi) < 1e-12);
  CHECK(fixed_points(pencil_pair(c, {2, 0}, {0, 3})).empty());
  auto in = fixed_points(pencil_pair(c, {0, 0}, {0.5, 0}));
  REQUIRE(in.size() == 2);
  CHECK(circle_distance(in[0], 0.0) < 1e-12);
  CHECK(circle_distance(in[1], pi) < 1e-12);
  CHECK_THROWS_AS(fixed_points(parallel_pair(c, 0.2, 0.2)), DynamicsError);
}

TEST_CASE("mobius reciprocity") {
  auto c = Oval::ellipse(1, 1);
  CHECK(mobius_reciprocity(pencil_pair(c, {2, 0}, {3, 0})).reciprocity_defect < 1e-9);
  CHECK(mobius_reciprocity(pencil_pair(c, {0, 0}, {0.5, 0})).reciprocity_defect < 1e-9);
  auto f = Oval::fourier_support(1.0, {{3, 0.05, 0.0}});
  auto d = mobius_reciprocity(pencil_pair(f, {2.5, 0.4}, {-3, -0.2}));
  CHECK(d.reciprocity_defect < 1e-8);
  CHECK(d.derivatives[0] * d.derivatives[1] == doctest::Approx(1.0).epsilon(1e-8));
  CHECK_THROWS_AS(mobius_reciprocity(pencil_pair(c, {2, 0}, {0, 3})), DynamicsError);
}

TEST_CASE("linearization obstruction") {
  auto e = Oval::ellipse(2, 1);
  auto rep = linearization_obstruction(pencil_pair(e, {3, 0}, {5, 0}));
  CHECK(rep.obstruction < 1e-6);
  CHECK(rep.lambda < 1.0);
  CHECK(linearization_obstruction(pencil_pair(Oval::ellipse(1, 1), {3, 0}, {5, 0})).obstruction < 1e-6);
  // off-axis pair on a perturbed oval: the obstruction is finite and visibly nonzero
  auto f = Oval::fourier_support(1.0, {{4, 0.03, 0.0}});
  auto r = linearization_obstruction(pencil_pair(f, {2.5, 0.6}, {-3.0, 0.3}));
  CHECK(std::isfinite(r.obstruction));
  CHECK(r.obstruction > 1e-4);
  CHECK_THROWS_AS(linearization_obstruction(parallel_pair(e, 0.0, 1.0)), DynamicsError);
}
