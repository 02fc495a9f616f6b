#include <doctest.h>

#include "conics/errors.hpp"
#include "conics/exact_algebra.hpp"

using namespace conics::algebra;
using conics::AlgebraError;

namespace {

UniPoly poly(std::initializer_list<long> cs) {
  std::vector<Rational> v;
  for (long c : cs) v.emplace_back(c);
  return UniPoly(v);
}

const RationalFunc a = RationalFunc::variable();

RationalFunc b0() { return -(3 * a + 1) / (a + 3); }

}  // namespace

TEST_CASE("poly_gcd") {
  CHECK(poly_gcd(poly({-1, 0, 1}), poly({1, 1})) == poly({1, 1}));
  CHECK(poly_gcd(poly({3, 1}), poly({1})) == poly({1}));
  auto a3 = poly({3, 1});
  CHECK(poly_gcd(a3 * a3, a3 * poly({-1, 1})) == a3);
  CHECK(poly_gcd(UniPoly(), UniPoly()).is_zero());
  // monic even when the inputs are not
  CHECK(poly_gcd(poly({2, 2}), poly({-4, 0, 4})) == poly({1, 1}));
}

TEST_CASE("poly_divmod and sqrt") {
  auto [q, r] = poly_divmod(poly({-1, 0, 1}), poly({1, 1}));
  CHECK(q == poly({-1, 1}));
  CHECK(r.is_zero());
  CHECK_THROWS_AS(poly_divmod(poly({1}), UniPoly()), AlgebraError);
  CHECK(poly_sqrt(poly({9, 6, 1})).value() * poly_sqrt(poly({9, 6, 1})).value() == poly({9, 6, 1}));
  CHECK_FALSE(poly_sqrt(poly({1, 0, 2})).has_value());
}

TEST_CASE("rational functions stay normalized") {
  auto x = RationalFunc(poly({-1, 0, 1}), poly({2, 2}));
  CHECK(x.num() == poly({-1, 1}) * (Rational(1, 2) * UniPoly::constant(1)));
  CHECK(x.den() == poly({1}));
  CHECK_THROWS_AS(RationalFunc(poly({1}), UniPoly()), AlgebraError);
}

TEST_CASE("rf_arith") {
  auto inv = RationalFunc(1) / (a + 3);
  CHECK(rf_arith(ArithOp::add, inv, 2 * inv) == 3 * inv);
  auto m = (a - 1) / (a + 3);
  CHECK(rf_arith(ArithOp::mul, m, (a + 3) / (a - 1)) == RationalFunc(1));
  CHECK(rf_arith(ArithOp::sub, b0(), b0()).is_zero());
  CHECK_THROWS_AS(rf_arith(ArithOp::div, m, RationalFunc(0)), AlgebraError);
}

TEST_CASE("rf_derivative") {
  CHECK(rf_derivative(a * a) == 2 * a);
  CHECK(rf_derivative(RationalFunc(1) / (a + 3)) == RationalFunc(-1) / ((a + 3) * (a + 3)));
  auto d = rf_derivative(b0());
  CHECK(d == RationalFunc(-8) / ((a + 3) * (a + 3)));
  // exact evaluation cross-check
  for (int x : {0, 1, 2}) CHECK(d.evaluate(x) == Rational(-8) / Rational((x + 3) * (x + 3)));
}

TEST_CASE("canonical strings") {
  CHECK(b0().str() == "-(3*a+1)/(a+3)");
  CHECK(poly({9, 6, 1}).str() == "a^2+6*a+9");
  CHECK(UniPoly().str() == "0");
  CHECK(ParamPoly::generator(1).str() == "p");
}

TEST_CASE("b0 is a Moebius involution") {
  CHECK(b0().compose(b0()) == a);
  auto s = rf_compose_shift(b0(), b0(), EpsSeries(3));
  CHECK(s.coeff(0).scalar() == a);
}

TEST_CASE("series_arith truncation") {
  auto eps = EpsSeries::epsilon(3);
  auto one = EpsSeries::constant(1, 3);
  auto prod = series_arith(ArithOp::mul, one + eps, one - eps);
  CHECK(prod == one - eps * eps);
  CHECK(series_arith(ArithOp::mul, eps, eps.pow(3)).is_zero());
  auto p = ParamPoly::generator(1), q = ParamPoly::generator(2);
  auto e2 = eps * eps;
  CHECK(series_arith(ArithOp::add, p * e2, q * e2) == (p + q) * e2);
  CHECK_THROWS_AS(series_arith(ArithOp::add, eps, EpsSeries::epsilon(4)), AlgebraError);
  CHECK_THROWS_AS(series_arith(ArithOp::div, eps, eps), AlgebraError);
  // operators truncate to the smaller order instead
  CHECK((eps + EpsSeries::epsilon(5)).order() == 3);
}

TEST_CASE("series_det3") {
  auto c = [](long x, long y, long z) {
    return SeriesVec3(EpsSeries::constant(x, 3), EpsSeries::constant(y, 3), EpsSeries::constant(z, 3));
  };
  CHECK(series_det3(c(1, 0, 0), c(0, 1, 0), c(0, 0, 1)) == EpsSeries::constant(1, 3));
  auto eps = EpsSeries::epsilon(3);
  SeriesVec3 v(eps, EpsSeries::constant(2, 3) + eps * eps, EpsSeries::constant(1, 3));
  CHECK(series_det3(v, v, c(0, 0, 1)).is_zero());
  CHECK(series_det3(c(1, 2, 3), v, v).is_zero());
}

TEST_CASE("rf_compose_shift") {
  auto c = RationalFunc::variable();  // plays the role of the centre symbol
  auto s = rf_compose_shift(a * a, c, EpsSeries::epsilon(3));
  CHECK(s.coeff(0).scalar() == c * c);
  CHECK(s.coeff(1).scalar() == 2 * c);
  CHECK(s.coeff(2).scalar() == RationalFunc(1));
  CHECK(s.coeff(3).is_zero());
  CHECK_THROWS_AS(rf_compose_shift(RationalFunc(1) / (a + 3), RationalFunc(-3), EpsSeries::epsilon(3)),
                  AlgebraError);
}

TEST_CASE("ParamPoly degree cap and generator scaling") {
  auto p = ParamPoly::generator(1), q = ParamPoly::generator(2);
  CHECK((p * q).total_degree() == 2);
  CHECK_THROWS_AS(p * p * p, AlgebraError);
  CHECK((p + q).scale_generator(1, 0) == q);
}
