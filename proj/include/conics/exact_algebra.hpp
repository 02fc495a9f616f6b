#pragma once

// Exact arithmetic kernel: rationals, univariate polynomials and rational
// functions in the chord parameter `a`, polynomials in the derivatives of the
// affine curvature (p = k', q = k'', ...) over Q(a), and truncated power series
// in epsilon over that coefficient ring.

#include <gmpxx.h>

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace conics::algebra {

/// Arbitrary-precision rational, always kept in lowest terms with a positive
/// denominator.
using Rational = mpq_class;

/// Dense univariate polynomial with rational coefficients in the variable `a`.
/// The zero polynomial stores no coefficients; otherwise the last stored
/// coefficient is nonzero.
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<Rational> coeffs);

  static UniPoly constant(const Rational& c);
  static UniPoly monomial(const Rational& c, int degree);
  static UniPoly variable();

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  bool is_constant() const { return coeffs_.size() <= 1; }
  int term_count() const;

  /// Coefficient of a^i; zero beyond the degree.
  Rational coeff(int i) const;
  const Rational& leading() const;
  std::span<const Rational> coefficients() const { return coeffs_; }

  Rational evaluate(const Rational& x) const;
  UniPoly derivative() const;
  UniPoly monic() const;

  UniPoly operator-() const;
  friend UniPoly operator+(const UniPoly& x, const UniPoly& y);
  friend UniPoly operator-(const UniPoly& x, const UniPoly& y);
  friend UniPoly operator*(const UniPoly& x, const UniPoly& y);
  friend UniPoly operator*(const Rational& c, const UniPoly& x);
  friend bool operator==(const UniPoly& x, const UniPoly& y) = default;

  /// Canonical text form, descending degree with explicit signs:
  /// "a^2+6*a+9", "2/3*a-1", "0".
  std::string str() const;

 private:
  std::vector<Rational> coeffs_;
  void trim();
};

/// Euclidean division over Q. Throws AlgebraError when v is zero.
std::pair<UniPoly, UniPoly> poly_divmod(const UniPoly& u, const UniPoly& v);

/// Monic greatest common divisor; gcd(0, 0) = 0.
UniPoly poly_gcd(const UniPoly& u, const UniPoly& v);

/// Exact square root when u is the square of a polynomial over Q.
std::optional<UniPoly> poly_sqrt(const UniPoly& u);

/// Element of Q(a). Invariants: den != 0, gcd(num, den) = 1, den monic.
class RationalFunc {
 public:
  RationalFunc() : den_(UniPoly::constant(1)) {}
  RationalFunc(const Rational& c);  // NOLINT(google-explicit-constructor)
  RationalFunc(long c) : RationalFunc(Rational(c)) {}  // NOLINT
  explicit RationalFunc(UniPoly num);
  RationalFunc(UniPoly num, UniPoly den);

  static RationalFunc variable();

  const UniPoly& num() const { return num_; }
  const UniPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  /// Sign of the numerator's leading coefficient (0 for zero).
  int leading_sign() const;

  /// Throws AlgebraError at a pole.
  Rational evaluate(const Rational& x) const;
  /// f(inner). Throws AlgebraError when inner is a pole of f.
  RationalFunc compose(const RationalFunc& inner) const;
  RationalFunc derivative() const;

  RationalFunc operator-() const;
  friend RationalFunc operator+(const RationalFunc& x, const RationalFunc& y);
  friend RationalFunc operator-(const RationalFunc& x, const RationalFunc& y);
  friend RationalFunc operator*(const RationalFunc& x, const RationalFunc& y);
  friend RationalFunc operator/(const RationalFunc& x, const RationalFunc& y);
  friend bool operator==(const RationalFunc& x, const RationalFunc& y) = default;

  /// "-(3*a+1)/(a+3)"; polynomials print without a denominator.
  std::string str() const;

 private:
  UniPoly num_;
  UniPoly den_;
  void normalize();
};

enum class ArithOp { add, sub, mul, div };

RationalFunc rf_arith(ArithOp op, const RationalFunc& x, const RationalFunc& y);
RationalFunc rf_derivative(const RationalFunc& f);
std::optional<RationalFunc> rf_sqrt(const RationalFunc& f);

/// Power product of the curvature derivatives k^{(1)} = p, k^{(2)} = q,
/// k^{(3)}, ... Generator indices start at 1.
class Monomial {
 public:
  static constexpr int kMaxGenerators = 8;

  static Monomial one() { return {}; }
  static Monomial generator(int j);

  int degree(int j) const;
  int total_degree() const;
  bool is_one() const { return total_degree() == 0; }

  Monomial operator*(const Monomial& other) const;
  friend bool operator==(const Monomial&, const Monomial&) = default;

  /// "1", "p", "p^2*q", "k3".
  std::string str() const;
  static std::string generator_name(int j);

  /// Graded order: total degree first, then by p-degree descending, then q...
  struct Order {
    bool operator()(const Monomial& x, const Monomial& y) const;
  };

 private:
  std::array<std::uint8_t, kMaxGenerators> exps_{};
};

/// Polynomial in p, q, ... with coefficients in Q(a). Zero coefficients are
/// never stored. Total degree is capped at kDegreeCap; exceeding it throws,
/// since every quantity in the derivation stays below the cap.
class ParamPoly {
 public:
  static constexpr int kDegreeCap = 2;
  using TermMap = std::map<Monomial, RationalFunc, Monomial::Order>;

  ParamPoly() = default;
  ParamPoly(const RationalFunc& c);  // NOLINT(google-explicit-constructor)
  ParamPoly(const Rational& c) : ParamPoly(RationalFunc(c)) {}  // NOLINT
  ParamPoly(long c) : ParamPoly(RationalFunc(c)) {}  // NOLINT
  ParamPoly(const Monomial& m, const RationalFunc& c);

  static ParamPoly generator(int j);

  bool is_zero() const { return terms_.empty(); }
  /// True when only the constant monomial is present (or zero).
  bool is_scalar() const;
  /// The constant-monomial coefficient.
  RationalFunc scalar() const;
  RationalFunc coefficient(const Monomial& m) const;
  const TermMap& terms() const { return terms_; }
  int degree_in(int j) const;
  int total_degree() const;
  bool depends_on(int j) const { return degree_in(j) > 0; }

  /// Replaces k^{(j)} by factor * k^{(j)} (factor 0 sets it to zero).
  ParamPoly scale_generator(int j, const Rational& factor) const;

  ParamPoly operator-() const;
  friend ParamPoly operator+(const ParamPoly& x, const ParamPoly& y);
  friend ParamPoly operator-(const ParamPoly& x, const ParamPoly& y);
  friend ParamPoly operator*(const ParamPoly& x, const ParamPoly& y);
  friend bool operator==(const ParamPoly& x, const ParamPoly& y) = default;

  /// Terms in graded order joined by " + " / " - ".
  std::string str() const;

 private:
  TermMap terms_;
  void add_term(const Monomial& m, const RationalFunc& c);
};

/// Truncated power series c_0 + c_1 eps + ... + c_N eps^N + O(eps^{N+1}).
/// Arithmetic truncates to the smaller operand order; equality refuses to
/// compare series of different orders.
class EpsSeries {
 public:
  explicit EpsSeries(int order);
  EpsSeries(int order, std::vector<ParamPoly> coeffs);

  static EpsSeries constant(const ParamPoly& c, int order);
  /// The series eps (order >= 1).
  static EpsSeries epsilon(int order);

  int order() const { return order_; }
  const ParamPoly& coeff(int i) const;
  std::span<const ParamPoly> coefficients() const { return coeffs_; }
  /// Index of the first nonzero coefficient; order + 1 for the zero series.
  int valuation() const;
  bool is_zero() const { return valuation() > order_; }

  /// Multiplies by eps^k; the result is known to order + k.
  EpsSeries shift_up(int k) const;
  /// Divides by eps^k. Requires the first k coefficients to vanish.
  EpsSeries shift_down(int k) const;
  EpsSeries truncated(int order) const;
  /// Raises the order, declaring the new coefficients zero. Only valid when
  /// the caller knows those terms cannot influence the result it needs.
  EpsSeries extended_with_zeros(int order) const;
  EpsSeries pow(int n) const;
  /// Applies fn to every coefficient.
  template <typename Fn>
  EpsSeries map(Fn&& fn) const {
    EpsSeries out(order_);
    for (int i = 0; i <= order_; ++i) out.coeffs_[i] = fn(coeffs_[i]);
    return out;
  }

  EpsSeries operator-() const;
  friend EpsSeries operator+(const EpsSeries& x, const EpsSeries& y);
  friend EpsSeries operator-(const EpsSeries& x, const EpsSeries& y);
  friend EpsSeries operator*(const EpsSeries& x, const EpsSeries& y);
  friend EpsSeries operator*(const ParamPoly& c, const EpsSeries& x);
  friend bool operator==(const EpsSeries& x, const EpsSeries& y);

  /// "c0 + (c1)*eps + ... + O(eps^N+1)"; zero coefficients are skipped.
  std::string str() const;

 private:
  int order_;
  std::vector<ParamPoly> coeffs_;
};

/// add/sub/mul of two series of the same order. Throws AlgebraError on an
/// order mismatch or for div.
EpsSeries series_arith(ArithOp op, const EpsSeries& x, const EpsSeries& y);

/// Triple of series sharing one truncation order.
class SeriesVec3 {
 public:
  SeriesVec3(EpsSeries x, EpsSeries y, EpsSeries z);

  const EpsSeries& x() const { return x_; }
  const EpsSeries& y() const { return y_; }
  const EpsSeries& z() const { return z_; }
  const EpsSeries& operator[](int i) const;
  int order() const { return x_.order(); }

 private:
  EpsSeries x_, y_, z_;
};

SeriesVec3 cross(const SeriesVec3& u, const SeriesVec3& v);
EpsSeries dot(const SeriesVec3& u, const SeriesVec3& v);

/// det[c1, c2, c3] by cofactor expansion along the first column.
EpsSeries series_det3(const SeriesVec3& c1, const SeriesVec3& c2, const SeriesVec3& c3);

/// f(center + increment) = sum_k f^{(k)}(center)/k! increment^k, truncated to
/// the increment's order. The increment must have no constant term.
EpsSeries rf_compose_shift(const RationalFunc& f, const RationalFunc& center,
                           const EpsSeries& increment);

/// Coefficient-wise extension of rf_compose_shift to f in Q(a)[p, q, ...].
EpsSeries compose_shift(const ParamPoly& f, const RationalFunc& center,
                        const EpsSeries& increment);

}  // namespace conics::algebra
