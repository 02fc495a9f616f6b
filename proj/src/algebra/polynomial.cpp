#include <algorithm>
#include <sstream>

#include "conics/errors.hpp"
#include "conics/exact_algebra.hpp"

namespace conics::algebra {

namespace {

const Rational kZero{0};

std::string rational_str(const Rational& r) {
  return r.get_str();
}

bool is_integer(const Rational& r) {
  return r.get_den() == 1;
}

std::optional<Rational> rational_sqrt(const Rational& r) {
  if (sgn(r) < 0) return std::nullopt;
  const mpz_class& n = r.get_num();
  const mpz_class& d = r.get_den();
  if (mpz_perfect_square_p(n.get_mpz_t()) == 0 || mpz_perfect_square_p(d.get_mpz_t()) == 0) {
    return std::nullopt;
  }
  mpz_class sn;
  mpz_class sd;
  mpz_sqrt(sn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(sd.get_mpz_t(), d.get_mpz_t());
  return Rational(sn, sd);
}

std::string wrapped(const UniPoly& p) {
  if (p.term_count() > 1 || (p.term_count() == 1 && !is_integer(p.leading()))) {
    return "(" + p.str() + ")";
  }
  return p.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// UniPoly

UniPoly::UniPoly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
  trim();
}

UniPoly UniPoly::constant(const Rational& c) {
  return UniPoly(std::vector<Rational>{c});
}

UniPoly UniPoly::monomial(const Rational& c, int degree) {
  std::vector<Rational> v(static_cast<std::size_t>(degree) + 1);
  v.back() = c;
  return UniPoly(std::move(v));
}

UniPoly UniPoly::variable() {
  return monomial(1, 1);
}

void UniPoly::trim() {
  while (!coeffs_.empty() && sgn(coeffs_.back()) == 0) coeffs_.pop_back();
}

int UniPoly::term_count() const {
  return static_cast<int>(
      std::count_if(coeffs_.begin(), coeffs_.end(), [](const Rational& c) { return sgn(c) != 0; }));
}

Rational UniPoly::coeff(int i) const {
  if (i < 0 || i > degree()) return 0;
  return coeffs_[static_cast<std::size_t>(i)];
}

const Rational& UniPoly::leading() const {
  return coeffs_.empty() ? kZero : coeffs_.back();
}

Rational UniPoly::evaluate(const Rational& x) const {
  Rational acc = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

UniPoly UniPoly::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<Rational> d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * static_cast<long>(i);
  return UniPoly(std::move(d));
}

UniPoly UniPoly::monic() const {
  if (is_zero()) return {};
  const Rational inv = 1 / leading();
  return inv * *this;
}

UniPoly UniPoly::operator-() const {
  UniPoly out = *this;
  for (auto& c : out.coeffs_) c = -c;
  return out;
}

UniPoly operator+(const UniPoly& x, const UniPoly& y) {
  std::vector<Rational> v(std::max(x.coeffs_.size(), y.coeffs_.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i < x.coeffs_.size()) v[i] += x.coeffs_[i];
    if (i < y.coeffs_.size()) v[i] += y.coeffs_[i];
  }
  return UniPoly(std::move(v));
}

UniPoly operator-(const UniPoly& x, const UniPoly& y) {
  return x + (-y);
}

UniPoly operator*(const UniPoly& x, const UniPoly& y) {
  if (x.is_zero() || y.is_zero()) return {};
  std::vector<Rational> v(x.coeffs_.size() + y.coeffs_.size() - 1);
  for (std::size_t i = 0; i < x.coeffs_.size(); ++i) {
    if (sgn(x.coeffs_[i]) == 0) continue;
    for (std::size_t j = 0; j < y.coeffs_.size(); ++j) v[i + j] += x.coeffs_[i] * y.coeffs_[j];
  }
  return UniPoly(std::move(v));
}

UniPoly operator*(const Rational& c, const UniPoly& x) {
  if (sgn(c) == 0) return {};
  UniPoly out = x;
  for (auto& v : out.coeffs_) v *= c;
  return out;
}

std::string UniPoly::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    const Rational& c = coeffs_[static_cast<std::size_t>(i)];
    if (sgn(c) == 0) continue;
    const Rational mag = abs(c);
    if (sgn(c) < 0) {
      os << "-";
    } else if (!first) {
      os << "+";
    }
    first = false;
    if (i == 0) {
      os << rational_str(mag);
      continue;
    }
    if (mag != 1) os << rational_str(mag) << "*";
    os << "a";
    if (i > 1) os << "^" << i;
  }
  return os.str();
}

std::pair<UniPoly, UniPoly> poly_divmod(const UniPoly& u, const UniPoly& v) {
  if (v.is_zero()) throw AlgebraError("polynomial division by zero");
  if (u.degree() < v.degree()) return {UniPoly{}, u};
  std::vector<Rational> rem(u.coefficients().begin(), u.coefficients().end());
  std::vector<Rational> quot(static_cast<std::size_t>(u.degree() - v.degree()) + 1);
  const Rational inv_lead = 1 / v.leading();
  const int dv = v.degree();
  for (int k = u.degree() - dv; k >= 0; --k) {
    const Rational c = rem[static_cast<std::size_t>(k + dv)] * inv_lead;
    quot[static_cast<std::size_t>(k)] = c;
    if (sgn(c) == 0) continue;
    for (int j = 0; j <= dv; ++j) rem[static_cast<std::size_t>(k + j)] -= c * v.coeff(j);
  }
  rem.resize(static_cast<std::size_t>(dv));
  return {UniPoly(std::move(quot)), UniPoly(std::move(rem))};
}

UniPoly poly_gcd(const UniPoly& u, const UniPoly& v) {
  UniPoly x = u;
  UniPoly y = v;
  while (!y.is_zero()) {
    UniPoly r = poly_divmod(x, y).second;
    x = std::move(y);
    // Keeping the remainder monic bounds coefficient growth over Q.
    y = r.monic();
  }
  return x.monic();
}

std::optional<UniPoly> poly_sqrt(const UniPoly& u) {
  if (u.is_zero()) return UniPoly{};
  if (u.degree() % 2 != 0) return std::nullopt;
  const int n = u.degree() / 2;
  auto lead = rational_sqrt(u.leading());
  if (!lead) return std::nullopt;
  std::vector<Rational> s(static_cast<std::size_t>(n) + 1);
  s[static_cast<std::size_t>(n)] = *lead;
  for (int i = n - 1; i >= 0; --i) {
    // Coefficient of a^{n+i} in s^2 involves s_i only through 2 s_n s_i.
    Rational target = u.coeff(n + i);
    for (int j = i + 1; j <= n; ++j) {
      const int l = n + i - j;
      if (l > i && l <= n) target -= s[static_cast<std::size_t>(j)] * s[static_cast<std::size_t>(l)];
    }
    s[static_cast<std::size_t>(i)] = target / (2 * *lead);
  }
  UniPoly root(std::move(s));
  if (!(root * root == u)) return std::nullopt;
  return root;
}

// ---------------------------------------------------------------------------
// RationalFunc

RationalFunc::RationalFunc(const Rational& c) : num_(UniPoly::constant(c)), den_(UniPoly::constant(1)) {}

RationalFunc::RationalFunc(UniPoly num) : num_(std::move(num)), den_(UniPoly::constant(1)) {}

RationalFunc::RationalFunc(UniPoly num, UniPoly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw AlgebraError("rational function with zero denominator");
  normalize();
}

RationalFunc RationalFunc::variable() {
  return RationalFunc(UniPoly::variable());
}

void RationalFunc::normalize() {
  if (num_.is_zero()) {
    den_ = UniPoly::constant(1);
    return;
  }
  if (!den_.is_constant()) {
    UniPoly g = poly_gcd(num_, den_);
    if (g.degree() > 0) {
      num_ = poly_divmod(num_, g).first;
      den_ = poly_divmod(den_, g).first;
    }
  }
  const Rational inv = 1 / den_.leading();
  if (inv != 1) {
    num_ = inv * num_;
    den_ = inv * den_;
  }
}

int RationalFunc::leading_sign() const {
  return sgn(num_.leading());
}

Rational RationalFunc::evaluate(const Rational& x) const {
  const Rational d = den_.evaluate(x);
  if (sgn(d) == 0) throw AlgebraError("rational function evaluated at a pole");
  return num_.evaluate(x) / d;
}

namespace {

RationalFunc horner(const UniPoly& p, const RationalFunc& x) {
  RationalFunc acc;
  for (int i = p.degree(); i >= 0; --i) acc = acc * x + RationalFunc(p.coeff(i));
  return acc;
}

}  // namespace

RationalFunc RationalFunc::compose(const RationalFunc& inner) const {
  const RationalFunc d = horner(den_, inner);
  if (d.is_zero()) throw AlgebraError("composition hits a pole: " + str() + " at " + inner.str());
  return horner(num_, inner) / d;
}

RationalFunc RationalFunc::derivative() const {
  return RationalFunc(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
}

RationalFunc RationalFunc::operator-() const {
  RationalFunc out = *this;
  out.num_ = -out.num_;
  return out;
}

RationalFunc operator+(const RationalFunc& x, const RationalFunc& y) {
  if (x.is_zero()) return y;
  if (y.is_zero()) return x;
  if (x.den_ == y.den_) return RationalFunc(x.num_ + y.num_, x.den_);
  return RationalFunc(x.num_ * y.den_ + y.num_ * x.den_, x.den_ * y.den_);
}

RationalFunc operator-(const RationalFunc& x, const RationalFunc& y) {
  return x + (-y);
}

RationalFunc operator*(const RationalFunc& x, const RationalFunc& y) {
  if (x.is_zero() || y.is_zero()) return {};
  return RationalFunc(x.num_ * y.num_, x.den_ * y.den_);
}

RationalFunc operator/(const RationalFunc& x, const RationalFunc& y) {
  if (y.is_zero()) throw AlgebraError("division by the zero rational function");
  return RationalFunc(x.num_ * y.den_, x.den_ * y.num_);
}

std::string RationalFunc::str() const {
  if (den_ == UniPoly::constant(1)) return num_.str();
  std::string n = leading_sign() < 0 ? "-" + wrapped(-num_) : wrapped(num_);
  return n + "/" + wrapped(den_);
}

RationalFunc rf_arith(ArithOp op, const RationalFunc& x, const RationalFunc& y) {
  switch (op) {
    case ArithOp::add:
      return x + y;
    case ArithOp::sub:
      return x - y;
    case ArithOp::mul:
      return x * y;
    case ArithOp::div:
      return x / y;
  }
  throw AlgebraError("unknown arithmetic operation");
}

RationalFunc rf_derivative(const RationalFunc& f) {
  return f.derivative();
}

std::optional<RationalFunc> rf_sqrt(const RationalFunc& f) {
  auto n = poly_sqrt(f.num());
  auto d = poly_sqrt(f.den());
  if (!n || !d) return std::nullopt;
  return RationalFunc(*n, *d);
}

}  // namespace conics::algebra
