#include <algorithm>
#include <numeric>
#include <sstream>

#include "conics/errors.hpp"
#include "conics/exact_algebra.hpp"

namespace conics::algebra {

// ---------------------------------------------------------------------------
// Monomial

Monomial Monomial::generator(int j) {
  if (j < 1 || j > kMaxGenerators) throw AlgebraError("generator index out of range");
  Monomial m;
  m.exps_[static_cast<std::size_t>(j - 1)] = 1;
  return m;
}

int Monomial::degree(int j) const {
  if (j < 1 || j > kMaxGenerators) return 0;
  return exps_[static_cast<std::size_t>(j - 1)];
}

int Monomial::total_degree() const {
  return std::accumulate(exps_.begin(), exps_.end(), 0);
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial m;
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    const int e = exps_[i] + other.exps_[i];
    if (e > 255) throw AlgebraError("monomial exponent overflow");
    m.exps_[i] = static_cast<std::uint8_t>(e);
  }
  return m;
}

std::string Monomial::generator_name(int j) {
  if (j == 1) return "p";
  if (j == 2) return "q";
  return "k" + std::to_string(j);
}

std::string Monomial::str() const {
  if (is_one()) return "1";
  std::string out;
  for (int j = 1; j <= kMaxGenerators; ++j) {
    const int e = degree(j);
    if (e == 0) continue;
    if (!out.empty()) out += "*";
    out += generator_name(j);
    if (e > 1) out += "^" + std::to_string(e);
  }
  return out;
}

bool Monomial::Order::operator()(const Monomial& x, const Monomial& y) const {
  const int dx = x.total_degree();
  const int dy = y.total_degree();
  if (dx != dy) return dx < dy;
  // Within a degree: p^2 before p*q before q^2.
  return std::lexicographical_compare(y.exps_.begin(), y.exps_.end(), x.exps_.begin(), x.exps_.end());
}

// ---------------------------------------------------------------------------
// ParamPoly

namespace {

bool has_top_level_sum(const std::string& s) {
  int depth = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char ch = s[i];
    if (ch == '(') ++depth;
    if (ch == ')') --depth;
    if (depth == 0 && i > 0 && (ch == '+' || ch == '-')) return true;
  }
  return false;
}

}  // namespace

ParamPoly::ParamPoly(const RationalFunc& c) {
  add_term(Monomial::one(), c);
}

ParamPoly::ParamPoly(const Monomial& m, const RationalFunc& c) {
  add_term(m, c);
}

ParamPoly ParamPoly::generator(int j) {
  return ParamPoly(Monomial::generator(j), RationalFunc(1L));
}

void ParamPoly::add_term(const Monomial& m, const RationalFunc& c) {
  if (c.is_zero()) return;
  if (m.total_degree() > kDegreeCap) {
    throw AlgebraError("parameter monomial " + m.str() + " exceeds the degree cap");
  }
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

bool ParamPoly::is_scalar() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

RationalFunc ParamPoly::scalar() const {
  return coefficient(Monomial::one());
}

RationalFunc ParamPoly::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? RationalFunc() : it->second;
}

int ParamPoly::degree_in(int j) const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree(j));
  return d;
}

int ParamPoly::total_degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.total_degree());
  return d;
}

ParamPoly ParamPoly::scale_generator(int j, const Rational& factor) const {
  ParamPoly out;
  for (const auto& [m, c] : terms_) {
    Rational f = 1;
    for (int e = 0; e < m.degree(j); ++e) f *= factor;
    out.add_term(m, RationalFunc(f) * c);
  }
  return out;
}

ParamPoly ParamPoly::operator-() const {
  ParamPoly out = *this;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

ParamPoly operator+(const ParamPoly& x, const ParamPoly& y) {
  ParamPoly out = x;
  for (const auto& [m, c] : y.terms_) out.add_term(m, c);
  return out;
}

ParamPoly operator-(const ParamPoly& x, const ParamPoly& y) {
  return x + (-y);
}

ParamPoly operator*(const ParamPoly& x, const ParamPoly& y) {
  ParamPoly out;
  for (const auto& [mx, cx] : x.terms_) {
    for (const auto& [my, cy] : y.terms_) out.add_term(mx * my, cx * cy);
  }
  return out;
}

std::string ParamPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    const bool negative = c.leading_sign() < 0;
    const RationalFunc mag = negative ? -c : c;
    if (negative) {
      os << (first ? "-" : " - ");
    } else if (!first) {
      os << " + ";
    }
    first = false;
    if (m.is_one()) {
      const std::string s = mag.str();
      os << (negative && has_top_level_sum(s) ? "(" + s + ")" : s);
      continue;
    }
    if (mag == RationalFunc(1L)) {
      os << m.str();
      continue;
    }
    const std::string s = mag.str();
    const bool atom = s.find_first_of("+-/*") == std::string::npos;
    os << (atom ? s : "(" + s + ")") << "*" << m.str();
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// EpsSeries

EpsSeries::EpsSeries(int order) : order_(order), coeffs_(static_cast<std::size_t>(order) + 1) {
  if (order < 0) throw AlgebraError("negative truncation order");
}

EpsSeries::EpsSeries(int order, std::vector<ParamPoly> coeffs) : EpsSeries(order) {
  if (coeffs.size() > coeffs_.size()) throw AlgebraError("more coefficients than the truncation order allows");
  std::move(coeffs.begin(), coeffs.end(), coeffs_.begin());
}

EpsSeries EpsSeries::constant(const ParamPoly& c, int order) {
  EpsSeries s(order);
  s.coeffs_[0] = c;
  return s;
}

EpsSeries EpsSeries::epsilon(int order) {
  if (order < 1) throw AlgebraError("eps needs truncation order >= 1");
  EpsSeries s(order);
  s.coeffs_[1] = ParamPoly(1L);
  return s;
}

const ParamPoly& EpsSeries::coeff(int i) const {
  if (i < 0 || i > order_) throw AlgebraError("coefficient index beyond truncation order");
  return coeffs_[static_cast<std::size_t>(i)];
}

int EpsSeries::valuation() const {
  for (int i = 0; i <= order_; ++i) {
    if (!coeffs_[static_cast<std::size_t>(i)].is_zero()) return i;
  }
  return order_ + 1;
}

EpsSeries EpsSeries::shift_up(int k) const {
  EpsSeries out(order_ + k);
  for (int i = 0; i <= order_; ++i) out.coeffs_[static_cast<std::size_t>(i + k)] = coeffs_[static_cast<std::size_t>(i)];
  return out;
}

EpsSeries EpsSeries::shift_down(int k) const {
  if (k > order_) throw AlgebraError("shift exceeds truncation order");
  if (valuation() < k) throw AlgebraError("cannot divide by eps^" + std::to_string(k) + ": low coefficients are nonzero");
  EpsSeries out(order_ - k);
  for (int i = k; i <= order_; ++i) out.coeffs_[static_cast<std::size_t>(i - k)] = coeffs_[static_cast<std::size_t>(i)];
  return out;
}

EpsSeries EpsSeries::truncated(int order) const {
  if (order > order_) throw AlgebraError("cannot truncate to a higher order");
  EpsSeries out(order);
  std::copy_n(coeffs_.begin(), order + 1, out.coeffs_.begin());
  return out;
}

EpsSeries EpsSeries::extended_with_zeros(int order) const {
  if (order < order_) return truncated(order);
  EpsSeries out(order);
  std::copy(coeffs_.begin(), coeffs_.end(), out.coeffs_.begin());
  return out;
}

EpsSeries EpsSeries::pow(int n) const {
  if (n < 0) throw AlgebraError("negative series power");
  EpsSeries out = constant(ParamPoly(1L), order_);
  for (int i = 0; i < n; ++i) out = out * *this;
  return out;
}

EpsSeries EpsSeries::operator-() const {
  return map([](const ParamPoly& c) { return -c; });
}

EpsSeries operator+(const EpsSeries& x, const EpsSeries& y) {
  EpsSeries out(std::min(x.order_, y.order_));
  for (int i = 0; i <= out.order_; ++i) out.coeffs_[static_cast<std::size_t>(i)] = x.coeff(i) + y.coeff(i);
  return out;
}

EpsSeries operator-(const EpsSeries& x, const EpsSeries& y) {
  EpsSeries out(std::min(x.order_, y.order_));
  for (int i = 0; i <= out.order_; ++i) out.coeffs_[static_cast<std::size_t>(i)] = x.coeff(i) - y.coeff(i);
  return out;
}

EpsSeries operator*(const EpsSeries& x, const EpsSeries& y) {
  EpsSeries out(std::min(x.order_, y.order_));
  for (int i = 0; i <= out.order_; ++i) {
    const ParamPoly& xi = x.coeffs_[static_cast<std::size_t>(i)];
    if (xi.is_zero()) continue;
    for (int j = 0; i + j <= out.order_; ++j) {
      const ParamPoly& yj = y.coeffs_[static_cast<std::size_t>(j)];
      if (yj.is_zero()) continue;
      out.coeffs_[static_cast<std::size_t>(i + j)] = out.coeffs_[static_cast<std::size_t>(i + j)] + xi * yj;
    }
  }
  return out;
}

EpsSeries operator*(const ParamPoly& c, const EpsSeries& x) {
  return x.map([&c](const ParamPoly& v) { return c * v; });
}

bool operator==(const EpsSeries& x, const EpsSeries& y) {
  if (x.order_ != y.order_) {
    throw AlgebraError("comparison of series with truncation orders " + std::to_string(x.order_) + " and " +
                       std::to_string(y.order_));
  }
  return x.coeffs_ == y.coeffs_;
}

std::string EpsSeries::str() const {
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i <= order_; ++i) {
    const ParamPoly& c = coeffs_[static_cast<std::size_t>(i)];
    if (c.is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    if (i == 0) {
      os << c.str();
      continue;
    }
    os << "(" << c.str() << ")*eps";
    if (i > 1) os << "^" << i;
  }
  if (first) os << "0";
  os << " + O(eps^" << order_ + 1 << ")";
  return os.str();
}

EpsSeries series_arith(ArithOp op, const EpsSeries& x, const EpsSeries& y) {
  if (x.order() != y.order()) {
    throw AlgebraError("series order mismatch: " + std::to_string(x.order()) + " vs " + std::to_string(y.order()));
  }
  switch (op) {
    case ArithOp::add:
      return x + y;
    case ArithOp::sub:
      return x - y;
    case ArithOp::mul:
      return x * y;
    case ArithOp::div:
      break;
  }
  throw AlgebraError("series division is not supported");
}

// ---------------------------------------------------------------------------
// SeriesVec3

SeriesVec3::SeriesVec3(EpsSeries x, EpsSeries y, EpsSeries z)
    : x_(std::move(x)), y_(std::move(y)), z_(std::move(z)) {
  if (x_.order() != y_.order() || x_.order() != z_.order()) {
    throw AlgebraError("series vector components must share one truncation order");
  }
}

const EpsSeries& SeriesVec3::operator[](int i) const {
  switch (i) {
    case 0:
      return x_;
    case 1:
      return y_;
    case 2:
      return z_;
    default:
      throw AlgebraError("series vector index out of range");
  }
}

SeriesVec3 cross(const SeriesVec3& u, const SeriesVec3& v) {
  return {u.y() * v.z() - u.z() * v.y(), u.z() * v.x() - u.x() * v.z(), u.x() * v.y() - u.y() * v.x()};
}

EpsSeries dot(const SeriesVec3& u, const SeriesVec3& v) {
  return u.x() * v.x() + u.y() * v.y() + u.z() * v.z();
}

EpsSeries series_det3(const SeriesVec3& c1, const SeriesVec3& c2, const SeriesVec3& c3) {
  if (c1.order() != c2.order() || c1.order() != c3.order()) {
    throw AlgebraError("determinant columns must share one truncation order");
  }
  // Expansion along the first column.
  return c1.x() * (c2.y() * c3.z() - c2.z() * c3.y()) - c1.y() * (c2.x() * c3.z() - c2.z() * c3.x()) +
         c1.z() * (c2.x() * c3.y() - c2.y() * c3.x());
}

// ---------------------------------------------------------------------------
// Composition

EpsSeries rf_compose_shift(const RationalFunc& f, const RationalFunc& center, const EpsSeries& increment) {
  if (!increment.coeff(0).is_zero()) throw AlgebraError("composition increment must have zero constant term");
  const int order = increment.order();
  EpsSeries out(order);
  EpsSeries power = EpsSeries::constant(ParamPoly(1L), order);
  RationalFunc deriv = f;
  Rational factorial = 1;
  for (int k = 0; k <= order; ++k) {
    if (k > 0) {
      deriv = deriv.derivative();
      factorial *= k;
      power = power * increment;
    }
    const RationalFunc value = deriv.compose(center) / RationalFunc(factorial);
    out = out + ParamPoly(value) * power;
  }
  return out;
}

EpsSeries compose_shift(const ParamPoly& f, const RationalFunc& center, const EpsSeries& increment) {
  EpsSeries out(increment.order());
  for (const auto& [m, c] : f.terms()) {
    out = out + ParamPoly(m, RationalFunc(1L)) * rf_compose_shift(c, center, increment);
  }
  return out;
}

}  // namespace conics::algebra
