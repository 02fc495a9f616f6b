#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

#include "conics/circle_dynamics.hpp"
#include "conics/errors.hpp"

namespace conics::dynamics {

using geometry::circle_distance;
using geometry::kTwoPi;

namespace {

double signed_gap(double y, double x) {
  return std::remainder(y - x, kTwoPi);
}

}  // namespace

std::vector<Convergent> convergents(double x, long long max_q, double tol) {
  std::vector<Convergent> out;
  long long p0 = 1, q0 = 0;
  long long p1 = static_cast<long long>(std::floor(x)), q1 = 1;
  out.push_back({p1, q1});
  double r = x - std::floor(x);
  for (int i = 0; i < 64 && r > tol; ++i) {
    const double inv = 1.0 / r;
    const long long a = static_cast<long long>(std::floor(inv));
    r = inv - static_cast<double>(a);
    const long long p2 = a * p1 + p0;
    const long long q2 = a * q1 + q0;
    if (q2 > max_q) break;
    out.push_back({p2, q2});
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    if (std::abs(x - static_cast<double>(p1) / static_cast<double>(q1)) <= tol) break;
  }
  return out;
}

RotationEstimate rotation_number(const CircleMap& F, double x0, long long N) {
  if (N < 1) throw DynamicsError("rotation_number needs at least one iteration");
  if (!F.preserves_orientation()) throw DynamicsError("rotation number needs an orientation-preserving map");
  Involution::Lifted s{std::fmod(std::fmod(x0, kTwoPi) + kTwoPi, kTwoPi), 0};
  const double start = s.x;
  for (long long i = 0; i < N; ++i) s = F.lift(s);
  const double total = (s.x - start) / kTwoPi + static_cast<double>(s.turns);
  double rho = total / static_cast<double>(N);
  rho -= std::floor(rho);
  if (rho >= 1.0 - 1e-13) rho = 0.0;
  RotationEstimate est;
  est.value = rho;
  est.iterations = N;
  est.error_bound = 1.0 / static_cast<double>(N);
  est.convergents = convergents(rho, std::max<long long>(1, static_cast<long long>(std::sqrt(static_cast<double>(N)))),
                                est.error_bound);
  return est;
}

double periodicity_defect(const CircleMap& F, int q, int grid) {
  if (q < 1 || grid < 1) throw DynamicsError("periodicity_defect needs q >= 1 and a nonempty grid");
  double worst = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double x = kTwoPi * i / grid;
    worst = std::max(worst, circle_distance(F.iterate(x, q), x));
  }
  return worst;
}

double involution_identity_defect(const OvalPtr& oval, const PlanePoint& P, const PlanePoint& Q, int grid) {
  const Involution fp = Involution::pencil(oval, P);
  const Involution fq = Involution::pencil(oval, Q);
  double worst = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double x = kTwoPi * i / grid;
    worst = std::max(worst, circle_distance(fq(fp(fq(x))), fp(x)));
  }
  return worst;
}

std::vector<double> fixed_points(const CircleMap& F, int samples) {
  if (F.is_identity()) throw DynamicsError("identity map: every point is fixed");
  auto d = [&](double t) { return signed_gap(F(t), t); };
  auto dd = [&](double t) { return F.derivative(t) - 1.0; };
  std::vector<double> xs(static_cast<std::size_t>(samples) + 1);
  std::vector<double> ds(xs.size());
  for (int i = 0; i <= samples; ++i) {
    xs[static_cast<std::size_t>(i)] = kTwoPi * i / samples;
    ds[static_cast<std::size_t>(i)] = i == samples ? ds[0] : d(xs[static_cast<std::size_t>(i)]);
  }
  double widest = 0.0;
  for (double v : ds) widest = std::max(widest, std::abs(v));
  if (widest <= 1e-10) throw DynamicsError("map is the identity to within 1e-10: every point is fixed");
  std::vector<double> roots;
  for (int i = 0; i < samples; ++i) {
    const double a = ds[static_cast<std::size_t>(i)];
    const double b = ds[static_cast<std::size_t>(i) + 1];
    if (a == 0.0) {
      roots.push_back(xs[static_cast<std::size_t>(i)]);
      continue;
    }
    // Jumps across +-pi are branch cuts of the remainder, not fixed points.
    if ((a < 0.0) == (b < 0.0) || b == 0.0 || std::abs(a) > kTwoPi / 4 || std::abs(b) > kTwoPi / 4) continue;
    double r = geometry::solve_bracketed(d, dd, xs[static_cast<std::size_t>(i)], xs[static_cast<std::size_t>(i) + 1]);
    roots.push_back(std::fmod(r + kTwoPi, kTwoPi));
  }
  std::sort(roots.begin(), roots.end());
  std::vector<double> out;
  for (double r : roots) {
    if (out.empty() || circle_distance(out.back(), r) > 1e-9) out.push_back(r);
  }
  if (out.size() > 1 && circle_distance(out.front(), out.back()) <= 1e-9) out.pop_back();
  return out;
}

MobiusDiagnostics mobius_reciprocity(const CircleMap& F) {
  MobiusDiagnostics m;
  m.fixed_points = fixed_points(F);
  if (m.fixed_points.size() != 2) {
    std::ostringstream os;
    os << "reciprocity needs exactly two fixed points, found " << m.fixed_points.size();
    throw DynamicsError(os.str());
  }
  for (double x : m.fixed_points) m.derivatives.push_back(F.derivative(x));
  m.reciprocity_defect = std::abs(m.derivatives[0] * m.derivatives[1] - 1.0);
  return m;
}

namespace {

struct Koenigs {
  const CircleMap& map;
  double fixed;
  double lambda;
  double corrector;
  double radius;
  int max_iterations;
  mutable int used = 0;

  // lim lambda^{-n} psi(F^n(x) - fixed) with psi(u) = u + c u^2.
  double operator()(double x) const {
    double u = signed_gap(x, fixed);
    double scale = 1.0;
    int n = 0;
    while (std::abs(u) >= radius && n < max_iterations) {
      x = map(x);
      u = signed_gap(x, fixed);
      scale /= lambda;
      ++n;
    }
    used = std::max(used, n);
    if (std::abs(u) >= radius) throw DynamicsError("Koenigs iteration did not reach the fixed point");
    return scale * (u + corrector * u * u);
  }
};

double second_derivative(const CircleMap& F, double x) {
  const double h = 1e-5;
  return (F.derivative(x + h) - F.derivative(x - h)) / (2.0 * h);
}

}  // namespace

LinearizationReport linearization_obstruction(const CircleMap& F, const ObstructionOptions& opts) {
  if (!F.preserves_orientation()) throw DynamicsError("linearization needs an orientation-preserving map");
  const MobiusDiagnostics m = mobius_reciprocity(F);
  const int ia = m.derivatives[0] < 1.0 ? 0 : 1;
  const double xa = m.fixed_points[static_cast<std::size_t>(ia)];
  const double xr = m.fixed_points[static_cast<std::size_t>(1 - ia)];
  const double lambda = m.derivatives[static_cast<std::size_t>(ia)];
  if (std::abs(lambda - 1.0) < opts.refuse_band || !(lambda > 0.0)) {
    std::ostringstream os;
    os << "multiplier " << lambda << " too close to 1: parabolic regime";
    throw DynamicsError(os.str());
  }
  const CircleMap G = F.inverse();
  const double mu = G.derivative(xr);
  const Koenigs plus{F, xa, lambda, second_derivative(F, xa) / (2.0 * lambda * (1.0 - lambda)), opts.koenigs_radius,
                     opts.max_iterations};
  const Koenigs minus{G, xr, mu, second_derivative(G, xr) / (2.0 * mu * (1.0 - mu)), opts.koenigs_radius,
                      opts.max_iterations};

  // Middle third of each arc between the fixed points.
  const double arc1 = std::fmod(xr - xa + kTwoPi, kTwoPi);
  const int n = std::max(2, opts.overlap_samples);
  std::vector<double> y;
  std::vector<double> w;
  for (int side = 0; side < 2; ++side) {
    const double start = side == 0 ? xa : xr;
    const double len = side == 0 ? arc1 : kTwoPi - arc1;
    for (int j = 0; j < n; ++j) {
      const double x = start + len * (1.0 / 3.0 + (1.0 / 3.0) * j / (n - 1));
      y.push_back(1.0 / plus(x));
      w.push_back(minus(x));
    }
  }
  const auto rows = static_cast<Eigen::Index>(y.size());
  Eigen::MatrixXd A(rows, 2);
  Eigen::VectorXd b(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    A(i, 0) = w[static_cast<std::size_t>(i)];
    A(i, 1) = 1.0;
    b(i) = y[static_cast<std::size_t>(i)];
  }
  const Eigen::Vector2d coef = A.colPivHouseholderQr().solve(b);
  const Eigen::VectorXd resid = A * coef - b;
  LinearizationReport rep;
  rep.obstruction = resid.cwiseAbs().maxCoeff() / b.cwiseAbs().maxCoeff();
  rep.lambda = lambda;
  rep.attracting = xa;
  rep.repelling = xr;
  rep.samples = static_cast<int>(rows);
  rep.max_iterations_used = std::max(plus.used, minus.used);
  return rep;
}

}  // namespace conics::dynamics
