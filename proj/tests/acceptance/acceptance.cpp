// Acceptance gate. Prints one PASS/FAIL line per criterion, with detail lines
// underneath. `acceptance 3 5` runs a subset; exit status 1 when any fails.

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "conics/circle_dynamics.hpp"
#include "conics/experiments.hpp"
#include "conics/symbolic_verifier.hpp"

using namespace conics;
using geometry::Oval;
using geometry::OvalPtr;
using geometry::PlanePoint;
using geometry::Vec2;

namespace {

const double pi = M_PI;

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void note(const char* fmt, ...) __attribute__((format(printf, 2, 3))) {
    char buf[512];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    details.emplace_back(buf);
  }
  void require(bool ok) { pass = pass && ok; }
};

Vec2 dir(double a) { return {std::cos(a), std::sin(a)}; }

// 1. exact reproduction of the published k = +1 expansion
Outcome symbolic_reproduction() {
  Outcome o;
  auto ex = symbolic::solve_duality_expansion(1);
  auto defect = symbolic::involution_defect(ex);
  auto pub = symbolic::published_forms();
  auto item = [&](const std::string& name, const algebra::ParamPoly& got, const algebra::ParamPoly& want) {
    bool eq = got == want;
    o.require(eq);
    o.note("%s %s: got %s", eq ? "match   " : "MISMATCH", name.c_str(), got.str().c_str());
    if (!eq) {
      o.note("         expected %s%s", want.str().c_str(), got == -want ? "  (equal up to overall sign)" : "");
    }
  };
  for (int i = 0; i < 4; ++i) item("b" + std::to_string(i), ex.b.at(i), pub.b.at(i));
  item("f(f(a)) eps^3", defect.eps3_coefficient, pub.defect);
  return o;
}

// 2. residual certificate eps^4..eps^7
Outcome residual_certificate() {
  Outcome o;
  for (int k : {1, -1}) {
    auto cert = symbolic::certify_expansion(symbolic::solve_duality_expansion(k));
    std::string flags;
    for (std::size_t i = 4; i < cert.zero.size(); ++i) flags += cert.zero[i] ? " 0" : " NONZERO";
    o.require(cert.all_zero());
    o.note("k=%+d residual eps^4..eps^%d:%s", k, cert.condition_order, flags.c_str());
  }
  return o;
}

// 3. pole-polar incidence on conics over a 10 x 10 grid
Outcome conic_incidence() {
  Outcome o;
  const double selectors[10] = {-0.9, -0.7, -0.5, -0.3, -0.1, 0.1, 0.3, 0.5, 0.7, 0.9};
  for (auto [A, B] : std::vector<std::pair<double, double>>{{1, 1}, {2, 1}}) {
    auto oval = Oval::ellipse(A, B);
    double worst = 0;
    int n = 0;
    for (int i = 0; i < 10; ++i) {
      // exterior poles on rays at 10 angles, at increasing distance
      double ang = 2 * pi * i / 10 + 0.1, r = 1.05 + 0.25 * i;
      PlanePoint P(A * r * std::cos(ang), B * r * std::sin(ang));
      for (double s : selectors) {
        worst = std::max(worst, experiments::incidence_defect(*oval, P, s).defect);
        ++n;
      }
    }
    o.require(n == 100 && worst <= 1e-10);
    o.note("ellipse(%g,%g): %d pairs, max defect %.3g (bound 1e-10)", A, B, n, worst);
  }
  return o;
}

// 4. Richardson-extrapolated eps^3 law vs the exact coefficient
Outcome symbolic_numeric_bridge() {
  Outcome o;
  const std::vector<double> eps{0.1, 0.05, 0.025};
  double worst = 0;
  for (double p : {1.0, -2.0, 0.5}) {
    auto germ = Oval::ode_germ({1.0, p}, -0.5, 0.5);
    for (double a : {0.0, 0.3, -0.3, 0.5, -0.5}) {
      auto f = experiments::epsilon_scaling_fit(*germ, a, eps);
      worst = std::max(worst, f.relative_error);
      o.require(f.relative_error <= 1e-2);
    }
  }
  o.note("p in {1,-2,0.5}, a in {0,+-0.3,+-0.5}: max relative error %.3g (bound 1e-2)", worst);
  auto conic = Oval::ode_germ({1.0}, -0.5, 0.5);
  double ctrl = 0;
  for (double a : {0.0, 0.3, -0.3, 0.5, -0.5}) {
    ctrl = std::max(ctrl, std::abs(experiments::epsilon_scaling_fit(*conic, a, eps).extrapolated));
  }
  o.require(ctrl <= 1e-8);
  o.note("p=0 control: max |coefficient| %.3g (bound 1e-8)", ctrl);
  return o;
}

// 5. closed forms on the unit circle
Outcome circle_map_closed_forms() {
  Outcome o;
  auto c = Oval::ellipse(1, 1);
  const double pairs[10][2] = {{0, pi / 4}, {pi / 4, 0}, {1, 0},   {0.3, 2.9}, {2.0, 0.5},
                               {0.1, 0.2}, {3.0, 1.7}, {0.5, 0.5 + std::sqrt(2.0)}, {1.2, 2.2}, {2.8, 0.05}};
  double worst = 0;
  for (const auto& pr : pairs) {
    auto F = dynamics::compose(dynamics::involution_parallel(c, dir(pr[0])), dynamics::involution_parallel(c, dir(pr[1])));
    auto est = dynamics::rotation_number(F, 0.0, 1000000);
    double want = std::fmod((pr[0] - pr[1]) / pi, 1.0);
    if (want < 0) want += 1;
    double diff = std::abs(est.value - want);
    diff = std::min(diff, 1 - diff);
    worst = std::max(worst, diff);
  }
  o.require(worst <= 1e-6);
  o.note("10 direction pairs, N=1e6: max |rho - (da/pi mod 1)| %.3g (bound 1e-6)", worst);
  double per = 0;
  for (double a : {0.0, 0.7, 2.0}) {
    auto F = dynamics::compose(dynamics::involution_parallel(c, dir(a)), dynamics::involution_parallel(c, dir(a + pi / 2)));
    per = std::max(per, dynamics::periodicity_defect(F, 2, 128));
  }
  o.require(per <= 1e-10);
  o.note("perpendicular directions: max |F^2(x) - x| %.3g on 128 points (bound 1e-10)", per);
  return o;
}

// 6. fixed points are PQ meet gamma; multipliers are reciprocal
Outcome fixed_points_reciprocity() {
  Outcome o;
  std::vector<std::pair<std::string, OvalPtr>> ovals{
      {"ellipse(2,1)", Oval::ellipse(2, 1)},
      {"ellipse(1.5,0.7)", Oval::ellipse(1.5, 0.7)},
      {"fourier(3,0.05)", Oval::fourier_support(1.0, {{3, 0.05, 0.0}})},
      {"fourier(4,0.03)+(2,0.04,0.02)", Oval::fourier_support(1.0, {{2, 0.04, 0.02}, {4, 0.03, 0.0}})},
      {"fourier(5,0.02,0.01)", Oval::fourier_support(1.2, {{5, 0.02, 0.01}})}};
  std::mt19937_64 rng(20261018);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double worst_fp = 0, worst_rec = 0;
  for (int cfg = 0; cfg < 10; ++cfg) {
    const auto& [name, oval] = ovals[cfg % ovals.size()];
    const bool interior = cfg % 3 == 2;
    double t1 = geometry::kTwoPi * U(rng);
    double t2 = std::fmod(t1 + 0.6 + (geometry::kTwoPi - 1.2) * U(rng), geometry::kTwoPi);
    PlanePoint X1 = oval->point(t1), X2 = oval->point(t2);
    auto at = [&](double s) -> PlanePoint { return X1 + s * (X2 - X1); };
    double s1, s2;
    if (interior) {
      s1 = 0.15 + 0.3 * U(rng);
      s2 = 0.55 + 0.3 * U(rng);
    } else {
      s1 = U(rng) < 0.5 ? -0.2 - 2.5 * U(rng) : 1.2 + 2.5 * U(rng);
      do {
        s2 = U(rng) < 0.5 ? -0.2 - 2.5 * U(rng) : 1.2 + 2.5 * U(rng);
      } while (std::abs(s2 - s1) < 0.3);
    }
    auto F = dynamics::compose(dynamics::involution_pencil(oval, at(s1)), dynamics::involution_pencil(oval, at(s2)));
    auto fx = dynamics::fixed_points(F);
    double err = fx.size() == 2 ? 0.0 : INFINITY;
    if (fx.size() == 2) {
      std::vector<double> want{std::min(t1, t2), std::max(t1, t2)};
      for (int i = 0; i < 2; ++i) err = std::max(err, geometry::circle_distance(fx[i], want[i]));
    }
    auto mob = dynamics::mobius_reciprocity(F);
    worst_fp = std::max(worst_fp, err);
    worst_rec = std::max(worst_rec, mob.reciprocity_defect);
    o.note("%-30s %s P,Q: fixed-point error %.2g, |l1 l2 - 1| %.2g", name.c_str(),
           interior ? "interior" : "exterior", err, mob.reciprocity_defect);
  }
  o.require(worst_fp <= 1e-10 && worst_rec <= 1e-8);
  o.note("max fixed-point error %.3g (bound 1e-10), max reciprocity defect %.3g (bound 1e-8)", worst_fp, worst_rec);
  return o;
}

// 7. Moebius obstruction vanishes on ellipses; finite on a perturbed oval
Outcome mobius_obstruction() {
  Outcome o;
  struct Cfg {
    double A, B;
    PlanePoint P, Q;
  };
  const Cfg cfgs[5] = {{2, 1, {3, 0}, {5, 0}},
                       {1, 1, {3, 0}, {5, 0}},
                       {2, 1, {2.5, 1.2}, {-3.0, -0.6}},
                       {1.5, 0.6, {0.3, 2.0}, {-0.2, -1.5}},
                       {2, 1, {0.5, 0.1}, {-1.0, 0.3}}};  // both interior
  double worst = 0;
  for (const auto& c : cfgs) {
    auto oval = Oval::ellipse(c.A, c.B);
    auto F = dynamics::compose(dynamics::involution_pencil(oval, c.P), dynamics::involution_pencil(oval, c.Q));
    auto rep = dynamics::linearization_obstruction(F);
    worst = std::max(worst, rep.obstruction);
    o.note("ellipse(%g,%g) P=(%g,%g) Q=(%g,%g): obstruction %.3g, lambda %.4f", c.A, c.B, c.P.x(), c.P.y(), c.Q.x(),
           c.Q.y(), rep.obstruction, rep.lambda);
  }
  o.require(worst <= 1e-6);
  o.note("max over ellipses %.3g (bound 1e-6)", worst);
  auto pert = Oval::fourier_support(1.0, {{4, 0.03, 0.0}});
  auto F = dynamics::compose(dynamics::involution_pencil(pert, {2.5, 0.6}), dynamics::involution_pencil(pert, {-3.0, 0.3}));
  auto rep = dynamics::linearization_obstruction(F);
  o.require(std::isfinite(rep.obstruction));
  o.note("fourier(4,0.03) P=(2.5,0.6) Q=(-3,0.3): obstruction %.3g (reported, no bound)", rep.obstruction);
  return o;
}

// 8. inscribed parallelograms
Outcome centrally_symmetric() {
  Outcome o;
  for (auto [A, B] : std::vector<std::pair<double, double>>{{2, 1}, {1, 1}, {1.3, 0.4}}) {
    auto e = Oval::ellipse(A, B);
    for (Vec2 u : {Vec2(1, 0), Vec2(1, 0.4), Vec2(0.2, 1)}) {
      auto r = experiments::parallelogram_test(e, u);
      double c = r.report.value("center_offset"), m = r.report.value("midpoint_defect");
      int n = static_cast<int>(r.report.value("count"));
      o.require(n > 0 && c <= 1e-9 && m <= 1e-9);
      o.note("ellipse(%g,%g) u=(%g,%g): %d quads, center %.2g, midpoint %.2g", A, B, u.x(), u.y(), n, c, m);
    }
  }
  auto even = Oval::fourier_support(1.0, {{4, 0.03, 0.0}});
  for (Vec2 u : {Vec2(1, 0), Vec2(1, 1)}) {
    auto r = experiments::parallelogram_test(even, u);
    double c = r.report.value("center_offset");
    int n = static_cast<int>(r.report.value("count"));
    o.require(n > 0 && c <= 1e-9);
    o.note("fourier(4,0.03) u=(%g,%g): %d quads, center %.2g, midpoint %.2g (reported)", u.x(), u.y(), n, c,
           r.report.value("midpoint_defect"));
  }
  auto g = experiments::parallelogram_test(even, {1, 0.3});
  o.note("fourier(4,0.03) u=(1,0.3): %d non-degenerate quads (reported)", static_cast<int>(g.report.value("count")));
  return o;
}

// 9. affine curvature
Outcome affine_curvature() {
  Outcome o;
  for (auto [A, B] : std::vector<std::pair<double, double>>{{2, 1}, {1, 1}, {3, 0.5}}) {
    auto e = Oval::ellipse(A, B);
    const double want = std::pow(A * B, -2.0 / 3);
    double worst = 0;
    for (int i = 0; i < 64; ++i) {
      worst = std::max(worst, std::abs(geometry::affine_curvature(*e, geometry::kTwoPi * i / 64) / want - 1));
    }
    o.require(worst <= 1e-8);
    o.note("ellipse(%g,%g): max relative error %.3g over 64 samples (bound 1e-8)", A, B, worst);
  }
  for (const auto& k : std::vector<std::vector<double>>{{1.0, 1.0}, {1.0, -2.0, 0.5}, {-1.0, 0.3, 0.0, 1.0}}) {
    auto g = Oval::ode_germ(k, -0.5, 0.5);
    double worst = 0;
    for (int i = 0; i < 64; ++i) {
      double t = -0.5 + (i + 0.5) / 64;
      double want = 0, tp = 1;
      for (double c : k) want += c * tp, tp *= t;
      worst = std::max(worst, std::abs(geometry::affine_curvature(*g, t) - want));
    }
    o.require(worst <= 1e-8);
    o.note("ode_germ k with %zu coefficients: max |k - k(t)| %.3g over 64 samples (bound 1e-8)", k.size(), worst);
  }
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "symbolic reproduction (exact)", 30, symbolic_reproduction},
      {2, "residual certificate", 30, residual_certificate},
      {3, "conic incidence", 10, conic_incidence},
      {4, "symbolic-numeric bridge", 60, symbolic_numeric_bridge},
      {5, "circle-map closed forms", 30, circle_map_closed_forms},
      {6, "fixed points and reciprocity", 30, fixed_points_reciprocity},
      {7, "Moebius obstruction on ellipses", 60, mobius_obstruction},
      {8, "centrally symmetric machinery", 30, centrally_symmetric},
      {9, "affine curvature", 10, affine_curvature},
  };
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));

  bool all_pass = true;
  for (const auto& c : all) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note("exception: %s", e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.budget_s) {
      o.pass = false;
      o.note("over time budget of %.0f s", c.budget_s);
    }
    std::printf("criterion %d: %s  %s  (%.2f s)\n", c.id, o.pass ? "PASS" : "FAIL", c.name, secs);
    for (const auto& d : o.details) std::printf("    %s\n", d.c_str());
    std::fflush(stdout);
    all_pass = all_pass && o.pass;
  }
  return all_pass ? 0 : 1;
}
