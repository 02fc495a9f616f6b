#pragma once

#include <cmath>
#include <tuple>
#include <utility>
#include <vector>

namespace conics::geometry {

namespace detail {

template <typename F>
double bisect(F& f, double lo, double hi, double flo, double width) {
  for (int it = 0; it < 200 && hi - lo > width; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace detail

/// Root in [lo, hi] of a function whose value and derivative come from one
/// call fdf(x) -> {f, f'}, given f(lo), f(hi) of opposite sign (or zero).
/// Newton steps are kept inside the shrinking bracket; bisection otherwise.
template <typename FDF>
double solve_bracketed_fdf(FDF&& fdf, double lo, double hi, double width = 1e-14) {
  const double flo = fdf(lo).first;
  const double fhi = fdf(hi).first;
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0)) return std::abs(flo) < std::abs(fhi) ? lo : hi;
  if (flo > 0.0) std::swap(lo, hi);  // f(lo) < 0 < f(hi); lo may exceed hi
  double x = 0.5 * (lo + hi);
  double dx_old = std::abs(hi - lo);
  double dx = dx_old;
  auto [fx, dfx] = fdf(x);
  for (int it = 0; it < 100; ++it) {
    const bool newton_out = ((x - hi) * dfx - fx) * ((x - lo) * dfx - fx) > 0.0;
    if (newton_out || std::abs(2.0 * fx) > std::abs(dx_old * dfx)) {
      dx_old = dx;
      dx = 0.5 * (hi - lo);
      x = lo + dx;
    } else {
      dx_old = dx;
      dx = fx / dfx;
      x -= dx;
    }
    if (std::abs(dx) < width * 0.5) return x;
    std::tie(fx, dfx) = fdf(x);
    if (fx == 0.0) return x;
    if (fx < 0.0) {
      lo = x;
    } else {
      hi = x;
    }
    if (std::abs(hi - lo) < width) break;
  }
  return x;
}

template <typename F, typename DF>
double solve_bracketed(F&& f, DF&& df, double lo, double hi, double width = 1e-14) {
  return solve_bracketed_fdf([&](double x) { return std::pair<double, double>(f(x), df(x)); }, lo, hi, width);
}

template <typename F, typename DF>
std::vector<double> find_roots(F&& f, DF&& df, double lo, double hi, int samples, bool wrap, double width) {
  std::vector<double> roots;
  const double h = (hi - lo) / samples;
  const int n = wrap ? samples : samples + 1;
  std::vector<double> xs(static_cast<std::size_t>(n));
  std::vector<double> fs(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    xs[static_cast<std::size_t>(i)] = (i == samples) ? hi : lo + i * h;
    fs[static_cast<std::size_t>(i)] = f(xs[static_cast<std::size_t>(i)]);
  }
  for (int i = 0; i < samples; ++i) {
    const std::size_t a = static_cast<std::size_t>(i);
    const std::size_t b = static_cast<std::size_t>((i + 1) % n);
    const double x0 = xs[a];
    const double x1 = wrap && i + 1 == samples ? hi : xs[b];
    const double f0 = fs[a];
    const double f1 = fs[b];
    if (f0 == 0.0) {
      roots.push_back(x0);
      continue;
    }
    if ((f0 < 0.0) == (f1 < 0.0) || f1 == 0.0) continue;
    double r = detail::bisect(f, x0, x1, f0, width);
    const double d = df(r);
    if (d != 0.0 && std::isfinite(d)) {
      const double step = f(r) / d;
      if (std::abs(step) < x1 - x0 && r - step >= x0 && r - step <= x1 &&
          std::abs(f(r - step)) <= std::abs(f(r))) {
        r -= step;
      }
    }
    roots.push_back(r);
  }
  if (!wrap && fs.back() == 0.0) roots.push_back(hi);
  return roots;
}

}  // namespace conics::geometry
