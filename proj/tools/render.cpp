#include "render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

#include "conics/circle_dynamics.hpp"
#include "conics/errors.hpp"
#include "conics/experiments.hpp"

namespace conics::cli {

namespace {

using geometry::Vec3;

std::string num(double x) {
  if (std::abs(x) < 1e-13) x = 0.0;  // no "-0" or 1e-17 noise in the markup
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string pt(const PlanePoint& p) { return num(p.x()) + "," + num(p.y()); }

// Sign fixed so the first nonzero of (l1, l2) is positive.
std::string line_attr(const geometry::ProjLine& line) {
  Vec3 l = line.normalized().l;
  if (l.x() < -1e-12 || (std::abs(l.x()) <= 1e-12 && l.y() < 0)) l = -l;
  return num(l.x()) + " " + num(l.y()) + " " + num(l.z());
}

class Scene {
 public:
  explicit Scene(const OvalPtr& oval) : oval_(oval) {
    auto [lo, hi] = oval->domain();
    const int n = 256;
    for (int i = 0; i <= n; ++i) {
      double t = lo + (hi - lo) * i / n;
      if (oval->is_closed() && i == n) break;
      curve_.push_back(oval->point(t));
      include(curve_.back());
    }
  }

  void include(const PlanePoint& p) {
    xmin_ = std::min(xmin_, p.x());
    xmax_ = std::max(xmax_, p.x());
    ymin_ = std::min(ymin_, p.y());
    ymax_ = std::max(ymax_, p.y());
  }

  void segment(const PlanePoint& a, const PlanePoint& b, const std::string& cls) {
    include(a);
    include(b);
    body_ << "    <line class=\"" << cls << "\" x1=\"" << num(a.x()) << "\" y1=\"" << num(a.y()) << "\" x2=\""
          << num(b.x()) << "\" y2=\"" << num(b.y()) << "\"/>\n";
  }

  // Infinite line clipped to a window around the figure; the exact
  // coefficients go into data-line.
  void line(const geometry::ProjLine& l, const std::string& cls, double reach) {
    auto n = l.normalized();
    Vec2 normal(n.l.x(), n.l.y());
    PlanePoint foot = -n.l.z() * normal;
    Vec2 d(-normal.y(), normal.x());
    PlanePoint a = foot - reach * d, b = foot + reach * d;
    body_ << "    <line class=\"" << cls << "\" data-line=\"" << line_attr(l) << "\" x1=\"" << num(a.x())
          << "\" y1=\"" << num(a.y()) << "\" x2=\"" << num(b.x()) << "\" y2=\"" << num(b.y()) << "\"/>\n";
  }

  void polygon(const std::vector<PlanePoint>& ps, const std::string& cls) {
    body_ << "    <polygon class=\"" << cls << "\" points=\"";
    for (std::size_t i = 0; i < ps.size(); ++i) {
      include(ps[i]);
      body_ << (i ? " " : "") << pt(ps[i]);
    }
    body_ << "\"/>\n";
  }

  void marker(const PlanePoint& p, const std::string& cls, const std::string& label) {
    include(p);
    body_ << "    <circle class=\"" << cls << "\" cx=\"" << num(p.x()) << "\" cy=\"" << num(p.y())
          << "\" r=\"" << num(0.015 * extent()) << "\"";
    if (!label.empty()) body_ << " data-label=\"" << label << "\"";
    body_ << "/>\n";
  }

  double extent() const { return std::max({xmax_ - xmin_, ymax_ - ymin_, 1e-9}); }

  std::string finish(const std::string& scene) const {
    const double pad = 0.08 * extent();
    const double x0 = xmin_ - pad, x1 = xmax_ + pad, y0 = ymin_ - pad, y1 = ymax_ + pad;
    const double px = 600.0, s = px / std::max(x1 - x0, y1 - y0);
    const double w = (x1 - x0) * s, h = (y1 - y0) * s;
    const double stroke = 1.5 / s;
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w) << "\" height=\"" << num(h)
       << "\" viewBox=\"0 0 " << num(w) << " " << num(h) << "\" data-scene=\"" << scene << "\">\n";
    os << "  <style>line,polygon,path{fill:none;stroke-width:" << num(stroke)
       << "} .oval{stroke:#222} .tangent{stroke:#1f77b4} .chord-of-contact{stroke:#d62728}"
          " .diameter{stroke:#999;stroke-dasharray:"
       << num(4 * stroke) << "} .parallelogram{stroke:#2ca02c} .pencil-line{stroke:#9467bd}"
          " circle{fill:#000} circle.fixed-point{fill:#d62728}</style>\n";
    os << "  <g transform=\"translate(" << num(-x0 * s) << "," << num(y1 * s) << ") scale(" << num(s) << ","
       << num(-s) << ")\">\n";
    os << "    <path class=\"oval\" d=\"";
    for (std::size_t i = 0; i < curve_.size(); ++i) os << (i ? " L" : "M") << pt(curve_[i]);
    if (oval_->is_closed()) os << " Z";
    os << "\"/>\n";
    os << body_.str();
    os << "  </g>\n</svg>\n";
    return os.str();
  }

 private:
  OvalPtr oval_;
  std::vector<PlanePoint> curve_;
  std::ostringstream body_;
  double xmin_ = 1e300, xmax_ = -1e300, ymin_ = 1e300, ymax_ = -1e300;
};

}  // namespace

std::string render_duality(const OvalPtr& oval, const PlanePoint& A) {
  auto [t1, t2] = geometry::tangents_from_point(*oval, A);
  Scene sc(oval);
  PlanePoint p1 = oval->point(t1), p2 = oval->point(t2);
  sc.segment(A, p1, "tangent");
  sc.segment(A, p2, "tangent");
  sc.line(geometry::chord_of_contact(*oval, A), "chord-of-contact", 1.2 * sc.extent());
  sc.marker(A, "pole", "A");
  sc.marker(p1, "tangency", "");
  sc.marker(p2, "tangency", "");
  return sc.finish("duality");
}

std::string render_parallelogram(const OvalPtr& oval, const Vec2& u, int count) {
  if (count < 1) throw GeometryError("count must be positive");
  auto res = experiments::parallelogram_test(oval, u);
  if (static_cast<int>(res.quads.size()) < count) {
    throw GeometryError("only " + std::to_string(res.quads.size()) + " inscribed parallelograms found");
  }
  // The family is ordered by starting parameter; take evenly spaced members.
  auto quads = res.quads;
  std::sort(quads.begin(), quads.end(), [](const auto& x, const auto& y) { return x.params[0] < y.params[0]; });
  Scene sc(oval);
  const double reach = 1.2 * sc.extent();
  sc.line(geometry::line_through(PlanePoint::Zero(), res.u), "diameter", reach);
  sc.line(geometry::line_through(PlanePoint::Zero(), res.v), "diameter", reach);
  for (int i = 0; i < count; ++i) {
    const auto& q = quads[static_cast<std::size_t>(i) * quads.size() / count];
    sc.polygon({q.vertices.begin(), q.vertices.end()}, "parallelogram");
  }
  return sc.finish("parallelogram");
}

std::string render_fixed_points(const OvalPtr& oval, const PlanePoint& P, const PlanePoint& Q) {
  auto F = dynamics::compose(dynamics::involution_pencil(oval, P), dynamics::involution_pencil(oval, Q));
  auto fixed = dynamics::fixed_points(F);
  Scene sc(oval);
  sc.include(P);
  sc.include(Q);
  sc.line(geometry::line_join(P, Q), "pencil-line", 1.2 * sc.extent());
  sc.marker(P, "pole", "P");
  sc.marker(Q, "pole", "Q");
  for (std::size_t i = 0; i < fixed.size(); ++i) {
    sc.marker(oval->point(fixed[i]), "fixed-point", "t=" + num(fixed[i]));
  }
  return sc.finish("fixed-points");
}

}  // namespace conics::cli
