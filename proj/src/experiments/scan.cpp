#include <cmath>
#include <cstdio>
#include <limits>

#include "conics/errors.hpp"
#include "conics/experiments.hpp"

namespace conics::experiments {

namespace {

std::string num(double x) {
  if (std::isnan(x)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string clean(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '"') c = ';';
  }
  return s;
}

void fill_dynamics(ScanRow& row, const dynamics::CircleMap& F, const ScanSpec& spec) {
  row.orientation_preserving = F.preserves_orientation();
  if (F.preserves_orientation()) {
    const auto rot = dynamics::rotation_number(F, 0.0, spec.iterations);
    row.rotation_number = rot.value;
    row.error_bound = rot.error_bound;
    const auto conv = dynamics::convergents(rot.value, spec.max_denominator, rot.error_bound);
    row.convergent_p = conv.back().p;
    row.convergent_q = conv.back().q;
    if (row.convergent_p == row.convergent_q) {
      row.convergent_p = 0;
      row.convergent_q = 1;
    }
    row.periodicity_defect = dynamics::periodicity_defect(F, static_cast<int>(row.convergent_q), spec.grid);
  }
  if (F.is_identity()) return;
  const auto fps = dynamics::fixed_points(F);
  row.fixed_point_count = static_cast<int>(fps.size());
  if (fps.size() != 2) return;
  row.reciprocity_defect = dynamics::mobius_reciprocity(F).reciprocity_defect;
  if (F.preserves_orientation()) row.obstruction = dynamics::linearization_obstruction(F).obstruction;
}

}  // namespace

const char* const kScanCsvHeader =
    "mode,i,j,param_i,param_j,orientation,rotation_number,error_bound,convergent_p,convergent_q,"
    "periodicity_defect,fixed_point_count,reciprocity_defect,linearization_obstruction,status";

std::vector<ScanRow> conjugacy_scan(const OvalPtr& oval, const ScanSpec& spec) {
  if (spec.n < 1) throw GeometryError("scan needs n >= 1");
  std::vector<ScanRow> rows;
  if (spec.mode == ScanMode::direction_pairs) {
    for (int i = 0; i < spec.n; ++i) {
      for (int j = 0; j < spec.n; ++j) {
        ScanRow row;
        row.mode = "direction-pairs";
        row.i = i;
        row.j = j;
        row.param_i = M_PI * i / spec.n;
        row.param_j = M_PI * j / spec.n;
        try {
          const auto fu = dynamics::involution_parallel(oval, {std::cos(row.param_i), std::sin(row.param_i)});
          const auto fv = dynamics::involution_parallel(oval, {std::cos(row.param_j), std::sin(row.param_j)});
          fill_dynamics(row, i == j ? dynamics::CircleMap() : dynamics::compose(fu, fv), spec);
        } catch (const Error& e) {
          row.status = clean(e.what());
        }
        rows.push_back(row);
      }
    }
    return rows;
  }
  const Vec2 d = spec.direction.normalized();
  std::vector<double> s(static_cast<std::size_t>(spec.n));
  for (int i = 0; i < spec.n; ++i) {
    s[static_cast<std::size_t>(i)] = spec.n == 1 ? spec.s_min : spec.s_min + (spec.s_max - spec.s_min) * i / (spec.n - 1);
  }
  for (int i = 0; i < spec.n; ++i) {
    for (int j = i + 1; j < spec.n; ++j) {
      ScanRow row;
      row.mode = "point-pairs";
      row.i = i;
      row.j = j;
      row.param_i = s[static_cast<std::size_t>(i)];
      row.param_j = s[static_cast<std::size_t>(j)];
      try {
        const auto fp = dynamics::involution_pencil(oval, spec.base + row.param_i * d);
        const auto fq = dynamics::involution_pencil(oval, spec.base + row.param_j * d);
        fill_dynamics(row, dynamics::compose(fp, fq), spec);
      } catch (const Error& e) {
        row.status = clean(e.what());
      }
      rows.push_back(row);
    }
  }
  return rows;
}

void write_scan_csv(std::ostream& os, const std::vector<ScanRow>& rows) {
  os << kScanCsvHeader << "\n";
  for (const auto& r : rows) {
    os << r.mode << "," << r.i << "," << r.j << "," << num(r.param_i) << "," << num(r.param_j) << ","
       << (r.orientation_preserving ? "preserving" : "reversing") << "," << num(r.rotation_number) << ","
       << num(r.error_bound) << ",";
    if (std::isnan(r.rotation_number)) {
      os << ",,";
    } else {
      os << r.convergent_p << "," << r.convergent_q << ",";
    }
    os << num(r.periodicity_defect) << ",";
    if (r.fixed_point_count >= 0) os << r.fixed_point_count;
    os << "," << num(r.reciprocity_defect) << "," << num(r.obstruction) << "," << r.status << "\n";
  }
}

}  // namespace conics::experiments
