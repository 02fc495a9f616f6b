#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "conics/circle_dynamics.hpp"
#include "conics/errors.hpp"
#include "conics/experiments.hpp"
#include "conics/io.hpp"
#include "conics/symbolic_verifier.hpp"
#include "render.hpp"

namespace conics::cli {

namespace {

using io::Json;
using geometry::OvalPtr;
using geometry::PlanePoint;
using geometry::Vec2;

// Solver or certification failure, as opposed to bad input.
struct InternalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

PlanePoint vec(const std::vector<double>& v) { return {v.at(0), v.at(1)}; }

Json point_json(const PlanePoint& p) { return Json::array({io::number(p.x()), io::number(p.y())}); }

Json numbers(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(io::number(x));
  return a;
}

// --format text flattens the top level into "key: value" lines.
void emit(std::ostream& out, const Json& j, const std::string& format) {
  if (format == "json") {
    out << io::dump(j) << "\n";
    return;
  }
  for (const auto& [k, v] : j.items()) {
    out << k << ": " << (v.is_string() ? v.get<std::string>() : io::dump(v, 0)) << "\n";
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path);
  f << text;
}

struct MapArgs {
  std::vector<double> dirs;
  std::vector<double> P, Q;
};

void add_map_options(CLI::App* sub, MapArgs& m) {
  auto* d = sub->add_option("--dirs", m.dirs, "angles of u and v (radians); F = f_u o f_v")->expected(2);
  auto* p = sub->add_option("--P", m.P, "pencil point P; F = f_P o f_Q")->expected(2);
  auto* q = sub->add_option("--Q", m.Q, "pencil point Q")->expected(2);
  d->excludes(p)->excludes(q);
  p->needs(q);
  q->needs(p);
}

dynamics::CircleMap build_map(const OvalPtr& oval, const MapArgs& m) {
  if (!m.dirs.empty()) {
    Vec2 u(std::cos(m.dirs[0]), std::sin(m.dirs[0])), v(std::cos(m.dirs[1]), std::sin(m.dirs[1]));
    return dynamics::compose(dynamics::involution_parallel(oval, u), dynamics::involution_parallel(oval, v));
  }
  if (!m.P.empty()) {
    return dynamics::compose(dynamics::involution_pencil(oval, vec(m.P)), dynamics::involution_pencil(oval, vec(m.Q)));
  }
  throw Error("give either --dirs or --P and --Q");
}

int verify_series(int k_sign, int order, const std::string& format, std::ostream& out) {
  symbolic::DualityExpansion ex;
  symbolic::ResidualCertificate cert;
  symbolic::InvolutionDefect defect;
  try {
    ex = symbolic::solve_duality_expansion(k_sign, order);
    cert = symbolic::certify_expansion(ex);
    defect = symbolic::involution_defect(ex);
  } catch (const Error& e) {
    throw InternalFailure(e.what());
  }
  const std::string report = symbolic::canonical_report(ex, defect);

  Json j;
  j["k_sign"] = k_sign;
  j["condition_order"] = order;
  Json terms = Json::object();
  for (std::size_t i = 0; i < ex.b.size(); ++i) terms["b" + std::to_string(i)] = ex.b[i].str();
  terms["ffa_eps3"] = defect.eps3_coefficient.str();
  j["terms"] = terms;
  Json zeros = Json::object();
  for (std::size_t i = 4; i < cert.zero.size(); ++i) zeros["eps" + std::to_string(i)] = static_cast<bool>(cert.zero[i]);
  j["certificate"] = {{"residual_zero", zeros}, {"free_of_truncated_jet", cert.free_of_truncated_jet},
                      {"all_zero", cert.all_zero()}};

  bool ok = cert.all_zero();
  std::vector<std::string> lines;
  if (order != symbolic::kConditionOrder) {
    j["golden"] = "none (certificate only)";
  } else if (k_sign == 1) {
    auto pub = symbolic::published_forms();
    Json cmp = Json::object();
    auto check = [&](const std::string& name, const algebra::ParamPoly& got, const algebra::ParamPoly& want) {
      std::string verdict = got == want ? "MATCH" : (got == -want ? "MISMATCH (negated)" : "MISMATCH");
      if (got != want) ok = false;
      cmp[name] = verdict;
      lines.push_back(name + ": " + verdict + "  expected " + want.str());
    };
    for (std::size_t i = 0; i < pub.b.size(); ++i) check("b" + std::to_string(i), ex.b.at(i), pub.b[i]);
    check("ffa_eps3", defect.eps3_coefficient, pub.defect);
    j["golden"] = cmp;
  } else {
    bool same = report == kGoldenKMinus1;
    if (!same) ok = false;
    j["golden"] = same ? "MATCH" : "MISMATCH";
    lines.push_back(std::string("golden: ") + (same ? "MATCH" : "MISMATCH"));
  }
  j["status"] = ok ? "ok" : "mismatch";

  if (format == "json") {
    out << io::dump(j) << "\n";
  } else {
    out << report;
    out << "certificate:";
    for (std::size_t i = 4; i < cert.zero.size(); ++i) out << " eps^" << i << "=" << (cert.zero[i] ? "0" : "NONZERO");
    out << (cert.free_of_truncated_jet ? " (free of truncated jet)" : " (depends on truncated jet)") << "\n";
    for (const auto& l : lines) out << l << "\n";
    if (order != symbolic::kConditionOrder) out << "golden: none (certificate only)\n";
  }
  return ok ? kOk : kInternalError;
}

}  // namespace

std::vector<std::string> merge_config(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw Error("--config needs a file");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (path.empty()) return rest;

  std::ifstream in(path);
  if (!in) throw Error("cannot open config " + path);
  Json cfg;
  try {
    cfg = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(std::string("malformed config: ") + e.what());
  }
  if (!cfg.is_object()) throw Error("config must be a JSON object");

  std::set<std::string> given;
  for (const auto& a : rest) {
    if (a.rfind("--", 0) == 0) given.insert(a.substr(0, a.find('=')));
  }
  if (cfg.contains("command")) {
    if (!cfg["command"].is_string()) throw Error("config \"command\" must be a string");
    const bool has_sub = !rest.empty() && rest.front().rfind("-", 0) != 0;
    if (!has_sub) rest.insert(rest.begin(), cfg["command"].get<std::string>());
  }
  for (const auto& [key, value] : cfg.items()) {
    if (key == "command") continue;
    std::string flag = "--" + key;
    for (auto& c : flag) c = c == '_' ? '-' : c;
    if (given.count(flag)) continue;  // flags win
    auto scalar = [](const Json& v) {
      if (v.is_string()) return v.get<std::string>();
      if (v.is_number_float()) return io::format_double(v.get<double>());
      return v.dump();
    };
    if (value.is_boolean()) {
      if (value.get<bool>()) rest.push_back(flag);
    } else if (value.is_array()) {
      rest.push_back(flag);
      for (const auto& v : value) rest.push_back(scalar(v));
    } else if (value.is_object()) {
      rest.push_back(flag);
      rest.push_back(value.dump());  // inline curve spec
    } else {
      rest.push_back(flag);
      rest.push_back(scalar(value));
    }
  }
  return rest;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"conics-lab: chord involutions, pencil circle maps and their diagnostics"};
  app.name("conics-lab");
  app.require_subcommand(1);
  std::function<int()> action;

  // verify-series
  int k_sign = 1, order = symbolic::kConditionOrder;
  std::string vs_format = "text";
  auto* vs = app.add_subcommand("verify-series", "exact expansion of the chord involution and its certificate");
  vs->add_option("--k-sign", k_sign, "sign of the affine curvature")->check(CLI::IsMember({1, -1}));
  vs->add_option("--order", order, "truncation order of the condition series")->check(CLI::Range(7, 10));
  vs->add_option("--format", vs_format)->check(CLI::IsMember({"text", "json"}));
  vs->callback([&] { action = [&] { return verify_series(k_sign, order, vs_format, out); }; });

  std::string curve, format = "json";
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--curve", curve, "curve spec: JSON file or inline JSON")->required();
    sub->add_option("--format", format)->check(CLI::IsMember({"json", "text"}));
  };

  // curvature
  std::vector<double> ts;
  int samples = 64;
  auto* cv = app.add_subcommand("curvature", "affine curvature along the curve");
  add_common(cv);
  cv->add_option("--t", ts, "parameters (default: uniform samples over the domain)");
  cv->add_option("--samples", samples)->check(CLI::PositiveNumber);
  cv->callback([&] {
    action = [&] {
      auto oval = io::load_curve_spec(curve);
      std::vector<double> params = ts;
      if (params.empty()) {
        auto [lo, hi] = oval->domain();
        for (int i = 0; i < samples; ++i) {
          params.push_back(oval->is_closed() ? lo + (hi - lo) * i / samples
                                             : lo + (hi - lo) * (i + 0.5) / samples);
        }
      }
      std::vector<double> ks;
      for (double t : params) ks.push_back(geometry::affine_curvature(*oval, t));
      Json j;
      j["curve"] = io::curve_spec_json(*oval);
      j["t"] = numbers(params);
      j["k"] = numbers(ks);
      j["k_min"] = io::number(*std::min_element(ks.begin(), ks.end()));
      j["k_max"] = io::number(*std::max_element(ks.begin(), ks.end()));
      emit(out, j, format);
      return kOk;
    };
  });

  // rotation-number
  MapArgs rn_map;
  double x0 = 0.0;
  long long iterations = 1000000, max_q = 1000;
  auto* rn = app.add_subcommand("rotation-number", "rotation number of an orientation-preserving pencil map");
  add_common(rn);
  add_map_options(rn, rn_map);
  rn->add_option("--x0", x0, "starting parameter");
  rn->add_option("--iterations", iterations)->check(CLI::PositiveNumber);
  rn->add_option("--max-denominator", max_q)->check(CLI::PositiveNumber);
  rn->callback([&] {
    action = [&] {
      auto oval = io::load_curve_spec(curve);
      auto F = build_map(oval, rn_map);
      auto est = dynamics::rotation_number(F, x0, iterations);
      Json conv = Json::array();
      for (const auto& c : dynamics::convergents(est.value, max_q)) conv.push_back({c.p, c.q});
      Json j;
      j["map"] = F.describe();
      j["rotation_number"] = io::number(est.value);
      j["error_bound"] = io::number(est.error_bound);
      j["iterations"] = est.iterations;
      j["convergents"] = conv;
      emit(out, j, format);
      return kOk;
    };
  });

  // fixed-points
  MapArgs fp_map;
  int fp_samples = 512;
  auto* fp = app.add_subcommand("fixed-points", "fixed points of a pencil map and their multipliers");
  add_common(fp);
  add_map_options(fp, fp_map);
  fp->add_option("--samples", fp_samples)->check(CLI::PositiveNumber);
  fp->callback([&] {
    action = [&] {
      auto oval = io::load_curve_spec(curve);
      auto F = build_map(oval, fp_map);
      auto fixed = dynamics::fixed_points(F, fp_samples);
      Json pts = Json::array();
      std::vector<double> ders;
      for (double t : fixed) {
        pts.push_back(point_json(oval->point(t)));
        ders.push_back(F.derivative(t));
      }
      Json j;
      j["map"] = F.describe();
      j["fixed_points"] = numbers(fixed);
      j["points"] = pts;
      j["derivatives"] = numbers(ders);
      emit(out, j, format);
      return kOk;
    };
  });

  // mobius
  MapArgs mb_map;
  dynamics::ObstructionOptions obs;
  auto* mb = app.add_subcommand("mobius", "multiplier reciprocity and the linearization obstruction");
  add_common(mb);
  add_map_options(mb, mb_map);
  mb->add_option("--overlap-samples", obs.overlap_samples)->check(CLI::PositiveNumber);
  mb->add_option("--max-iterations", obs.max_iterations)->check(CLI::PositiveNumber);
  mb->add_option("--koenigs-radius", obs.koenigs_radius)->check(CLI::PositiveNumber);
  mb->add_option("--refuse-band", obs.refuse_band)->check(CLI::PositiveNumber);
  mb->callback([&] {
    action = [&] {
      auto oval = io::load_curve_spec(curve);
      auto F = build_map(oval, mb_map);
      auto d = dynamics::mobius_reciprocity(F);
      Json j;
      j["map"] = F.describe();
      j["fixed_points"] = numbers(d.fixed_points);
      j["derivatives"] = numbers(d.derivatives);
      j["reciprocity_defect"] = io::number(d.reciprocity_defect);
      try {
        auto lin = dynamics::linearization_obstruction(F, obs);
        j["linearization_obstruction"] = io::number(lin.obstruction);
        j["lambda"] = io::number(lin.lambda);
        j["samples"] = lin.samples;
        j["max_iterations_used"] = lin.max_iterations_used;
      } catch (const DynamicsError& e) {
        j["linearization_obstruction"] = nullptr;
        j["obstruction_status"] = e.what();
      }
      emit(out, j, format);
      return kOk;
    };
  });

  // incidence
  std::vector<double> A;
  double selector = 0.5;
  auto* inc = app.add_subcommand("incidence", "pole-polar incidence defect for a point A and a point B on its polar");
  add_common(inc);
  inc->add_option("--A", A, "exterior point")->expected(2)->required();
  inc->add_option("--selector", selector, "position of B along the visible arc, in (-1, 1), nonzero");
  inc->callback([&] {
    action = [&] {
      auto oval = io::load_curve_spec(curve);
      auto r = experiments::incidence_defect(*oval, vec(A), selector);
      Json j;
      j["curve"] = r.curve;
      j["A"] = point_json(r.A);
      j["B"] = point_json(r.B);
      j["selector"] = io::number(r.selector);
      j["tangency_A"] = numbers({r.tangency_A.first, r.tangency_A.second});
      j["tangency_B"] = numbers({r.tangency_B.first, r.tangency_B.second});
      j["chord_length"] = io::number(r.chord_length);
      j["defect"] = io::number(r.defect);
      emit(out, j, format);
      return kOk;
    };
  });

  // scaling-fit
  double a_param = 0.0;
  std::vector<double> eps{0.1, 0.05, 0.025};
  auto* sf = app.add_subcommand("scaling-fit", "eps^3 law of f(f(a)) - a on a curvature germ");
  add_common(sf);
  sf->add_option("--a", a_param, "chord parameter");
  sf->add_option("--eps", eps, "decreasing scales (at least three)");
  sf->callback([&] {
    action = [&] {
      auto oval = io::load_curve_spec(curve);
      auto fit = experiments::epsilon_scaling_fit(*oval, a_param, eps);
      Json j;
      j["a"] = io::number(fit.a);
      j["k0"] = io::number(fit.k0);
      j["p"] = io::number(fit.p);
      j["q"] = io::number(fit.q);
      j["epsilons"] = numbers(fit.epsilons);
      j["measured"] = numbers(fit.measured);
      j["extrapolated"] = io::number(fit.extrapolated);
      j["predicted"] = io::number(fit.predicted);
      j["relative_error"] = io::number(fit.relative_error);
      emit(out, j, format);
      return kOk;
    };
  });

  // parallelogram
  std::vector<double> u_dir{1.0, 0.0};
  int pg_samples = 64;
  bool with_quads = false;
  auto* pg = app.add_subcommand("parallelogram", "inscribed parallelograms of a centrally symmetric oval");
  add_common(pg);
  pg->add_option("--u", u_dir, "direction")->expected(2);
  pg->add_option("--samples", pg_samples)->check(CLI::PositiveNumber);
  pg->add_flag("--quads", with_quads, "list every quadrilateral");
  pg->callback([&] {
    action = [&] {
      auto oval = io::load_curve_spec(curve);
      auto res = experiments::parallelogram_test(oval, vec(u_dir), pg_samples);
      Json j;
      j["u"] = point_json(res.u);
      j["v"] = point_json(res.v);
      for (const auto& [k, v] : res.report.values) j[k] = io::number(v);
      if (with_quads) {
        Json qs = Json::array();
        for (const auto& q : res.quads) {
          Json vs = Json::array();
          for (const auto& p : q.vertices) vs.push_back(point_json(p));
          qs.push_back({{"params", numbers({q.params.begin(), q.params.end()})}, {"vertices", vs}});
        }
        j["quads"] = qs;
      }
      emit(out, j, format);
      return kOk;
    };
  });

  // scan
  experiments::ScanSpec spec;
  std::string mode = "direction-pairs", output, manifest;
  std::vector<double> base{0.0, 0.0}, line_dir{1.0, 0.0}, s_range{1.5, 4.0};
  auto* sc = app.add_subcommand("scan", "sweep of pencil-pair circle maps, CSV");
  sc->add_option("--curve", curve, "curve spec: JSON file or inline JSON")->required();
  sc->add_option("--mode", mode)->check(CLI::IsMember({"direction-pairs", "point-pairs"}));
  sc->add_option("--n", spec.n)->check(CLI::Range(1, 4096));
  sc->add_option("--iterations", spec.iterations)->check(CLI::PositiveNumber);
  sc->add_option("--max-denominator", spec.max_denominator)->check(CLI::PositiveNumber);
  sc->add_option("--grid", spec.grid)->check(CLI::PositiveNumber);
  sc->add_option("--base", base, "point-pairs: base point of the line")->expected(2);
  sc->add_option("--line-direction", line_dir, "point-pairs: direction of the line")->expected(2);
  sc->add_option("--s-range", s_range, "point-pairs: range of the line parameter")->expected(2);
  sc->add_option("--output", output, "CSV path (default stdout)");
  sc->add_option("--manifest", manifest, "JSON manifest path");
  sc->callback([&] {
    action = [&] {
      auto oval = io::load_curve_spec(curve);
      spec.mode = mode == "point-pairs" ? experiments::ScanMode::point_pairs : experiments::ScanMode::direction_pairs;
      spec.base = vec(base);
      spec.direction = vec(line_dir);
      spec.s_min = s_range[0];
      spec.s_max = s_range[1];
      auto rows = experiments::conjugacy_scan(oval, spec);
      std::ostringstream csv;
      experiments::write_scan_csv(csv, rows);
      if (output.empty()) {
        out << csv.str();
      } else {
        write_file(output, csv.str());
      }
      if (!manifest.empty()) {
        int failed = 0;
        for (const auto& r : rows) failed += r.status != "ok";
        Json m;
        m["command"] = "scan";
        m["curve"] = io::curve_spec_json(*oval);
        m["mode"] = mode;
        m["n"] = spec.n;
        m["iterations"] = spec.iterations;
        m["max_denominator"] = spec.max_denominator;
        m["grid"] = spec.grid;
        if (spec.mode == experiments::ScanMode::point_pairs) {
          m["base"] = point_json(spec.base);
          m["line_direction"] = point_json(spec.direction);
          m["s_range"] = numbers(s_range);
        }
        m["rows"] = rows.size();
        m["rows_with_errors"] = failed;
        m["columns"] = experiments::kScanCsvHeader;
        m["output"] = output.empty() ? "stdout" : output;
        write_file(manifest, io::dump(m) + "\n");
      }
      return kOk;
    };
  });

  // render
  std::string scene = "duality", svg_out;
  std::vector<double> rA{2.0, 0.0}, rP, rQ, ru{1.0, 0.0};
  int count = 5;
  auto* rd = app.add_subcommand("render", "SVG of a construction");
  rd->add_option("--curve", curve, "curve spec: JSON file or inline JSON")->required();
  rd->add_option("--scene", scene)->check(CLI::IsMember({"duality", "parallelogram", "fixed-points"}));
  rd->add_option("--A", rA, "duality: pole")->expected(2);
  rd->add_option("--u", ru, "parallelogram: direction")->expected(2);
  rd->add_option("--count", count, "parallelogram: number drawn")->check(CLI::PositiveNumber);
  rd->add_option("--P", rP, "fixed-points: pencil point P")->expected(2);
  rd->add_option("--Q", rQ, "fixed-points: pencil point Q")->expected(2);
  rd->add_option("--output", svg_out, "SVG path (default stdout)");
  rd->callback([&] {
    action = [&] {
      auto oval = io::load_curve_spec(curve);
      std::string svg;
      if (scene == "duality") {
        svg = render_duality(oval, vec(rA));
      } else if (scene == "parallelogram") {
        svg = render_parallelogram(oval, vec(ru), count);
      } else {
        if (rP.empty() || rQ.empty()) throw Error("fixed-points scene needs --P and --Q");
        svg = render_fixed_points(oval, vec(rP), vec(rQ));
      }
      if (svg_out.empty()) {
        out << svg;
      } else {
        write_file(svg_out, svg);
      }
      return kOk;
    };
  });

  std::vector<std::string> args;
  try {
    args = merge_config(raw_args);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUserError;
  }
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());  // CLI11 consumes from the back
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUserError;
  }

  try {
    return action();
  } catch (const InternalFailure& e) {
    err << "internal failure: " << e.what() << "\n";
    return kInternalError;
  } catch (const DerivationError& e) {
    err << "internal failure: " << e.what() << "\n";
    return kInternalError;
  } catch (const AlgebraError& e) {
    err << "internal failure: " << e.what() << "\n";
    return kInternalError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUserError;
  } catch (const std::exception& e) {
    err << "internal failure: " << e.what() << "\n";
    return kInternalError;
  }
}

}  // namespace conics::cli
