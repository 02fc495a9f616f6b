#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "conics/errors.hpp"
#include "conics/io.hpp"

namespace conics::io {

namespace {

void check_fields(const Json& spec, const std::set<std::string>& allowed) {
  for (const auto& [key, _] : spec.items()) {
    if (!allowed.count(key)) throw Error("unknown curve-spec field: " + key);
  }
  for (const auto& key : allowed) {
    if (!spec.contains(key)) throw Error("missing curve-spec field: " + key);
  }
}

double real(const Json& v, const std::string& what) {
  if (!v.is_number()) throw Error(what + " must be a number");
  return v.get<double>();
}

}  // namespace

geometry::OvalPtr parse_curve_spec(const Json& spec) {
  if (!spec.is_object() || !spec.contains("variant") || !spec["variant"].is_string()) {
    throw Error("curve spec must be an object with a string \"variant\"");
  }
  const std::string variant = spec["variant"].get<std::string>();
  if (variant == "ellipse") {
    check_fields(spec, {"variant", "A", "B"});
    return geometry::Oval::ellipse(real(spec["A"], "A"), real(spec["B"], "B"));
  }
  if (variant == "fourier_support") {
    check_fields(spec, {"variant", "h0", "harmonics"});
    if (!spec["harmonics"].is_array()) throw Error("harmonics must be a list");
    std::vector<geometry::Harmonic> hs;
    for (const auto& h : spec["harmonics"]) {
      if (!h.is_array() || h.size() != 3) throw Error("each harmonic is [k, cos, sin]");
      if (!h[0].is_number_integer()) throw Error("harmonic index must be an integer");
      hs.push_back({h[0].get<int>(), real(h[1], "cos coefficient"), real(h[2], "sin coefficient")});
    }
    return geometry::Oval::fourier_support(real(spec["h0"], "h0"), std::move(hs));
  }
  if (variant == "ode_germ") {
    check_fields(spec, {"variant", "k_poly", "t_range"});
    if (!spec["k_poly"].is_array()) throw Error("k_poly must be a list");
    std::vector<double> k;
    for (const auto& c : spec["k_poly"]) k.push_back(real(c, "k_poly entry"));
    const auto& r = spec["t_range"];
    if (!r.is_array() || r.size() != 2) throw Error("t_range must be [t_min, t_max]");
    return geometry::Oval::ode_germ(std::move(k), real(r[0], "t_min"), real(r[1], "t_max"));
  }
  throw Error("unknown curve variant: " + variant);
}

geometry::OvalPtr load_curve_spec(const std::string& path_or_json) {
  const auto first = path_or_json.find_first_not_of(" \t\n");
  Json j;
  try {
    if (first != std::string::npos && path_or_json[first] == '{') {
      j = Json::parse(path_or_json);
    } else {
      std::ifstream in(path_or_json);
      if (!in) throw Error("cannot open curve spec: " + path_or_json);
      j = Json::parse(in);
    }
  } catch (const Json::parse_error& e) {
    throw Error(std::string("malformed curve spec: ") + e.what());
  }
  return parse_curve_spec(j);
}

Json curve_spec_json(const geometry::Oval& oval) {
  Json j;
  j["variant"] = oval.kind();
  if (const auto* e = std::get_if<geometry::Ellipse>(&oval.variant())) {
    j["A"] = number(e->A);
    j["B"] = number(e->B);
  } else if (const auto* f = std::get_if<geometry::FourierSupport>(&oval.variant())) {
    j["h0"] = number(f->h0);
    j["harmonics"] = Json::array();
    for (const auto& h : f->harmonics) j["harmonics"].push_back({h.k, number(h.cos_coeff), number(h.sin_coeff)});
  } else {
    const auto& g = std::get<geometry::OdeGerm>(oval.variant());
    j["k_poly"] = Json::array();
    for (double c : g.k_poly) j["k_poly"].push_back(number(c));
    j["t_range"] = {number(g.t_min), number(g.t_max)};
  }
  return j;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

namespace {

void dump_into(std::string& out, const Json& j, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  const char* nl = indent > 0 ? "\n" : "";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{";
      out += nl;
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) {
          out += ",";
          out += nl;
        }
        first = false;
        out += pad + Json(k).dump() + (indent > 0 ? ": " : ":");
        dump_into(out, v, indent, depth + 1);
      }
      out += nl + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& v : j) flat = flat && !v.is_structured();
      out += "[";
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += flat ? ", " : ",";
        first = false;
        if (!flat) out += nl + pad;
        dump_into(out, v, indent, depth + 1);
      }
      if (!flat) out += nl + close_pad;
      out += "]";
      return;
    }
    case Json::value_t::number_float:
      out += std::isfinite(j.get<double>()) ? format_double(j.get<double>()) : "null";
      return;
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump(const Json& j, int indent) {
  std::string out;
  dump_into(out, j, indent, 0);
  return out;
}

}  // namespace conics::io
