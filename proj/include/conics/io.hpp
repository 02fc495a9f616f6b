#pragma once

// Curve-spec JSON and fixed-format number output.

#include <string>

#include "json.hpp"

#include "conics/oval_geometry.hpp"

namespace conics::io {

using Json = nlohmann::ordered_json;

/// {"variant": "ellipse", "A": 2, "B": 1}
/// {"variant": "fourier_support", "h0": 1, "harmonics": [[3, 0.05, 0]]}
/// {"variant": "ode_germ", "k_poly": [1, 1], "t_range": [-0.5, 0.5]}
/// Unknown or missing fields throw conics::Error; invalid curves throw GeometryError.
geometry::OvalPtr parse_curve_spec(const Json& spec);
/// Inline JSON text when it starts with '{', otherwise a file path.
geometry::OvalPtr load_curve_spec(const std::string& path_or_json);
Json curve_spec_json(const geometry::Oval& oval);

/// 17 significant digits; "nan" / "inf" / "-inf" for non-finite values.
std::string format_double(double x);
/// JSON number; non-finite values become null.
Json number(double x);
/// Serializes with every float at 17 significant digits.
std::string dump(const Json& j, int indent = 2);

}  // namespace conics::io
