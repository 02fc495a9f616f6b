#pragma once

// Static SVG scenes. Output depends only on the inputs.

#include <string>

#include "conics/oval_geometry.hpp"

namespace conics::cli {

using geometry::Oval;
using geometry::OvalPtr;
using geometry::PlanePoint;
using geometry::Vec2;

/// Oval, the two tangents from A and its chord of contact.
std::string render_duality(const OvalPtr& oval, const PlanePoint& A);

/// Oval, the diameters along u and its conjugate, and `count` inscribed
/// parallelograms spread over the family. Throws GeometryError when the
/// family has fewer than `count` members.
std::string render_parallelogram(const OvalPtr& oval, const Vec2& u, int count);

/// Oval, the line PQ and the fixed points of f_P o f_Q.
std::string render_fixed_points(const OvalPtr& oval, const PlanePoint& P, const PlanePoint& Q);

}  // namespace conics::cli
