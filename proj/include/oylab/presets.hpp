#pragma once

// Built-in function families plus the resolution logic that turns a CLI
// string into a ScalarFunction1D. Preset spellings get exact closed-form
// derivatives and, where the reciprocal integral is classically known, a
// declared verdict with a tail bound; anything else falls through to the
// expression parser (no declaration attached).

#include <string>
#include <vector>

#include "oylab/scalar_function.hpp"

namespace oylab {

// Constant function c on [0, domain_max]; declared divergent reciprocal.
ScalarFunction1D make_constant(double c, double domain_max);

struct TablePoint {
  double t = 0.0;
  double value = 0.0;
};

// Piecewise-linear interpolant through strictly ascending knots. deriv is
// the cell slope, deriv2 is zero, interior knots are non-smooth points.
// The domain is [first t, last t]; the first t must be 0.
ScalarFunction1D make_table_function(const std::vector<TablePoint>& points, std::string label);

// Growth-function resolution: numeric literal -> constant, known preset
// spelling (whitespace-insensitive) -> exact closures with declared
// integral verdict, anything else -> parsed expression.
// Presets: 1+t, (1+t)^2, e^t, (1+t)*log(1+t)+1.
ScalarFunction1D resolve_scalar_spec(const std::string& text, double domain_max);

// Warping-function resolution: "t" and "sinh" are presets; anything else is
// parsed. (The third model warping is built by the manifold module since it
// depends on a growth function.)
ScalarFunction1D resolve_warping_spec(const std::string& text, double domain_max);

}  // namespace oylab
