#pragma once

// Admissible growth functions and the comparison-weight F built from them.
// A growth function G is admissible when G >= 1 and G' >= 0 on the domain;
// every downstream construction assumes this, so the validated wrapper type
// is the only way into the rest of the library.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "oylab/quadrature.hpp"
#include "oylab/rng.hpp"
#include "oylab/scalar_function.hpp"

namespace oylab {

struct AdmissibilityViolation {
  enum class Condition { below_floor, negative_slope };
  Condition condition = Condition::below_floor;
  double t = 0.0;
  double value = 0.0;  // G(t) or G'(t), whichever broke the condition
};

struct GrowthFunction {
  ScalarFunction1D fn;
  bool verified = false;
  std::optional<AdmissibilityViolation> violation;
};

// Scans G >= 1 and G' >= 0 on a uniform grid of `samples` points plus the
// same number of seeded random points; the first violating point (grid
// phase first) is recorded. A tiny negative slack (1e-12) absorbs roundoff.
GrowthFunction validate_growth(const ScalarFunction1D& fn, int samples = 1000,
                               std::uint64_t seed = kDefaultSeed);

// Integral of 1/G over [0, T]. Requires a verified growth function.
double integrate_reciprocal(const GrowthFunction& g, double T,
                            const QuadratureOptions& opt = {});

struct IntegralClassification {
  IntegralVerdict verdict = IntegralVerdict::inconclusive_numeric;
  // (T, integral of 1/G over [0, T]) for each requested horizon, ascending.
  std::vector<std::pair<double, double>> horizon_values;
  // Declared bound on the mass beyond the largest horizon, when convergent.
  std::optional<double> tail_estimate;

  double value_on_horizon() const { return horizon_values.back().second; }
};

IntegralClassification classify_integral(const GrowthFunction& g, std::vector<double> horizons,
                                         const QuadratureOptions& opt = {});

// F(t) = exp(integral of 1/G over [0, t]): the subsolution profile used by
// the sweep. F(0) = 1, F' = F/G, F'' = F'/G - F G'/G^2, all wired as
// closures over one shared prefix-integral cache.
ScalarFunction1D build_F(const GrowthFunction& g, const QuadratureOptions& opt = {});

}  // namespace oylab
