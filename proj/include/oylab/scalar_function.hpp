#pragma once

// The common currency of the library: a scalar function of one variable on
// [0, domain_max] bundled with closed-form first and second derivatives.
// Everything downstream (growth validation, splicing, sweeps) consumes this
// type, so presets, parsed expressions, and piecewise assemblies all meet
// the same contract: eval/deriv/deriv2 finite on the domain, derivatives
// trusted only away from the listed non-smooth points.

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "oylab/rng.hpp"

namespace oylab {

enum class FunctionKind { preset, parsed_expression, piecewise };

enum class IntegralVerdict {
  diverges_declared,    // analytically known: the reciprocal integral diverges
  converges_declared,   // analytically known to converge, with a tail bound
  inconclusive_numeric  // nothing declared; only horizon values available
};

// Analytic knowledge attached to a preset about integral of 1/f over [0, inf).
struct DeclaredIntegral {
  IntegralVerdict verdict = IntegralVerdict::inconclusive_numeric;
  // For convergent declarations: upper bound on integral of 1/f over [T, inf).
  std::function<double(double)> tail_bound;
};

struct ScalarFunction1D {
  std::function<double(double)> eval;
  std::function<double(double)> deriv;
  std::function<double(double)> deriv2;
  double domain_max = 0.0;
  FunctionKind kind = FunctionKind::preset;
  std::string label;
  std::shared_ptr<const DeclaredIntegral> declared;  // null when nothing is known
  std::vector<double> nonsmooth_points;              // joints of piecewise assemblies
};

struct ConsistencyReport {
  bool ok = true;
  double worst_t = 0.0;
  double worst_rel_error = 0.0;       // for deriv vs central difference of eval
  double worst2_t = 0.0;
  double worst2_rel_error = 0.0;      // for deriv2 vs central difference of deriv
};

// Spot-checks deriv against a central difference of eval, and deriv2 against
// a central difference of deriv, at seeded random interior points. Points
// within `h` of a non-smooth joint are skipped. The error measure is
// |fd - d| / max(1, |d|), so it is absolute near zero and relative at scale.
ConsistencyReport check_derivative_consistency(const ScalarFunction1D& fn, int samples = 100,
                                               double rel_tol = 1e-5,
                                               std::uint64_t seed = kDefaultSeed);

// Central difference helper shared by the consistency check and tests.
double central_difference(const std::function<double(double)>& f, double t, double h);

}  // namespace oylab
