#pragma once

// Rotationally symmetric model manifolds: a warping profile f on [0, T] with
// f(0) = 0, f'(0) = 1, f > 0 beyond the pole, and dimension n >= 2. All
// radial geometry reduces to logarithmic derivatives of f:
//     distance Laplacian   delta_r = (n-1) f'/f
//     radial Ricci         ricci   = -(n-1) f''/f = -(n-1)((f'/f)' + (f'/f)^2)
//     radial Laplacian     (Laplacian u)(t) = u''(t) + delta_r(t) u'(t)
// The manifold stores f'/f, (f'/f)', and ln f as closures of their own
// rather than deriving them from pointwise f: the counterexample warping
// t * exp(integral of G) overflows double far inside the horizon for fast G,
// while its log-derivative 1/t + G stays perfectly tame.

#include <functional>
#include <optional>
#include <vector>

#include "oylab/growth.hpp"
#include "oylab/ode.hpp"
#include "oylab/quadrature.hpp"
#include "oylab/scalar_function.hpp"

namespace oylab {

struct ModelManifold {
  int dim = 2;
  // Pointwise warping profile. For the counterexample profile this overflows
  // at large t; use the log-derivative closures for geometry.
  ScalarFunction1D warping;
  std::function<double(double)> radial_log_deriv;        // f'/f, for t > 0
  std::function<double(double)> radial_log_deriv_prime;  // (f'/f)'
  std::function<double(double)> log_warping;             // ln f
};

// Generic model from an explicit warping profile; checks the pole conditions
// f(0) = 0, f'(0) = 1 and positivity on a sample grid.
ModelManifold make_model_manifold(int n, const ScalarFunction1D& f);

// The warped profile f(t) = t * exp(integral of G over [0, t]), which turns
// the growth function into geometry: delta_r = (n-1)(1/t + G) > G, so the
// distance Laplacian genuinely exceeds the nominal growth bound everywhere.
// That margin is re-checked on a grid as a postcondition.
ModelManifold build_counterexample_manifold(const GrowthFunction& g, int n,
                                            const QuadratureOptions& opt = {});

// Radial geometry; t must be strictly positive (the pole is singular).
double delta_r(const ModelManifold& m, double t);
double ricci_radial(const ModelManifold& m, double t);
double radial_laplacian(const ModelManifold& m, const ScalarFunction1D& u, double t);

// R(t) = -G(t)^2: the radial curvature floor matching growth bound G.
ScalarFunction1D neg_growth_squared(const GrowthFunction& g);

// Radial Ricci of a model as a function object (derivatives by central
// difference; only eval feeds the comparison integrator).
ScalarFunction1D ricci_function(const ModelManifold& m, double t_min = 1e-6);

struct RiccatiTrace {
  std::vector<double> t;
  std::vector<double> m;
  std::vector<double> R;  // curvature lower bound sampled along the trace
  bool blow_up = false;
  std::optional<double> blow_up_t;
};

// Integrates the comparison equation m' = -R(t) - m^2/(n-1) with equality
// from m(t0) = m0. With R = -G^2 this is the worst-case curvature model
// (equilibrium at sqrt(n-1) * G); with R = ricci_radial of a model manifold
// it reproduces delta_r exactly. Finite-time blow-up is flagged, not thrown.
RiccatiTrace riccati_integrate(const ScalarFunction1D& R_lower, int n, double t0, double m0,
                               double T, const OdeOptions& opt = {});

struct ComparisonBoundReport {
  double factor = 0.0;  // sqrt(n-1) + 1
  // Earliest sampled t after which m < factor * G at every later sample.
  std::optional<double> holds_from;
  bool holds_everywhere = false;
  // When the bound never takes hold: the latest violating sample.
  std::optional<double> witness_t;
  std::optional<double> witness_m;
  std::optional<double> witness_bound;
};

ComparisonBoundReport check_comparison_bound(const RiccatiTrace& trace, const GrowthFunction& g,
                                             int n);

}  // namespace oylab
