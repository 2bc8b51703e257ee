#pragma once

// The maximum-principle laboratory itself. Two directions:
//
// Positive direction (sweep): on a model with distance Laplacian dominated
// by G beyond the unit ball, a bounded g with supremum L is certified by
// sweeping the family lambda * F + L - eps down onto g, where F grows like
// exp(integral 1/G). The first touching level
//     lambda0 = max over [0, T] of (g - L + eps) / F
// is attained at a touch radius x_eps where, by design of F, the function g
// is within eps of L, has gradient below eps, and Laplacian below 2*eps.
// The certificate records those quantities and each inequality's outcome.
//
// Negative direction (counterexample): from a growth function whose
// reciprocal integral converges, build the slowed profile H and the warped
// manifold with delta_r = (n-1)(1/t + G); the bounded radial function
// h(r) = integral of 1/H then has Laplacian
//     delta_h = delta_r / H - H'/H^2 > 2 - 1 = 1
// bounded away from zero near its supremum, so no sequence can push the
// Laplacian below 1 and the principle fails on this manifold.

#include <cstddef>
#include <optional>
#include <vector>

#include "oylab/growth.hpp"
#include "oylab/manifold.hpp"
#include "oylab/quadrature.hpp"
#include "oylab/scalar_function.hpp"
#include "oylab/slowdown.hpp"

namespace oylab {

struct SweepOptions {
  std::size_t grid = 100000;       // ratio-maximization grid on [0, T]
  double refine_tol = 1e-10;       // golden-section bracket width
  int guard_samples = 4096;        // supremum sampling of the open unit ball
  int precheck_samples = 2048;     // delta_r <= G verification on (1, T]
  double horizon_frac = 0.99;      // touch beyond this fraction of T is refused
  double attained_tol = 1e-12;     // sup within this of L counts as attained
  QuadratureOptions quad;
};

struct SweepCertificate {
  double epsilon = 0.0;
  double lambda0 = 0.0;
  double x_eps = 0.0;
  double gap = 0.0;        // L - g at the touch radius
  double grad_norm = 0.0;  // |g'| there
  double laplacian = 0.0;  // g'' + delta_r * g' there
  double guard_bound = 0.0;
  bool near_sup_ok = false;   // gap <= eps
  bool lambda_ok = false;     // lambda0 < eps / F(x) and lambda0 < eps
  bool grad_ok = false;       // grad_norm < eps
  bool laplacian_ok = false;  // laplacian <= 2 eps
  bool trivial = false;       // supremum attained: certificates are immediate

  bool passed() const { return near_sup_ok && lambda_ok && grad_ok && laplacian_ok; }
};

// One sweep at one eps. Preconditions enforced before any sweep runs:
//   - eps below the guard min{1, L - sup of g on the open unit ball},
//   - g < L on the whole horizon grid,
//   - delta_r <= G sampled on (1, T],
//   - the touch radius must land inside horizon_frac * T.
SweepCertificate sweep_lambda0(const ModelManifold& m, const ScalarFunction1D& g, double L,
                               const GrowthFunction& G, double eps, double T,
                               const SweepOptions& opt = {});

// Certificates for a whole eps list with shared precomputation. When g
// attains L inside the domain the sweep degenerates (lambda0 = 0) and every
// certificate is immediate; the trivial flag records that path.
std::vector<SweepCertificate> certify_definition(const ModelManifold& m,
                                                 const ScalarFunction1D& g, double L,
                                                 const GrowthFunction& G,
                                                 const std::vector<double>& eps_list, double T,
                                                 const SweepOptions& opt = {});

enum class SequenceVerdict { plausible, violated, inconclusive };

struct HorizonDiagnostics {
  double horizon = 0.0;
  double sup_g = 0.0;
  double argmax = 0.0;
  double delta = 0.0;          // near-supremum slack defining the search region
  double inf_abs_grad = 0.0;   // over the near-supremum region
  double inf_laplacian = 0.0;  // over the near-supremum region
};

struct SequenceReport {
  std::vector<HorizonDiagnostics> horizons;
  SequenceVerdict verdict = SequenceVerdict::inconclusive;
};

struct SequenceOptions {
  int grid = 20000;
  double grad_tol = 0.05;      // "plausible" thresholds at the last horizon
  double lap_tol = 0.05;
  double violation_floor = 1.0 - 1e-6;  // inf Laplacian above this everywhere
  double delta_floor = 1e-9;
};

// Empirical search for a maximizing sequence: on growing horizons, shrink a
// near-supremum window (halving slack per horizon) and record the smallest
// gradient and Laplacian seen inside it. "violated" means the Laplacian
// never drops near zero anywhere near the supremum at any horizon;
// "plausible" means both quantities are small at the final horizon.
SequenceReport search_omori_sequence(const ModelManifold& m, const ScalarFunction1D& g,
                                     const std::vector<double>& horizons,
                                     const SequenceOptions& opt = {});

struct TailSample {
  double radius = 0.0;
  double height = 0.0;     // h at the radius
  double laplacian = 0.0;  // delta_h at the radius
};

struct ViolationReport {
  double h_sup = 0.0;             // bound on sup h (with declared tail if available)
  bool h_sup_is_full_bound = false;
  double sup_h_on_grid = 0.0;
  double delta_h_min = 0.0;       // over the scan grid; the violation needs > 1
  double delta_h_argmin = 0.0;
  std::vector<TailSample> maximizing_tail;
  SequenceReport sequence;
};

struct CounterexampleOptions {
  int grid = 10000;           // delta_h scan
  int tail_samples = 33;      // [T/2, T] witnesses
  SlowdownOptions slowdown;
  SequenceOptions sequence;
  QuadratureOptions quad;
  std::vector<double> sequence_horizons;  // empty: {T/2, 3T/4, T}
};

struct Counterexample {
  SlowedGrowth slowed;
  ModelManifold manifold;
  ScalarFunction1D h;  // bounded, radial, with delta_h > 1 near its supremum
  ViolationReport report;
};

// Full negative-direction pipeline. Refuses growth functions without a
// declared convergent reciprocal integral (an unbounded h certifies
// nothing). Throws PropertyViolation if the assembled delta_h ever fails
// to clear 1 on the scan grid.
Counterexample build_counterexample(const GrowthFunction& g, int n, double T,
                                    const CounterexampleOptions& opt = {});

}  // namespace oylab
