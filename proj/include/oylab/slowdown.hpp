#pragma once

// Construction of the slowed profile H from an admissible growth function G.
//
// The driver is the set A = { t : G'(t)/2 > (G(t)/2)^2 }, where G/2 grows
// faster than any solution of y' = y^2 can. On each component of A, starting
// at t_n, the profile abandons G/2 and follows the hyperbola
//     k_n(t) = 1 / (a_n - t),   a_n = t_n + 2 / G(t_n),
// which matches G/2 at t_n, satisfies k' = k^2 exactly, stays below G/2
// through the component (a blow-up comparison: while k <= G/2, k' <= (G/2)^2
// < G'/2), and crosses back up to G/2 at the first rejoin point v_n, which
// exists strictly before the pole a_n because G/2 outrunning y' = y^2 past
// a_n would force G to blow up before a_n. The assembled
//     H = G/2 off the splices, H = k_n on [t_n, v_n]
// is continuous, nondecreasing, stays in [1/2, G/2], and obeys H' <= H^2
// away from the finitely many joints. Those properties are exactly what the
// downstream counterexample manifold needs, and the slowdown CLI command
// re-verifies every one of them on a grid.
//
// The price of slowing down is integrable: the excess of 1/H over 2/G is
// supported on the splices, where 1/k_n integrates in closed form to
//     (1/2) * ((a_n - t_n)^2 - (a_n - v_n)^2),
// and consecutive splices either stay disjoint or nest (a splice born inside
// [s_m, v_m] rejoins no later than v_m), so partial sums of those terms stay
// below (2/G(t_1))^2.

#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "oylab/growth.hpp"
#include "oylab/quadrature.hpp"
#include "oylab/scalar_function.hpp"

namespace oylab {

enum class EndpointKind { boundary, root, truncation };

struct Interval {
  double lo = 0.0, hi = 0.0;
  EndpointKind lo_kind = EndpointKind::root;
  EndpointKind hi_kind = EndpointKind::root;
};

// Components of the fast-growth set A, ascending and disjoint.
struct IntervalSet {
  std::vector<Interval> components;
};

// One splice: the hyperbola 1/(pole - t) replaces G/2 on [start, rejoin].
// Ordering invariant: start < fast_end < rejoin < pole. fast_end is the
// right endpoint of the generating component of A; build_splice cannot know
// it (it only sees the entry point), so the pipeline fills it in afterwards
// and it stays NaN until then.
struct SpliceInterval {
  double start = 0.0;
  double fast_end = std::numeric_limits<double>::quiet_NaN();
  double pole = 0.0;
  double rejoin = 0.0;
};

struct SlowdownOptions {
  int grid = 10000;         // detection grid on [0, T]
  int scan_points = 10000;  // rejoin bracketing scan on (start, pole)
  double root_tol = 1e-10;
  bool force_gate = false;  // build H even without a convergent declaration
  QuadratureOptions quad;
};

// Sign-scans G'/2 - (G/2)^2 on a uniform grid and refines each transition by
// bisection. Endpoints are tagged with how they were found: the domain edge,
// a refined root, or truncation by the horizon.
IntervalSet detect_fast_growth_set(const GrowthFunction& g, double T,
                                   const SlowdownOptions& opt = {});

// Splice for the component entered at `start`. Throws SpliceEscapeError when
// the hyperbola cannot rejoin G/2 before the horizon (pole beyond T).
SpliceInterval build_splice(const GrowthFunction& g, double start, double T,
                            const SlowdownOptions& opt = {});

// Enforces the disjoint-or-nested dichotomy: contained splices are dropped,
// disjoint ones kept, partial overlap is a NestingError. Input must be
// sorted by start; the dropped count is reported via build_H.
std::vector<SpliceInterval> disjointify(std::vector<SpliceInterval> splices);

struct SlowedGrowth {
  GrowthFunction growth;
  IntervalSet fast_set;
  std::shared_ptr<const std::vector<SpliceInterval>> splices;
  std::size_t dropped_nested = 0;
  double horizon = 0.0;
  ScalarFunction1D fn;  // H itself; joints listed in nonsmooth_points

  // 0 for the base branch G/2, 1-based splice index otherwise.
  int branch_at(double t) const;
};

// Full pipeline: gate on the declared convergence of the reciprocal integral
// (a divergent or undeclared integral is refused unless forced), detect the
// fast set, build and disjointify splices, assemble H.
SlowedGrowth build_H(const GrowthFunction& g, double T, const SlowdownOptions& opt = {});

struct TelescopingReport {
  std::vector<double> terms;  // (a_n - t_n)^2 - (a_n - v_n)^2, one per splice
  double splice_sum = 0.0;    // half the term total: exact splice mass of 1/H
  double splice_sum_quadrature = 0.0;  // same mass via adaptive quadrature
  double bound_rhs = 0.0;              // (2 / G(t_1))^2
  bool prefix_bounds_ok = true;  // every half partial sum stays below bound_rhs
};

struct ReciprocalIntegral {
  double value_on_horizon = 0.0;        // quadrature of 1/H over [0, T]
  double closed_form_on_horizon = 0.0;  // base quadrature + exact splice terms
  std::optional<double> full_bound;     // + declared tail mass, when available
  TelescopingReport telescoping;
};

// Integral of 1/H over [0, T] computed two independent ways (they must agree
// to quadrature accuracy), plus the telescoping certificate. full_bound is
// value_on_horizon + 2 * tail(T) when G declares a convergent tail; the
// declared tail covers 2/G and the fast set of every preset lies inside the
// horizon, so no splice mass is unaccounted for.
ReciprocalIntegral integral_reciprocal_H(const SlowedGrowth& s, double T,
                                         const QuadratureOptions& opt = {});

// Grid re-verification of the construction properties (floor 1/2, cap G/2,
// monotonicity, slope vs square, continuity at joints). Margins are the
// worst observed slack per property; a negative margin beyond roundoff
// tolerance flips the flag.
struct LemmaScan {
  bool floor_ok = true, cap_ok = true, slope_nonneg_ok = true, slope_square_ok = true,
       monotone_ok = true, continuity_ok = true;
  double floor_margin = 0.0, cap_margin = 0.0, slope_margin = 0.0, slope_square_margin = 0.0;
  double floor_t = 0.0, cap_t = 0.0, slope_t = 0.0, slope_square_t = 0.0;
  double continuity_worst_jump = 0.0;
  bool all_ok() const {
    return floor_ok && cap_ok && slope_nonneg_ok && slope_square_ok && monotone_ok &&
           continuity_ok;
  }
};

LemmaScan scan_lemma_properties(const SlowedGrowth& s, int grid = 10000);

}  // namespace oylab
