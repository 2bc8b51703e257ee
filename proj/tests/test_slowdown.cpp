#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "oylab/errors.hpp"
#include "oylab/growth.hpp"
#include "oylab/presets.hpp"
#include "oylab/slowdown.hpp"

using namespace oylab;

namespace {

GrowthFunction admissible(const std::string& spec, double domain_max) {
  return validate_growth(resolve_scalar_spec(spec, domain_max));
}

// Hand-built splice with only the interval data that disjointify looks at.
SpliceInterval raw_splice(double start, double rejoin) {
  SpliceInterval sp;
  sp.start = start;
  sp.rejoin = rejoin;
  sp.pole = rejoin + 1.0;
  return sp;
}

// Piecewise-linear growth profiles give exactly solvable splice geometry:
// the slope jumps make the fast set a union of ramp intervals, and the
// hyperbolas cross constant stretches of G/2 at rational points.
GrowthFunction table_growth(const std::vector<TablePoint>& knots, const std::string& label) {
  return validate_growth(make_table_function(knots, label));
}

}  // namespace

TEST_CASE("fast-growth set of (1+t)^2 is one boundary-rooted component") {
  GrowthFunction g = admissible("(1+t)^2", 100.0);
  IntervalSet set = detect_fast_growth_set(g, 10.0);
  REQUIRE(set.components.size() == 1);
  const Interval& c = set.components[0];
  CHECK(c.lo == 0.0);
  CHECK(c.lo_kind == EndpointKind::boundary);
  // G'/2 > (G/2)^2 here means (1+t)^3 < 4.
  CHECK(std::fabs(c.hi - (std::cbrt(4.0) - 1.0)) <= 1e-8);
  CHECK(c.hi_kind == EndpointKind::root);
}

TEST_CASE("constant growth has an empty fast-growth set") {
  GrowthFunction g = validate_growth(make_constant(1.0, 100.0));
  IntervalSet set = detect_fast_growth_set(g, 10.0);
  CHECK(set.components.empty());
}

TEST_CASE("fast-growth set of 1+t ends where (1+t)^2 reaches 2") {
  GrowthFunction g = admissible("1+t", 100.0);
  IntervalSet set = detect_fast_growth_set(g, 10.0);
  REQUIRE(set.components.size() == 1);
  CHECK(set.components[0].lo == 0.0);
  CHECK(set.components[0].lo_kind == EndpointKind::boundary);
  CHECK(std::fabs(set.components[0].hi - (std::sqrt(2.0) - 1.0)) <= 1e-8);
}

TEST_CASE("fast-growth set of 1+t^2 has interior root endpoints") {
  GrowthFunction g = admissible("1+t^2", 100.0);
  IntervalSet set = detect_fast_growth_set(g, 10.0);
  REQUIRE(set.components.size() == 1);
  const Interval& c = set.components[0];
  CHECK(c.lo_kind == EndpointKind::root);
  CHECK(c.hi_kind == EndpointKind::root);
  // Both endpoints satisfy 4t = (1+t^2)^2; the left one is transcendental,
  // the right one is exactly t = 1.
  CHECK(std::fabs(c.lo - 0.29559774252208477) <= 1e-6);
  CHECK(std::fabs(c.hi - 1.0) <= 1e-8);
  const double residual_lo = 4.0 * c.lo - (1.0 + c.lo * c.lo) * (1.0 + c.lo * c.lo);
  CHECK(std::fabs(residual_lo) <= 1e-7);
}

TEST_CASE("splice anchors for (1+t)^2") {
  GrowthFunction g = admissible("(1+t)^2", 100.0);
  SpliceInterval sp = build_splice(g, 0.0, 50.0);
  CHECK(sp.start == 0.0);
  CHECK(std::fabs(sp.pole - 2.0) <= 1e-12);
  // Rejoin solves (2-t)(1+t)^2 = 2, i.e. 3t = t^3, so v = sqrt(3).
  CHECK(std::fabs(sp.rejoin - std::sqrt(3.0)) <= 1e-8);
  const double residual = 1.0 / (sp.pole - sp.rejoin) - 0.5 * g.fn.eval(sp.rejoin);
  CHECK(std::fabs(residual) <= 1e-6);
}

TEST_CASE("splice anchors for 1+t") {
  GrowthFunction g = admissible("1+t", 100.0);
  SpliceInterval sp = build_splice(g, 0.0, 50.0);
  CHECK(std::fabs(sp.pole - 2.0) <= 1e-12);
  // (2-t)(1+t) = 2 reduces to t(1-t) = 0, so the first crossing is t = 1.
  CHECK(std::fabs(sp.rejoin - 1.0) <= 1e-8);
}

TEST_CASE("constant growth never rejoins: the escape error carries the pole") {
  GrowthFunction g = validate_growth(make_constant(1.0, 100.0));
  try {
    build_splice(g, 5.0, 10.0);
    FAIL("expected SpliceEscapeError");
  } catch (const SpliceEscapeError& e) {
    CHECK(e.start == 5.0);
    CHECK(std::fabs(e.pole - 7.0) <= 1e-12);
  }
}

TEST_CASE("splice escape when the horizon cuts the hyperbola") {
  GrowthFunction g = admissible("(1+t)^2", 100.0);
  try {
    build_splice(g, 0.0, 1.0);
    FAIL("expected SpliceEscapeError");
  } catch (const SpliceEscapeError& e) {
    CHECK(e.start == 0.0);
    CHECK(std::fabs(e.pole - 2.0) <= 1e-12);
  }
}

TEST_CASE("build_splice rejects a start outside the horizon") {
  GrowthFunction g = admissible("(1+t)^2", 100.0);
  CHECK_THROWS_AS(build_splice(g, -1.0, 10.0), PreconditionError);
  CHECK_THROWS_AS(build_splice(g, 10.0, 10.0), PreconditionError);
}

TEST_CASE("disjointify keeps a singleton") {
  std::vector<SpliceInterval> out = disjointify({raw_splice(0.0, std::sqrt(3.0))});
  REQUIRE(out.size() == 1);
  CHECK(out[0].start == 0.0);
}

TEST_CASE("disjointify drops a nested splice") {
  std::vector<SpliceInterval> out = disjointify({raw_splice(0.0, 5.0), raw_splice(1.0, 2.0)});
  REQUIRE(out.size() == 1);
  CHECK(out[0].start == 0.0);
  CHECK(out[0].rejoin == 5.0);
}

TEST_CASE("disjointify keeps disjoint splices") {
  std::vector<SpliceInterval> out = disjointify({raw_splice(0.0, 1.0), raw_splice(2.0, 3.0)});
  CHECK(out.size() == 2);
}

TEST_CASE("disjointify keeps splices that only touch") {
  std::vector<SpliceInterval> out = disjointify({raw_splice(0.0, 1.0), raw_splice(1.0, 2.0)});
  CHECK(out.size() == 2);
}

TEST_CASE("disjointify rejects partial overlap with the offending pair") {
  try {
    disjointify({raw_splice(0.0, 2.0), raw_splice(1.0, 3.0)});
    FAIL("expected NestingError");
  } catch (const NestingError& e) {
    CHECK(e.first_lo == 0.0);
    CHECK(e.first_hi == 2.0);
    CHECK(e.second_lo == 1.0);
    CHECK(e.second_hi == 3.0);
  }
}

TEST_CASE("disjointify rejects unsorted input") {
  CHECK_THROWS_AS(disjointify({raw_splice(2.0, 3.0), raw_splice(0.0, 1.0)}), PreconditionError);
}

TEST_CASE("build_H refuses a divergent reciprocal integral unless forced") {
  GrowthFunction g = admissible("1+t", 100.0);
  try {
    build_H(g, 10.0);
    FAIL("expected PreconditionError");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("diverges (declared)") != std::string::npos);
  }
  SlowdownOptions opt;
  opt.force_gate = true;
  SlowedGrowth s = build_H(g, 10.0, opt);
  REQUIRE(s.splices->size() == 1);
  CHECK(s.fn.eval(5.0) == 3.0);  // base branch: (1+5)/2
}

TEST_CASE("build_H refuses an undeclared reciprocal integral unless forced") {
  GrowthFunction g = admissible("1+t^2", 100.0);
  try {
    build_H(g, 10.0);
    FAIL("expected PreconditionError");
  } catch (const PreconditionError& e) {
    CHECK(std::string(e.what()).find("no convergence declaration") != std::string::npos);
  }
  SlowdownOptions opt;
  opt.force_gate = true;
  SlowedGrowth s = build_H(g, 10.0, opt);
  CHECK(s.splices->size() == 1);
}

TEST_CASE("H assembled for (1+t)^2 matches the hand computation") {
  GrowthFunction g = admissible("(1+t)^2", 1000.0);
  SlowedGrowth s = build_H(g, 50.0);
  REQUIRE(s.splices->size() == 1);
  const SpliceInterval& sp = s.splices->front();
  CHECK(sp.start == 0.0);
  CHECK(std::fabs(sp.fast_end - (std::cbrt(4.0) - 1.0)) <= 1e-8);
  CHECK(std::fabs(sp.pole - 2.0) <= 1e-12);
  CHECK(std::fabs(sp.rejoin - std::sqrt(3.0)) <= 1e-8);
  CHECK(s.dropped_nested == 0);
  CHECK(s.horizon == 50.0);

  // On the splice H(t) = 1/(2-t); afterwards H(t) = (1+t)^2 / 2.
  CHECK(s.fn.eval(0.0) == 0.5);
  CHECK(s.fn.eval(1.0) == 1.0);
  CHECK(s.fn.eval(2.0) == 4.5);
  CHECK(s.fn.eval(50.0) == 0.5 * 51.0 * 51.0);
  CHECK(s.branch_at(1.0) == 1);
  CHECK(s.branch_at(2.0) == 0);
  CHECK(s.branch_at(49.9) == 0);

  // Derivatives per branch: k^2 on the splice, G'/2 = 1+t off it.
  CHECK(s.fn.deriv(1.0) == 1.0);
  CHECK(s.fn.deriv(2.0) == 3.0);
  CHECK(s.fn.deriv2(1.0) == 2.0);
  CHECK(s.fn.deriv2(2.0) == 1.0);

  // Continuity at the rejoin: both branches evaluate to 1/(2-sqrt(3)) = 2+sqrt(3).
  const double v = sp.rejoin;
  CHECK(std::fabs(s.fn.eval(v) - (2.0 + std::sqrt(3.0))) <= 1e-7);
  CHECK(std::fabs(s.fn.eval(v + 1e-9) - s.fn.eval(v - 1e-9)) <= 1e-6);

  REQUIRE(s.fn.nonsmooth_points.size() == 2);
  CHECK(s.fn.nonsmooth_points[0] == sp.start);
  CHECK(s.fn.nonsmooth_points[1] == sp.rejoin);
}

TEST_CASE("empty fast set leaves H = G/2 everywhere") {
  GrowthFunction g = validate_growth(make_constant(5.0, 100.0));
  SlowdownOptions opt;
  opt.force_gate = true;  // constant growth has a divergent reciprocal integral
  SlowedGrowth s = build_H(g, 20.0, opt);
  CHECK(s.splices->empty());
  CHECK(s.dropped_nested == 0);
  CHECK(s.fn.eval(0.0) == 2.5);
  CHECK(s.fn.eval(13.7) == 2.5);
  CHECK(s.fn.deriv(5.0) == 0.0);
  CHECK(s.branch_at(10.0) == 0);

  LemmaScan scan = scan_lemma_properties(s, 2000);
  CHECK(scan.all_ok());
  CHECK(scan.continuity_worst_jump == 0.0);
  CHECK(scan.cap_margin == 0.0);  // 2H = G exactly, everywhere
}

TEST_CASE("lemma scan certifies the (1+t)^2 profile") {
  GrowthFunction g = admissible("(1+t)^2", 1000.0);
  SlowedGrowth s = build_H(g, 50.0);
  LemmaScan scan = scan_lemma_properties(s, 10000);
  CHECK(scan.all_ok());

  // The floor is approached at the left edge of the splice; the slope-square
  // inequality is an identity on the splice, so its margin is exactly zero.
  CHECK(scan.floor_margin >= 0.0);
  CHECK(scan.floor_margin < 0.01);
  CHECK(scan.floor_t < 0.05);
  CHECK(scan.cap_margin >= 0.0);
  CHECK(scan.slope_margin > 0.2);
  CHECK(scan.slope_square_margin >= 0.0);
  CHECK(scan.slope_square_margin <= 1e-12);
  CHECK(scan.slope_square_t > 0.0);
  CHECK(scan.slope_square_t < std::sqrt(3.0));
  CHECK(scan.continuity_worst_jump < 1e-4);
}

TEST_CASE("forced 1+t^2 profile passes the lemma scan with nested anchors") {
  GrowthFunction g = admissible("1+t^2", 1000.0);
  SlowdownOptions opt;
  opt.force_gate = true;
  SlowedGrowth s = build_H(g, 50.0, opt);

  REQUIRE(s.splices->size() == 1);
  const SpliceInterval& sp = s.splices->front();
  CHECK(std::fabs(sp.start - 0.29559774252208477) <= 1e-6);
  CHECK(std::fabs(sp.pole - 2.1348844977362459) <= 1e-6);
  CHECK(std::fabs(sp.rejoin - 1.5436890126920764) <= 1e-6);

  // Defining equations, as residuals: the entry point satisfies
  // 4t = (1+t^2)^2, the pole satisfies (a-t)G(t) = 2, and the rejoin
  // satisfies (a-v)G(v) = 2.
  const double t1 = sp.start, a1 = sp.pole, v1 = sp.rejoin;
  CHECK(std::fabs(4.0 * t1 - (1.0 + t1 * t1) * (1.0 + t1 * t1)) <= 1e-7);
  CHECK(std::fabs((a1 - t1) * g.fn.eval(t1) - 2.0) <= 1e-8);
  CHECK(std::fabs((a1 - v1) * g.fn.eval(v1) - 2.0) <= 1e-7);

  // The generating component sits inside its splice.
  REQUIRE(s.fast_set.components.size() == 1);
  const Interval& c = s.fast_set.components[0];
  CHECK(sp.start <= c.lo + 1e-9);
  CHECK(c.hi <= sp.rejoin + 1e-9);
  CHECK(sp.fast_end == c.hi);

  CHECK(scan_lemma_properties(s, 10000).all_ok());
}

TEST_CASE("reciprocal integral of H for (1+t)^2: two routes and telescoping") {
  GrowthFunction g = admissible("(1+t)^2", 1000.0);
  SlowedGrowth s = build_H(g, 50.0);
  ReciprocalIntegral ri = integral_reciprocal_H(s, 50.0);

  // Exact value on [0, 50]: the splice contributes (4sqrt(3)-3)/2 in closed
  // form and the base branch integrates 2/(1+t)^2 from sqrt(3) to 50.
  const double splice_mass = 0.5 * (4.0 * std::sqrt(3.0) - 3.0);
  const double base_mass = 2.0 / (1.0 + std::sqrt(3.0)) - 2.0 / 51.0;
  CHECK(std::fabs(ri.value_on_horizon - (splice_mass + base_mass)) <= 1e-7);
  CHECK(std::fabs(ri.value_on_horizon - ri.closed_form_on_horizon) <= 1e-9);

  const TelescopingReport& tel = ri.telescoping;
  REQUIRE(tel.terms.size() == 1);
  CHECK(std::fabs(tel.splice_sum - splice_mass) <= 1e-8);
  CHECK(std::fabs(tel.splice_sum_quadrature - tel.splice_sum) <= 1e-8);
  CHECK(std::fabs(tel.bound_rhs - 4.0) <= 1e-12);
  CHECK(tel.splice_sum < tel.bound_rhs);
  CHECK(tel.prefix_bounds_ok);

  // The declared tail upgrades the horizon value to a full bound:
  // 2 tail(50) = 2/51 closes the gap to 2 sqrt(3) - 3/2 + 2/(1+sqrt(3)).
  REQUIRE(ri.full_bound.has_value());
  const double full = 2.0 * std::sqrt(3.0) - 1.5 + 2.0 / (1.0 + std::sqrt(3.0));
  CHECK(std::fabs(*ri.full_bound - full) <= 1e-7);
}

TEST_CASE("reciprocal integral respects a partial horizon") {
  GrowthFunction g = admissible("(1+t)^2", 1000.0);
  SlowedGrowth s = build_H(g, 50.0);
  ReciprocalIntegral ri = integral_reciprocal_H(s, 1.0);
  // Entirely inside the splice: integral of (2-t) over [0,1] is 3/2.
  CHECK(std::fabs(ri.value_on_horizon - 1.5) <= 1e-9);
  CHECK(std::fabs(ri.closed_form_on_horizon - 1.5) <= 1e-9);
  // The telescoping certificate always covers the full built horizon.
  CHECK(std::fabs(ri.telescoping.splice_sum - 0.5 * (4.0 * std::sqrt(3.0) - 3.0)) <= 1e-8);

  CHECK_THROWS_AS(integral_reciprocal_H(s, 51.0), PreconditionError);
}

TEST_CASE("piecewise-linear growth with two ramps yields two splices") {
  GrowthFunction g = table_growth(
      {{0.0, 1.0}, {1.0, 1.0}, {1.2, 2.0}, {3.0, 2.0}, {3.2, 4.0}, {10.0, 4.0}}, "two-ramps");
  SlowdownOptions opt;
  opt.force_gate = true;  // table profiles carry no convergence declaration
  SlowedGrowth s = build_H(g, 10.0, opt);

  REQUIRE(s.fast_set.components.size() == 2);
  REQUIRE(s.splices->size() == 2);
  CHECK(s.dropped_nested == 0);

  // First ramp: the fast set is the ramp (1, 1.2); the hyperbola has pole
  // 1 + 2/G(1) = 3 and re-crosses the constant stretch G/2 = 1 at t = 2.
  const SpliceInterval& s1 = (*s.splices)[0];
  CHECK(std::fabs(s1.start - 1.0) <= 1e-8);
  CHECK(std::fabs(s1.fast_end - 1.2) <= 1e-8);
  CHECK(std::fabs(s1.pole - 3.0) <= 1e-7);
  CHECK(std::fabs(s1.rejoin - 2.0) <= 1e-7);

  // Second ramp: pole 3 + 2/G(3) = 4, re-crossing G/2 = 2 at t = 3.5.
  const SpliceInterval& s2 = (*s.splices)[1];
  CHECK(std::fabs(s2.start - 3.0) <= 1e-8);
  CHECK(std::fabs(s2.fast_end - 3.2) <= 1e-8);
  CHECK(std::fabs(s2.pole - 4.0) <= 1e-7);
  CHECK(std::fabs(s2.rejoin - 3.5) <= 1e-7);

  // Every component is inside its splice.
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK((*s.splices)[i].start <= s.fast_set.components[i].lo + 1e-9);
    CHECK(s.fast_set.components[i].hi <= (*s.splices)[i].rejoin + 1e-9);
  }

  CHECK(s.branch_at(0.5) == 0);
  CHECK(s.branch_at(1.5) == 1);
  CHECK(s.branch_at(2.5) == 0);
  CHECK(s.branch_at(3.25) == 2);
  CHECK(s.branch_at(5.0) == 0);

  LemmaScan scan = scan_lemma_properties(s, 10000);
  CHECK(scan.all_ok());
  CHECK(scan.floor_margin == 0.0);  // H = 1/2 exactly on the flat start

  // Piecewise-exact integral: 1/2 on [0,1] gives 2, the first splice gives
  // 3/2, the flat stretch [2,3] gives 1, the second splice 3/8, and the
  // tail [3.5,10] at H = 2 gives 13/4; total 65/8.
  ReciprocalIntegral ri = integral_reciprocal_H(s, 10.0);
  CHECK(std::fabs(ri.value_on_horizon - 8.125) <= 1e-6);
  CHECK(std::fabs(ri.value_on_horizon - ri.closed_form_on_horizon) <= 1e-8);

  const TelescopingReport& tel = ri.telescoping;
  REQUIRE(tel.terms.size() == 2);
  CHECK(std::fabs(tel.splice_sum - 1.875) <= 1e-6);
  CHECK(std::fabs(tel.splice_sum_quadrature - tel.splice_sum) <= 1e-8);
  CHECK(std::fabs(tel.bound_rhs - 4.0) <= 1e-7);
  CHECK(tel.prefix_bounds_ok);
  CHECK(!ri.full_bound.has_value());
}

TEST_CASE("a ramp inside an earlier splice is dropped as nested") {
  GrowthFunction g = table_growth(
      {{0.0, 1.0}, {1.0, 1.0}, {1.2, 2.0}, {1.3, 2.0}, {1.35, 2.6}, {5.0, 2.6}}, "nested-ramps");
  SlowdownOptions opt;
  opt.force_gate = true;
  SlowedGrowth s = build_H(g, 5.0, opt);

  // Two fast components, but the second splice rejoins before the first
  // does, so only the outer splice survives.
  REQUIRE(s.fast_set.components.size() == 2);
  REQUIRE(s.splices->size() == 1);
  CHECK(s.dropped_nested == 1);

  const SpliceInterval& sp = s.splices->front();
  CHECK(std::fabs(sp.start - 1.0) <= 1e-8);
  CHECK(std::fabs(sp.pole - 3.0) <= 1e-7);
  // The hyperbola 1/(3-t) re-crosses the final stretch G/2 = 1.3 at
  // t = 3 - 1/1.3.
  CHECK(std::fabs(sp.rejoin - (3.0 - 1.0 / 1.3)) <= 1e-7);

  // The dropped splice, built directly, confirms the nesting.
  SpliceInterval inner = build_splice(g, 1.3, 5.0);
  CHECK(std::fabs(inner.pole - 2.3) <= 1e-7);
  CHECK(std::fabs(inner.rejoin - (2.3 - 1.0 / 1.3)) <= 1e-7);
  CHECK(inner.start >= sp.start - 1e-9);
  CHECK(inner.rejoin <= sp.rejoin + 1e-9);

  // Both fast components still live inside the surviving splice.
  for (const Interval& c : s.fast_set.components) {
    CHECK(sp.start <= c.lo + 1e-9);
    CHECK(c.hi <= sp.rejoin + 1e-9);
  }

  CHECK(scan_lemma_properties(s, 10000).all_ok());
}
