#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <vector>

#include "oylab/errors.hpp"
#include "oylab/growth.hpp"
#include "oylab/manifold.hpp"
#include "oylab/presets.hpp"

using namespace oylab;

namespace {

GrowthFunction admissible(const std::string& spec, double domain_max) {
  return validate_growth(resolve_scalar_spec(spec, domain_max));
}

double coth(double t) { return 1.0 / std::tanh(t); }

// Largest |m(t) - reference(t)| over the trace, skipping nothing.
template <typename Ref>
double trace_error(const RiccatiTrace& trace, Ref ref) {
  double worst = 0.0;
  for (std::size_t i = 0; i < trace.t.size(); ++i) {
    worst = std::max(worst, std::fabs(trace.m[i] - ref(trace.t[i])));
  }
  return worst;
}

}  // namespace

TEST_CASE("model manifold rejects bad dimensions and bad warpings") {
  ScalarFunction1D sinh_f = resolve_warping_spec("sinh", 10.0);
  CHECK_THROWS_AS(make_model_manifold(1, sinh_f), PreconditionError);

  // cosh fails f(0) = 0; 2t fails f'(0) = 1; a profile dipping negative
  // fails positivity.
  CHECK_THROWS_AS(make_model_manifold(2, resolve_warping_spec("cosh(t)", 10.0)),
                  PreconditionError);
  CHECK_THROWS_AS(make_model_manifold(2, resolve_warping_spec("2*t", 10.0)), PreconditionError);
  CHECK_THROWS_AS(make_model_manifold(2, resolve_warping_spec("t*(1-t/5)", 10.0)),
                  PreconditionError);
}

TEST_CASE("distance Laplacian of the standard models") {
  ModelManifold hyperbolic = make_model_manifold(2, resolve_warping_spec("sinh", 25.0));
  CHECK(std::fabs(delta_r(hyperbolic, 1.0) - coth(1.0)) <= 1e-12);

  ModelManifold euclidean3 = make_model_manifold(3, resolve_warping_spec("t", 100.0));
  CHECK(std::fabs(delta_r(euclidean3, 2.0) - 1.0) <= 1e-12);

  ModelManifold hyperbolic4 = make_model_manifold(4, resolve_warping_spec("sinh", 25.0));
  CHECK(std::fabs(delta_r(hyperbolic4, 20.0) - 3.0) <= 1e-9);

  CHECK_THROWS_AS(delta_r(hyperbolic, 0.0), PreconditionError);
  CHECK_THROWS_AS(delta_r(hyperbolic, -1.0), PreconditionError);
}

TEST_CASE("radial Ricci of the standard models") {
  ModelManifold hyperbolic = make_model_manifold(2, resolve_warping_spec("sinh", 25.0));
  CHECK(std::fabs(ricci_radial(hyperbolic, 0.7) + 1.0) <= 1e-10);
  CHECK(std::fabs(ricci_radial(hyperbolic, 3.0) + 1.0) <= 1e-10);

  ModelManifold euclidean = make_model_manifold(2, resolve_warping_spec("t", 100.0));
  CHECK(std::fabs(ricci_radial(euclidean, 1.3)) <= 1e-12);

  ModelManifold hyperbolic3 = make_model_manifold(3, resolve_warping_spec("sinh", 25.0));
  CHECK(std::fabs(ricci_radial(hyperbolic3, 1.1) + 2.0) <= 1e-10);

  // ricci_function packages the same values behind the function contract.
  ScalarFunction1D R = ricci_function(hyperbolic);
  CHECK(std::fabs(R.eval(0.5) + 1.0) <= 1e-9);
  CHECK(std::fabs(R.eval(4.0) + 1.0) <= 1e-9);
}

TEST_CASE("radial Laplacian combines u'' with the distance term") {
  ModelManifold euclidean3 = make_model_manifold(3, resolve_warping_spec("t", 100.0));
  ScalarFunction1D u = resolve_scalar_spec("t^2", 100.0);
  CHECK(std::fabs(radial_laplacian(euclidean3, u, 1.7) - 6.0) <= 1e-12);

  ModelManifold hyperbolic = make_model_manifold(2, resolve_warping_spec("sinh", 25.0));
  ScalarFunction1D linear = resolve_scalar_spec("t", 25.0);
  CHECK(std::fabs(radial_laplacian(hyperbolic, linear, 1.0) - coth(1.0)) <= 1e-12);

  ScalarFunction1D constant = resolve_scalar_spec("3", 25.0);
  CHECK(radial_laplacian(hyperbolic, constant, 2.0) == 0.0);
}

TEST_CASE("counterexample manifold exposes exact log-derivative geometry") {
  GrowthFunction g1 = validate_growth(make_constant(1.0, 50.0));
  ModelManifold m1 = build_counterexample_manifold(g1, 2);
  CHECK(std::fabs(delta_r(m1, 2.0) - 1.5) <= 1e-12);
  CHECK(std::fabs(m1.log_warping(2.0) - (std::log(2.0) + 2.0)) <= 1e-9);
  CHECK(std::fabs(m1.warping.eval(2.0) - 2.0 * std::exp(2.0)) <= 1e-8 * 2.0 * std::exp(2.0));
  CHECK(std::fabs(m1.warping.deriv(2.0) - 3.0 * std::exp(2.0)) <= 1e-8 * 3.0 * std::exp(2.0));
  CHECK(std::fabs(m1.warping.deriv2(2.0) - 4.0 * std::exp(2.0)) <= 1e-8 * 4.0 * std::exp(2.0));
  CHECK(std::fabs(ricci_radial(m1, 2.0) + 2.0) <= 1e-10);

  GrowthFunction g2 = admissible("(1+t)^2", 50.0);
  ModelManifold m2 = build_counterexample_manifold(g2, 2);
  CHECK(std::fabs(delta_r(m2, 1.0) - 5.0) <= 1e-12);
  CHECK(std::fabs(m2.radial_log_deriv_prime(1.0) - 3.0) <= 1e-12);

  // The stored log derivative agrees with a finite difference of ln f.
  for (double t : {0.5, 1.0, 2.0, 5.0}) {
    const double h = 1e-5;
    const double fd = (m2.log_warping(t + h) - m2.log_warping(t - h)) / (2.0 * h);
    CHECK(std::fabs(fd - m2.radial_log_deriv(t)) <= 1e-5 * std::max(1.0, std::fabs(fd)));
  }

  // The distance Laplacian clears the growth bound strictly.
  for (double t : {0.1, 1.0, 10.0, 40.0}) {
    CHECK(delta_r(m2, t) > g2.fn.eval(t));
  }

  CHECK_THROWS_AS(build_counterexample_manifold(g1, 1), PreconditionError);
}

TEST_CASE("comparison ODE reproduces the hyperbolic distance Laplacian") {
  GrowthFunction g = validate_growth(make_constant(1.0, 50.0));
  ScalarFunction1D R = neg_growth_squared(g);
  CHECK(R.eval(3.0) == -1.0);
  CHECK(R.deriv(3.0) == 0.0);

  const double m0 = coth(0.1);
  RiccatiTrace trace = riccati_integrate(R, 2, 0.1, m0, 10.0);
  CHECK(!trace.blow_up);
  REQUIRE(trace.t.size() > 10);
  CHECK(trace.t.front() == 0.1);
  CHECK(trace.t.back() == 10.0);
  REQUIRE(trace.R.size() == trace.t.size());
  CHECK(trace.R.front() == -1.0);
  CHECK(trace.R.back() == -1.0);
  CHECK(trace_error(trace, [](double t) { return coth(t); }) <= 1e-6);
}

TEST_CASE("comparison ODE sits still at its equilibrium") {
  GrowthFunction g = validate_growth(make_constant(1.0, 50.0));
  RiccatiTrace trace = riccati_integrate(neg_growth_squared(g), 2, 0.1, 1.0, 10.0);
  CHECK(trace_error(trace, [](double) { return 1.0; }) <= 1e-9);
}

TEST_CASE("comparison ODE relaxes toward sqrt(n-1) G from above") {
  GrowthFunction g = validate_growth(make_constant(2.0, 50.0));
  RiccatiTrace trace = riccati_integrate(neg_growth_squared(g), 5, 0.1, 10.0, 5.0);
  CHECK(!trace.blow_up);

  // Closed form: m(t) = 4 coth(t - 0.1 + c) with coth(c) = 10/4.
  const double c = 0.5 * std::log(7.0 / 3.0);
  CHECK(trace_error(trace, [c](double t) { return 4.0 * coth(t - 0.1 + c); }) <= 1e-6);
  for (std::size_t i = 1; i < trace.m.size(); ++i) {
    CHECK(trace.m[i] <= trace.m[i - 1] + 1e-12);
  }
  CHECK(trace.m.back() > 4.0);

  // factor = sqrt(4) + 1 = 3, so the bound 3G = 6 takes hold where
  // 4 coth(t - 0.1 + c) = 6, at t* = arccoth(3/2) + 0.1 - c.
  ComparisonBoundReport rep = check_comparison_bound(trace, g, 5);
  CHECK(rep.factor == 3.0);
  CHECK(!rep.holds_everywhere);
  REQUIRE(rep.holds_from.has_value());
  const double t_star = 0.5 * std::log(5.0) + 0.1 - c;
  CHECK(*rep.holds_from >= t_star - 1e-9);
  CHECK(*rep.holds_from <= t_star + 0.15);
}

TEST_CASE("positive curvature floor forces finite-time blow-up near pi") {
  ScalarFunction1D R = make_constant(1.0, 100.0);
  const double m0 = 1.0 / std::tan(0.1);
  RiccatiTrace trace = riccati_integrate(R, 2, 0.1, m0, 10.0);
  CHECK(trace.blow_up);
  REQUIRE(trace.blow_up_t.has_value());
  CHECK(std::fabs(*trace.blow_up_t - 3.14159265358979324) <= 0.01);
  CHECK(trace.m.back() < -1e11);
  CHECK(trace.t.back() < 3.2);
}

TEST_CASE("comparison ODE preconditions") {
  GrowthFunction g = validate_growth(make_constant(1.0, 50.0));
  ScalarFunction1D R = neg_growth_squared(g);
  CHECK_THROWS_AS(riccati_integrate(R, 2, 5.0, 1.0, 5.0), PreconditionError);
  CHECK_THROWS_AS(riccati_integrate(R, 2, -1.0, 1.0, 5.0), PreconditionError);
  CHECK_THROWS_AS(riccati_integrate(R, 2, 0.1, 1.0, 60.0), PreconditionError);
  CHECK_THROWS_AS(riccati_integrate(R, 1, 0.1, 1.0, 5.0), PreconditionError);
}

TEST_CASE("comparison ODE reproduces each model's distance Laplacian exactly") {
  struct Case {
    ModelManifold m;
    const char* name;
  };
  std::vector<Case> cases;
  cases.push_back({make_model_manifold(2, resolve_warping_spec("sinh", 25.0)), "sinh"});
  cases.push_back({make_model_manifold(3, resolve_warping_spec("t", 25.0)), "linear"});
  cases.push_back(
      {build_counterexample_manifold(validate_growth(make_constant(1.0, 25.0)), 2), "t exp(t)"});

  for (const Case& c : cases) {
    CAPTURE(c.name);
    ScalarFunction1D R = ricci_function(c.m);
    const double m0 = delta_r(c.m, 0.1);
    RiccatiTrace trace = riccati_integrate(R, c.m.dim, 0.1, m0, 10.0);
    CHECK(!trace.blow_up);
    const double worst =
        trace_error(trace, [&c](double t) { return delta_r(c.m, std::max(t, 1e-6)); });
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("comparison bound against a taller growth holds from the start") {
  // The hyperbolic trace m = coth stays below factor * G = 4 from t0 = 0.3
  // because coth(0.3) is only about 3.43.
  GrowthFunction g1 = validate_growth(make_constant(1.0, 50.0));
  RiccatiTrace trace = riccati_integrate(neg_growth_squared(g1), 2, 0.3, coth(0.3), 10.0);

  GrowthFunction g2 = validate_growth(make_constant(2.0, 50.0));
  ComparisonBoundReport rep = check_comparison_bound(trace, g2, 2);
  CHECK(rep.factor == 2.0);
  CHECK(rep.holds_everywhere);
  REQUIRE(rep.holds_from.has_value());
  CHECK(*rep.holds_from == 0.3);
  CHECK(!rep.witness_t.has_value());
}

TEST_CASE("comparison bound against matching growth takes hold past arccoth(2)") {
  GrowthFunction g = validate_growth(make_constant(1.0, 50.0));
  RiccatiTrace trace = riccati_integrate(neg_growth_squared(g), 2, 0.1, coth(0.1), 10.0);
  ComparisonBoundReport rep = check_comparison_bound(trace, g, 2);
  CHECK(rep.factor == 2.0);
  CHECK(!rep.holds_everywhere);
  REQUIRE(rep.holds_from.has_value());

  // coth(t) < 2 exactly for t > arccoth(2) = ln(3)/2; holds_from is the
  // first sample past that, so it lands within one step of the threshold.
  const double threshold = 0.5 * std::log(3.0);
  CHECK(*rep.holds_from >= threshold - 1e-9);
  CHECK(*rep.holds_from <= threshold + 0.15);

  // Semantics: every sample from holds_from on satisfies the bound.
  for (std::size_t i = 0; i < trace.t.size(); ++i) {
    if (trace.t[i] >= *rep.holds_from) {
      CHECK(trace.m[i] < rep.factor * g.fn.eval(trace.t[i]));
    }
  }
}

TEST_CASE("comparison bound reports a witness when it never takes hold") {
  GrowthFunction g = validate_growth(make_constant(1.0, 50.0));
  RiccatiTrace trace = riccati_integrate(neg_growth_squared(g), 2, 0.01, coth(0.01), 0.15);
  ComparisonBoundReport rep = check_comparison_bound(trace, g, 2);
  CHECK(!rep.holds_everywhere);
  CHECK(!rep.holds_from.has_value());
  REQUIRE(rep.witness_t.has_value());
  REQUIRE(rep.witness_m.has_value());
  REQUIRE(rep.witness_bound.has_value());
  CHECK(*rep.witness_t == 0.15);
  CHECK(*rep.witness_bound == 2.0);
  CHECK(*rep.witness_m > *rep.witness_bound);
  CHECK(std::fabs(*rep.witness_m - coth(0.15)) <= 1e-6);
}
