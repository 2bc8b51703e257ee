#include "oylab/growth.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "oylab/errors.hpp"

namespace oylab {
namespace {

constexpr double kSlack = 1e-12;

void require_verified(const GrowthFunction& g, const char* who) {
  if (!g.verified) {
    throw PreconditionError(std::string(who) + ": growth function is not verified admissible");
  }
}

}  // namespace

GrowthFunction validate_growth(const ScalarFunction1D& fn, int samples, std::uint64_t seed) {
  if (!(fn.domain_max > 0.0)) throw PreconditionError("validate_growth: empty domain");
  if (samples < 2) throw PreconditionError("validate_growth: need at least two samples");

  GrowthFunction g;
  g.fn = fn;

  const auto check_at = [&](double t) -> bool {
    const double v = fn.eval(t);
    const double d = fn.deriv(t);
    if (!std::isfinite(v) || !std::isfinite(d)) {
      throw NonFiniteError("validate_growth: non-finite value during scan", t);
    }
    if (v < 1.0 - kSlack) {
      g.violation = {AdmissibilityViolation::Condition::below_floor, t, v};
      return false;
    }
    if (d < -kSlack) {
      g.violation = {AdmissibilityViolation::Condition::negative_slope, t, d};
      return false;
    }
    return true;
  };

  for (int i = 0; i < samples; ++i) {
    const double t = fn.domain_max * static_cast<double>(i) / (samples - 1);
    if (!check_at(t)) return g;
  }
  SampleRng rng(seed);
  for (int i = 0; i < samples; ++i) {
    if (!check_at(rng.uniform(0.0, fn.domain_max))) return g;
  }
  g.verified = true;
  return g;
}

double integrate_reciprocal(const GrowthFunction& g, double T, const QuadratureOptions& opt) {
  require_verified(g, "integrate_reciprocal");
  if (!(T >= 0.0) || T > g.fn.domain_max) {
    throw PreconditionError("integrate_reciprocal: horizon outside domain");
  }
  const auto& eval = g.fn.eval;
  return integrate_adaptive([&eval](double t) { return 1.0 / eval(t); }, 0.0, T, opt);
}

IntegralClassification classify_integral(const GrowthFunction& g, std::vector<double> horizons,
                                         const QuadratureOptions& opt) {
  require_verified(g, "classify_integral");
  if (horizons.empty()) throw PreconditionError("classify_integral: no horizons given");
  for (std::size_t i = 1; i < horizons.size(); ++i) {
    if (!(horizons[i] > horizons[i - 1])) {
      throw PreconditionError("classify_integral: horizons must be strictly increasing");
    }
  }
  for (double T : horizons) {
    if (!(T >= 0.0) || T > g.fn.domain_max) {
      throw PreconditionError("classify_integral: horizon outside domain");
    }
  }

  IntegralClassification out;
  if (g.fn.declared) out.verdict = g.fn.declared->verdict;

  // One cumulative pass serves all horizons.
  const auto& eval = g.fn.eval;
  CumulativeIntegral cum([&eval](double t) { return 1.0 / eval(t); }, 0.0, horizons.back(), opt,
                         g.fn.nonsmooth_points);
  for (double T : horizons) out.horizon_values.emplace_back(T, cum(T));
  if (out.verdict == IntegralVerdict::converges_declared && g.fn.declared->tail_bound) {
    out.tail_estimate = g.fn.declared->tail_bound(horizons.back());
  }
  return out;
}

ScalarFunction1D build_F(const GrowthFunction& g, const QuadratureOptions& opt) {
  require_verified(g, "build_F");

  auto geval = g.fn.eval;
  auto gderiv = g.fn.deriv;
  auto cum = std::make_shared<CumulativeIntegral>(
      [geval](double t) { return 1.0 / geval(t); }, 0.0, g.fn.domain_max, opt,
      g.fn.nonsmooth_points);

  ScalarFunction1D F;
  F.kind = g.fn.nonsmooth_points.empty() ? FunctionKind::preset : FunctionKind::piecewise;
  F.label = "F[" + g.fn.label + "]";
  F.domain_max = g.fn.domain_max;
  F.nonsmooth_points = g.fn.nonsmooth_points;
  F.eval = [cum](double t) { return std::exp((*cum)(t)); };
  F.deriv = [cum, geval](double t) { return std::exp((*cum)(t)) / geval(t); };
  F.deriv2 = [cum, geval, gderiv](double t) {
    const double Fv = std::exp((*cum)(t));
    const double Gv = geval(t);
    return Fv / (Gv * Gv) - Fv * gderiv(t) / (Gv * Gv);
  };
  return F;
}

}  // namespace oylab
