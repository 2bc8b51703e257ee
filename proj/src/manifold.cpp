#include "oylab/manifold.hpp"

#include <cmath>
#include <memory>
#include <string>

#include "oylab/errors.hpp"

namespace oylab {
namespace {

void check_dim(int n, const char* who) {
  if (n < 2) throw PreconditionError(std::string(who) + ": dimension must be at least 2");
}

void check_pole(const ScalarFunction1D& f, const char* who) {
  const double f0 = f.eval(0.0);
  const double df0 = f.deriv(0.0);
  if (std::fabs(f0) > 1e-8) {
    throw PreconditionError(std::string(who) + ": warping must vanish at the pole");
  }
  if (std::fabs(df0 - 1.0) > 1e-8) {
    throw PreconditionError(std::string(who) + ": warping must have unit slope at the pole");
  }
  for (int i = 1; i <= 512; ++i) {
    const double t = f.domain_max * static_cast<double>(i) / 512;
    if (!(f.eval(t) > 0.0)) {
      throw PreconditionError(std::string(who) + ": warping must stay positive away from the pole");
    }
  }
}

}  // namespace

ModelManifold make_model_manifold(int n, const ScalarFunction1D& f) {
  check_dim(n, "make_model_manifold");
  check_pole(f, "make_model_manifold");

  ModelManifold m;
  m.dim = n;
  m.warping = f;
  const auto fe = f.eval;
  const auto fd = f.deriv;
  const auto fd2 = f.deriv2;
  m.radial_log_deriv = [fe, fd](double t) { return fd(t) / fe(t); };
  m.radial_log_deriv_prime = [fe, fd, fd2](double t) {
    const double ld = fd(t) / fe(t);
    return fd2(t) / fe(t) - ld * ld;
  };
  m.log_warping = [fe](double t) { return std::log(fe(t)); };
  return m;
}

ModelManifold build_counterexample_manifold(const GrowthFunction& g, int n,
                                            const QuadratureOptions& opt) {
  check_dim(n, "build_counterexample_manifold");
  if (!g.verified) {
    throw PreconditionError("build_counterexample_manifold: growth function is not verified");
  }

  const auto geval = g.fn.eval;
  const auto gderiv = g.fn.deriv;
  auto cum = std::make_shared<CumulativeIntegral>(geval, 0.0, g.fn.domain_max, opt,
                                                  g.fn.nonsmooth_points);

  ScalarFunction1D f;
  f.kind = FunctionKind::piecewise;
  f.label = "t*exp(int G)[" + g.fn.label + "]";
  f.domain_max = g.fn.domain_max;
  f.nonsmooth_points = g.fn.nonsmooth_points;
  // Pointwise values overflow once the accumulated integral of G passes
  // ~709; fine for display near the pole, unusable for geometry at scale.
  f.eval = [cum](double t) { return t * std::exp((*cum)(t)); };
  f.deriv = [cum, geval](double t) { return std::exp((*cum)(t)) * (1.0 + t * geval(t)); };
  f.deriv2 = [cum, geval, gderiv](double t) {
    const double G = geval(t);
    return std::exp((*cum)(t)) * (2.0 * G + t * G * G + t * gderiv(t));
  };

  ModelManifold m;
  m.dim = n;
  m.warping = f;
  m.radial_log_deriv = [geval](double t) { return 1.0 / t + geval(t); };
  m.radial_log_deriv_prime = [gderiv](double t) { return -1.0 / (t * t) + gderiv(t); };
  m.log_warping = [cum](double t) { return std::log(t) + (*cum)(t); };

  // Postcondition: the distance Laplacian clears G strictly on the domain.
  for (int i = 1; i <= 1024; ++i) {
    const double t = f.domain_max * static_cast<double>(i) / 1024;
    const double margin = delta_r(m, t) - geval(t);
    if (!(margin > 0.0)) {
      throw PropertyViolation("build_counterexample_manifold: delta_r does not exceed G", t,
                              margin);
    }
  }
  return m;
}

double delta_r(const ModelManifold& m, double t) {
  if (!(t > 0.0)) throw PreconditionError("delta_r: t must be strictly positive");
  return (m.dim - 1) * m.radial_log_deriv(t);
}

double ricci_radial(const ModelManifold& m, double t) {
  if (!(t > 0.0)) throw PreconditionError("ricci_radial: t must be strictly positive");
  const double ld = m.radial_log_deriv(t);
  return -(m.dim - 1) * (m.radial_log_deriv_prime(t) + ld * ld);
}

double radial_laplacian(const ModelManifold& m, const ScalarFunction1D& u, double t) {
  if (!(t > 0.0)) throw PreconditionError("radial_laplacian: t must be strictly positive");
  return u.deriv2(t) + delta_r(m, t) * u.deriv(t);
}

ScalarFunction1D neg_growth_squared(const GrowthFunction& g) {
  if (!g.verified) throw PreconditionError("neg_growth_squared: growth function is not verified");
  const auto ge = g.fn.eval;
  const auto gd = g.fn.deriv;
  const auto gd2 = g.fn.deriv2;

  ScalarFunction1D R;
  R.kind = g.fn.kind;
  R.label = "-(" + g.fn.label + ")^2";
  R.domain_max = g.fn.domain_max;
  R.nonsmooth_points = g.fn.nonsmooth_points;
  R.eval = [ge](double t) {
    const double v = ge(t);
    return -v * v;
  };
  R.deriv = [ge, gd](double t) { return -2.0 * ge(t) * gd(t); };
  R.deriv2 = [ge, gd, gd2](double t) {
    const double d = gd(t);
    return -2.0 * (d * d + ge(t) * gd2(t));
  };
  return R;
}

ScalarFunction1D ricci_function(const ModelManifold& m, double t_min) {
  // Capture by value: the returned object must outlive the manifold handle.
  const ModelManifold mm = m;

  ScalarFunction1D R;
  R.kind = FunctionKind::piecewise;
  R.label = "ricci_radial";
  R.domain_max = m.warping.domain_max;
  R.nonsmooth_points = m.warping.nonsmooth_points;
  R.eval = [mm, t_min](double t) { return ricci_radial(mm, std::max(t, t_min)); };
  // Derivative closures exist only to satisfy the function contract; the
  // comparison integrator samples eval alone.
  R.deriv = [mm, t_min](double t) {
    t = std::max(t, 2.0 * t_min);
    const double h = 1e-6 * std::max(1.0, std::fabs(t));
    return (ricci_radial(mm, t + h) - ricci_radial(mm, t - h)) / (2.0 * h);
  };
  R.deriv2 = [mm, t_min](double t) {
    t = std::max(t, 2.0 * t_min);
    const double h = 5e-4 * std::max(1.0, std::fabs(t));
    return (ricci_radial(mm, t + h) - 2.0 * ricci_radial(mm, t) + ricci_radial(mm, t - h)) /
           (h * h);
  };
  return R;
}

RiccatiTrace riccati_integrate(const ScalarFunction1D& R_lower, int n, double t0, double m0,
                               double T, const OdeOptions& opt) {
  check_dim(n, "riccati_integrate");
  if (!(t0 >= 0.0) || !(T > t0)) {
    throw PreconditionError("riccati_integrate: need 0 <= t0 < T");
  }
  if (T > R_lower.domain_max) {
    throw PreconditionError("riccati_integrate: horizon outside the curvature domain");
  }

  const auto Reval = R_lower.eval;
  const double nm1 = static_cast<double>(n - 1);
  const OdeTrace ode = integrate_dopri45(
      [&Reval, nm1](double t, double m) { return -Reval(t) - m * m / nm1; }, t0, m0, T, opt);

  RiccatiTrace trace;
  trace.t = ode.t;
  trace.m = ode.y;
  trace.R.reserve(trace.t.size());
  for (double t : trace.t) trace.R.push_back(Reval(t));
  trace.blow_up = ode.blow_up;
  trace.blow_up_t = ode.blow_up_t;
  return trace;
}

ComparisonBoundReport check_comparison_bound(const RiccatiTrace& trace, const GrowthFunction& g,
                                             int n) {
  check_dim(n, "check_comparison_bound");
  if (!g.verified) {
    throw PreconditionError("check_comparison_bound: growth function is not verified");
  }
  if (trace.t.empty()) throw PreconditionError("check_comparison_bound: empty trace");

  ComparisonBoundReport rep;
  rep.factor = std::sqrt(static_cast<double>(n - 1)) + 1.0;

  // Scan from the end for the last violating sample; everything after it is
  // the certified regime.
  std::size_t last_violation = trace.t.size();  // sentinel: none
  for (std::size_t i = trace.t.size(); i-- > 0;) {
    const double bound = rep.factor * g.fn.eval(trace.t[i]);
    if (!(trace.m[i] < bound)) {
      last_violation = i;
      break;
    }
  }
  if (last_violation == trace.t.size()) {
    rep.holds_everywhere = true;
    rep.holds_from = trace.t.front();
  } else if (last_violation + 1 < trace.t.size()) {
    rep.holds_from = trace.t[last_violation + 1];
  } else {
    rep.witness_t = trace.t[last_violation];
    rep.witness_m = trace.m[last_violation];
    rep.witness_bound = rep.factor * g.fn.eval(trace.t[last_violation]);
  }
  return rep;
}

}  // namespace oylab
