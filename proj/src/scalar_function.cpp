#include "oylab/scalar_function.hpp"

#include <cmath>

#include "oylab/errors.hpp"

namespace oylab {

double central_difference(const std::function<double(double)>& f, double t, double h) {
  return (f(t + h) - f(t - h)) / (2.0 * h);
}

ConsistencyReport check_derivative_consistency(const ScalarFunction1D& fn, int samples,
                                               double rel_tol, std::uint64_t seed) {
  if (!(fn.domain_max > 0.0)) {
    throw PreconditionError("check_derivative_consistency: empty domain");
  }
  SampleRng rng(seed);
  ConsistencyReport rep;

  // Step scaled to the abscissa; cbrt(eps)-sized steps balance truncation
  // against cancellation for a second-order difference.
  const auto step_at = [](double t) { return 6e-6 * std::max(1.0, std::fabs(t)); };

  for (int i = 0; i < samples; ++i) {
    const double hmax = step_at(fn.domain_max);
    double t = rng.uniform(hmax, fn.domain_max - hmax);
    const double h = step_at(t);

    bool near_joint = false;
    for (double j : fn.nonsmooth_points) {
      if (std::fabs(t - j) <= 4.0 * h) near_joint = true;
    }
    if (near_joint) continue;

    const double d = fn.deriv(t);
    const double fd = central_difference(fn.eval, t, h);
    const double e1 = std::fabs(fd - d) / std::max(1.0, std::fabs(d));
    if (e1 > rep.worst_rel_error) {
      rep.worst_rel_error = e1;
      rep.worst_t = t;
    }

    const double d2 = fn.deriv2(t);
    const double fd2 = central_difference(fn.deriv, t, h);
    const double e2 = std::fabs(fd2 - d2) / std::max(1.0, std::fabs(d2));
    if (e2 > rep.worst2_rel_error) {
      rep.worst2_rel_error = e2;
      rep.worst2_t = t;
    }
  }
  rep.ok = rep.worst_rel_error <= rel_tol && rep.worst2_rel_error <= rel_tol;
  return rep;
}

}  // namespace oylab
