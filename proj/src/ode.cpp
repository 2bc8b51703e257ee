#include "oylab/ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "oylab/errors.hpp"

namespace oylab {
namespace {

// Dormand-Prince 5(4) tableau. The 5th-order weights equal the last stage's
// coefficients (first-same-as-last), so k7 of an accepted step is k1 of the
// next one. kE holds the difference between the 5th and 4th order weights.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA2[1] = {1.0 / 5};
constexpr double kA3[2] = {3.0 / 40, 9.0 / 40};
constexpr double kA4[3] = {44.0 / 45, -56.0 / 15, 32.0 / 9};
constexpr double kA5[4] = {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729};
constexpr double kA6[5] = {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176,
                           -5103.0 / 18656};
constexpr double kB5[7] = {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784,
                           11.0 / 84, 0.0};
constexpr double kE[7] = {71.0 / 57600, 0.0, -71.0 / 16695, 71.0 / 1920, -17253.0 / 339200,
                          22.0 / 525, -1.0 / 40};

}  // namespace

OdeTrace integrate_dopri45(const OdeRhs& rhs, double t0, double y0, double t_end,
                           const OdeOptions& opt) {
  if (!(t_end > t0)) throw PreconditionError("integrate_dopri45: t_end must exceed t0");
  if (!(opt.tol > 0.0) || !(opt.max_step > 0.0)) {
    throw PreconditionError("integrate_dopri45: tol and max_step must be positive");
  }

  OdeTrace trace;
  trace.t.push_back(t0);
  trace.y.push_back(y0);

  double t = t0;
  double y = y0;
  double h = std::min(opt.max_step, t_end - t0);
  double k1 = rhs(t, y);

  const double eps = std::numeric_limits<double>::epsilon();
  while (t < t_end) {
    const double hmin = std::max(1e-13, 4.0 * eps * std::max(std::fabs(t), 1.0));
    if (h < hmin) {
      // The controller cannot make progress at double precision; for a
      // Riccati trace this is the signature of a pole.
      trace.blow_up = true;
      trace.blow_up_t = t;
      return trace;
    }
    h = std::min(h, t_end - t);

    const double k2 = rhs(t + kC[1] * h, y + h * kA2[0] * k1);
    const double k3 = rhs(t + kC[2] * h, y + h * (kA3[0] * k1 + kA3[1] * k2));
    const double k4 = rhs(t + kC[3] * h, y + h * (kA4[0] * k1 + kA4[1] * k2 + kA4[2] * k3));
    const double k5 = rhs(t + kC[4] * h,
                          y + h * (kA5[0] * k1 + kA5[1] * k2 + kA5[2] * k3 + kA5[3] * k4));
    const double k6 =
        rhs(t + kC[5] * h,
            y + h * (kA6[0] * k1 + kA6[1] * k2 + kA6[2] * k3 + kA6[3] * k4 + kA6[4] * k5));
    const double y5 =
        y + h * (kB5[0] * k1 + kB5[2] * k3 + kB5[3] * k4 + kB5[4] * k5 + kB5[5] * k6);
    const double k7 = rhs(t + h, y5);

    const double err_raw =
        h * (kE[0] * k1 + kE[2] * k3 + kE[3] * k4 + kE[4] * k5 + kE[5] * k6 + kE[6] * k7);

    bool finite = std::isfinite(y5) && std::isfinite(err_raw);
    double err_norm = std::numeric_limits<double>::infinity();
    if (finite) {
      const double sc = opt.tol + opt.tol * std::max(std::fabs(y), std::fabs(y5));
      err_norm = std::fabs(err_raw) / sc;
    }

    if (err_norm <= 1.0) {
      t += h;
      y = y5;
      k1 = k7;
      trace.t.push_back(t);
      trace.y.push_back(y);
      if (std::fabs(y) > opt.blow_up_threshold) {
        trace.blow_up = true;
        trace.blow_up_t = t;
        return trace;
      }
      const double fac = std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
      h = std::min(h * fac, opt.max_step);
    } else if (finite) {
      h *= std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 1.0);
    } else {
      h *= 0.25;
    }
  }
  return trace;
}

}  // namespace oylab
