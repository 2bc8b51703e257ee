#pragma once

// Scalar non-autonomous initial value problems with an adaptive embedded
// Runge-Kutta 5(4) pair (Dormand-Prince). The trace keeps every accepted
// step; finite-time blow-up is an expected outcome for Riccati equations
// and is reported as data, not as an exception.

#include <functional>
#include <optional>
#include <vector>

namespace oylab {

using OdeRhs = std::function<double(double, double)>;

struct OdeOptions {
  double tol = 1e-9;        // used as both absolute and relative tolerance
  double max_step = 0.1;
  double blow_up_threshold = 1e12;
};

struct OdeTrace {
  std::vector<double> t;
  std::vector<double> y;
  bool blow_up = false;                 // threshold crossed or step underflow
  std::optional<double> blow_up_t;      // last trusted time when flagged
};

OdeTrace integrate_dopri45(const OdeRhs& rhs, double t0, double y0, double t_end,
                           const OdeOptions& opt = {});

}  // namespace oylab
