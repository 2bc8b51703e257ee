#pragma once

// Bracketed scalar root finding and 1-D maximization. Bisection everywhere:
// the functions we chase roots of (sign changes of slope gaps, hyperbola
// rejoin conditions) can have wild derivatives, and bisection's determinism
// is worth more here than a faster local method.

#include <functional>

namespace oylab {

// Root of f in [lo, hi]; requires f(lo) and f(hi) of opposite sign (zero at
// an endpoint counts). Converges to half-interval width below xtol.
double bisect_root(const std::function<double(double)>& f, double lo, double hi,
                   double xtol = 1e-10, int max_iter = 200);

struct Extremum {
  double x = 0.0;
  double value = 0.0;
};

// Maximum of f on [lo, hi] by golden-section search; unimodality on the
// bracket is the caller's responsibility (we hand it a one-grid-cell
// neighborhood of a grid argmax).
Extremum golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                            double xtol = 1e-10);

}  // namespace oylab
