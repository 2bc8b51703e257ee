#pragma once

// Adaptive quadrature on finite intervals. One Gauss-Kronrod 7-15 panel per
// cell, cells bisected until the Kronrod error estimate meets the local
// tolerance share. This is the only integrator in the library; everything
// that needs an antiderivative (F, h, tail checks) is built on it.

#include <functional>
#include <vector>

namespace oylab {

using Fn1D = std::function<double(double)>;

struct PanelResult {
  double value = 0.0;
  double error = 0.0;   // Kronrod-vs-Gauss based estimate, not a bound
  double resabs = 0.0;  // panel integral of |f|, for relative-floor checks
};

// Single 15-point Kronrod panel with embedded 7-point Gauss rule.
PanelResult gauss_kronrod_15(const Fn1D& f, double lo, double hi);

struct QuadratureOptions {
  double abs_tol = 1e-10;
  int max_depth = 60;
  // Safety valve: total number of cells processed before giving up.
  std::size_t max_cells = 1u << 20;
};

// Integral of f over [lo, hi]. Throws QuadratureError when the budget is
// exhausted, carrying the best-effort sum and the worst cell.
double integrate_adaptive(const Fn1D& f, double lo, double hi,
                          const QuadratureOptions& opt = {});

// Prefix integral t -> integral of f over [lo, t], precomputed once.
//
// The constructor adaptively subdivides [lo, hi] until every cell meets its
// tolerance share, then stores cell boundaries and prefix sums. Evaluation
// is a binary search plus one Kronrod panel over the partial cell, so a
// 1e5-point sweep costs 1e5 panels instead of 1e5 full adaptive runs.
// Seed knots force cell boundaries at known kinks of f.
class CumulativeIntegral {
 public:
  CumulativeIntegral(Fn1D f, double lo, double hi,
                     const QuadratureOptions& opt = {},
                     const std::vector<double>& seed_knots = {});

  // Prefix value at t; t must lie in [lo, hi] up to a small slack.
  double operator()(double t) const;

  double total() const { return prefix_.back(); }
  double lo() const { return knots_.front(); }
  double hi() const { return knots_.back(); }

 private:
  Fn1D f_;
  std::vector<double> knots_;   // cell boundaries, ascending
  std::vector<double> prefix_;  // prefix_[i] = integral over [lo, knots_[i]]
};

}  // namespace oylab
