#pragma once

// Error taxonomy. Three families matter to the CLI exit-code contract:
//   - UsageError / ParseError / PreconditionError: the run never got off the
//     ground (bad flags, bad expression, inadmissible inputs) -> exit 1.
//   - PropertyViolation: the run completed and a checked mathematical
//     property failed -> exit 2 (the report is still written first).
//   - everything else derived from NumericsError: an internal numerical
//     routine gave up (quadrature stall, NaN mid-scan) -> exit 1 with a
//     diagnostic, since no verdict can be trusted.

#include <stdexcept>
#include <string>

namespace oylab {

// Bad command line, bad config file, malformed input table.
struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// A documented precondition of a pipeline stage does not hold
// (inadmissible growth function, epsilon above the guard, gate closed).
struct PreconditionError : std::runtime_error {
  explicit PreconditionError(const std::string& what) : std::runtime_error(what) {}
};

// A computed mathematical property failed at a concrete witness point.
struct PropertyViolation : std::runtime_error {
  double witness_t = 0.0;
  double witness_value = 0.0;
  PropertyViolation(const std::string& what, double t, double value)
      : std::runtime_error(what), witness_t(t), witness_value(value) {}
};

// Base for internal numerical failures.
struct NumericsError : std::runtime_error {
  explicit NumericsError(const std::string& what) : std::runtime_error(what) {}
};

// Adaptive quadrature hit its depth or cell budget before reaching the
// requested tolerance. Carries the best-effort value and the subinterval
// that refused to converge, so callers can report where the trouble is.
struct QuadratureError : NumericsError {
  double partial_value = 0.0;
  double worst_lo = 0.0;
  double worst_hi = 0.0;
  double worst_error = 0.0;
  QuadratureError(const std::string& what, double partial, double lo, double hi, double err)
      : NumericsError(what), partial_value(partial), worst_lo(lo), worst_hi(hi), worst_error(err) {}
};

// A scan or solver met a NaN / non-finite value.
struct NonFiniteError : NumericsError {
  double at_t = 0.0;
  NonFiniteError(const std::string& what, double t) : NumericsError(what), at_t(t) {}
};

// The hyperbola spliced in at `start` does not rejoin G/2 before the
// horizon: its pole sits beyond T, so the construction needs a larger T.
struct SpliceEscapeError : PreconditionError {
  double start = 0.0;
  double pole = 0.0;
  SpliceEscapeError(const std::string& what, double start_, double pole_)
      : PreconditionError(what), start(start_), pole(pole_) {}
};

// Two splice intervals overlap without one containing the other; the
// disjointification rule has no answer for partial overlap.
struct NestingError : PreconditionError {
  double first_lo = 0.0, first_hi = 0.0;
  double second_lo = 0.0, second_hi = 0.0;
  NestingError(const std::string& what, double a_lo, double a_hi, double b_lo, double b_hi)
      : PreconditionError(what), first_lo(a_lo), first_hi(a_hi), second_lo(b_lo), second_hi(b_hi) {}
};

// The sweep maximizer landed essentially on the horizon, so the reported
// touching point would be an artifact of truncation rather than geometry.
struct HorizonLimitedError : PreconditionError {
  double argmax = 0.0;
  double horizon = 0.0;
  HorizonLimitedError(const std::string& what, double argmax_, double horizon_)
      : PreconditionError(what), argmax(argmax_), horizon(horizon_) {}
};

}  // namespace oylab
