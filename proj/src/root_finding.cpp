#include "oylab/root_finding.hpp"

#include <cmath>

#include "oylab/errors.hpp"

namespace oylab {

double bisect_root(const std::function<double(double)>& f, double lo, double hi, double xtol,
                   int max_iter) {
  if (!(hi >= lo)) throw PreconditionError("bisect_root: reversed bracket");
  double flo = f(lo);
  double fhi = f(hi);
  if (!std::isfinite(flo)) throw NonFiniteError("bisect_root: non-finite at bracket end", lo);
  if (!std::isfinite(fhi)) throw NonFiniteError("bisect_root: non-finite at bracket end", hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw PreconditionError("bisect_root: no sign change on bracket");
  }
  for (int i = 0; i < max_iter && (hi - lo) > xtol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (!std::isfinite(fmid)) throw NonFiniteError("bisect_root: non-finite at midpoint", mid);
    if (fmid == 0.0) return mid;
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

Extremum golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                            double xtol) {
  if (!(hi >= lo)) throw PreconditionError("golden_section_max: reversed bracket");
  constexpr double kInvPhi = 0.6180339887498948482;  // (sqrt(5)-1)/2
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while ((b - a) > xtol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    }
  }
  const double xm = 0.5 * (a + b);
  return {xm, f(xm)};
}

}  // namespace oylab
