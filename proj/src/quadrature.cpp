#include "oylab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "oylab/errors.hpp"

namespace oylab {
namespace {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
// Nodes/weights are the classical QUADPACK constants.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
// Gauss weights attach to the odd-indexed Kronrod nodes (and the center).
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

// Acceptance below this relative level counts as machine-limited: asking an
// absolute tolerance finer than 1e-14 of integral-of-|f| is not meaningful.
constexpr double kRelFloor = 1e-14;

struct Cell {
  double lo, hi;
  int depth;
};

}  // namespace

PanelResult gauss_kronrod_15(const Fn1D& f, double lo, double hi) {
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);

  double fv[15];
  fv[7] = f(c);
  for (int j = 0; j < 7; ++j) {
    fv[j] = f(c - h * kXgk[j]);
    fv[14 - j] = f(c + h * kXgk[j]);
  }

  double resk = kWgk[7] * fv[7];
  double resabs = kWgk[7] * std::fabs(fv[7]);
  for (int j = 0; j < 7; ++j) {
    resk += kWgk[j] * (fv[j] + fv[14 - j]);
    resabs += kWgk[j] * (std::fabs(fv[j]) + std::fabs(fv[14 - j]));
  }
  double resg = kWg[3] * fv[7];
  for (int j = 0; j < 3; ++j) {
    resg += kWg[j] * (fv[2 * j + 1] + fv[13 - 2 * j]);
  }

  // QUADPACK-style error estimate: scale the raw Kronrod/Gauss difference by
  // the panel's deviation-from-mean mass so it stays honest near spikes.
  const double reskh = 0.5 * resk;
  double resasc = kWgk[7] * std::fabs(fv[7] - reskh);
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::fabs(fv[j] - reskh) + std::fabs(fv[14 - j] - reskh));
  }

  PanelResult out;
  out.value = resk * h;
  out.resabs = resabs * std::fabs(h);
  const double raw = std::fabs(resk - resg) * std::fabs(h);
  const double asc = resasc * std::fabs(h);
  if (asc != 0.0 && raw != 0.0) {
    out.error = asc * std::min(1.0, std::pow(200.0 * raw / asc, 1.5));
  } else {
    out.error = raw;
  }
  return out;
}

double integrate_adaptive(const Fn1D& f, double lo, double hi, const QuadratureOptions& opt) {
  if (!(hi >= lo)) throw PreconditionError("integrate_adaptive: reversed interval");
  if (hi == lo) return 0.0;

  const double width = hi - lo;
  std::vector<Cell> stack;
  stack.push_back({lo, hi, 0});

  double sum = 0.0;
  std::size_t cells = 0;
  bool budget_exhausted = false;
  bool any_failed = false;
  double worst_lo = lo, worst_hi = hi, worst_err = 0.0;

  while (!stack.empty()) {
    const Cell cell = stack.back();
    stack.pop_back();
    ++cells;
    if (cells > opt.max_cells) budget_exhausted = true;

    const PanelResult p = gauss_kronrod_15(f, cell.lo, cell.hi);
    if (!std::isfinite(p.value)) {
      throw NonFiniteError("integrate_adaptive: non-finite integrand panel",
                           0.5 * (cell.lo + cell.hi));
    }
    const double share = opt.abs_tol * ((cell.hi - cell.lo) / width);
    const bool ok = p.error <= share || p.error <= kRelFloor * p.resabs;
    if (ok) {
      sum += p.value;
      continue;
    }
    if (cell.depth >= opt.max_depth || budget_exhausted) {
      sum += p.value;
      any_failed = true;
      if (p.error > worst_err) {
        worst_err = p.error;
        worst_lo = cell.lo;
        worst_hi = cell.hi;
      }
      continue;
    }
    const double mid = 0.5 * (cell.lo + cell.hi);
    stack.push_back({mid, cell.hi, cell.depth + 1});
    stack.push_back({cell.lo, mid, cell.depth + 1});
  }

  if (any_failed) {
    throw QuadratureError("integrate_adaptive: tolerance not reached inside subdivision budget",
                          sum, worst_lo, worst_hi, worst_err);
  }
  return sum;
}

CumulativeIntegral::CumulativeIntegral(Fn1D f, double lo, double hi, const QuadratureOptions& opt,
                                       const std::vector<double>& seed_knots)
    : f_(std::move(f)) {
  if (!(hi > lo)) throw PreconditionError("CumulativeIntegral: empty interval");

  // Initial cell boundaries: domain ends plus any interior seed knots
  // (kinks of f), so no panel ever straddles a known non-smooth point.
  std::vector<double> bounds{lo, hi};
  for (double k : seed_knots) {
    if (k > lo && k < hi) bounds.push_back(k);
  }
  std::sort(bounds.begin(), bounds.end());
  bounds.erase(std::unique(bounds.begin(), bounds.end()), bounds.end());

  const double width = hi - lo;
  std::size_t cells = 0;
  bool budget_exhausted = false;
  bool any_failed = false;
  double worst_lo = lo, worst_hi = hi, worst_err = 0.0;
  double sum = 0.0;

  knots_.push_back(lo);
  prefix_.push_back(0.0);

  // Depth-first, left child first, so accepted leaves come out in ascending
  // order and the prefix sums can be accumulated directly.
  std::vector<Cell> stack;
  for (std::size_t i = bounds.size() - 1; i >= 1; --i) {
    stack.push_back({bounds[i - 1], bounds[i], 0});
  }
  while (!stack.empty()) {
    const Cell cell = stack.back();
    stack.pop_back();
    ++cells;
    if (cells > opt.max_cells) budget_exhausted = true;

    const PanelResult p = gauss_kronrod_15(f_, cell.lo, cell.hi);
    if (!std::isfinite(p.value)) {
      throw NonFiniteError("CumulativeIntegral: non-finite integrand panel",
                           0.5 * (cell.lo + cell.hi));
    }
    const double share = opt.abs_tol * ((cell.hi - cell.lo) / width);
    const bool ok = p.error <= share || p.error <= kRelFloor * p.resabs;
    if (!ok && cell.depth < opt.max_depth && !budget_exhausted) {
      const double mid = 0.5 * (cell.lo + cell.hi);
      stack.push_back({mid, cell.hi, cell.depth + 1});
      stack.push_back({cell.lo, mid, cell.depth + 1});
      continue;
    }
    if (!ok) {
      any_failed = true;
      if (p.error > worst_err) {
        worst_err = p.error;
        worst_lo = cell.lo;
        worst_hi = cell.hi;
      }
    }
    sum += p.value;
    knots_.push_back(cell.hi);
    prefix_.push_back(sum);
  }

  if (any_failed) {
    throw QuadratureError("CumulativeIntegral: tolerance not reached inside subdivision budget",
                          sum, worst_lo, worst_hi, worst_err);
  }
}

double CumulativeIntegral::operator()(double t) const {
  const double lo = knots_.front();
  const double hi = knots_.back();
  const double slack = 1e-9 * std::max(1.0, hi - lo);
  if (t < lo - slack || t > hi + slack) {
    throw PreconditionError("CumulativeIntegral: evaluation outside domain");
  }
  t = std::clamp(t, lo, hi);

  auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
  std::size_t idx = static_cast<std::size_t>(it - knots_.begin());
  idx = std::min(std::max<std::size_t>(idx, 1), knots_.size() - 1) - 1;

  if (t == knots_[idx]) return prefix_[idx];
  return prefix_[idx] + gauss_kronrod_15(f_, knots_[idx], t).value;
}

}  // namespace oylab
