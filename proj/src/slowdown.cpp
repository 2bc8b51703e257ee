#include "oylab/slowdown.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "oylab/errors.hpp"
#include "oylab/root_finding.hpp"

namespace oylab {
namespace {

// G'/2 - (G/2)^2: positive exactly on the fast-growth set A.
double fast_gap(const GrowthFunction& g, double t) {
  const double v = 0.5 * g.fn.eval(t);
  const double d = 0.5 * g.fn.deriv(t);
  const double out = d - v * v;
  if (!std::isfinite(out)) {
    throw NonFiniteError("fast-growth scan: non-finite value", t);
  }
  return out;
}

// k(t) - G(t)/2 for the hyperbola with the given pole; negative on the
// splice interior, zero at start and rejoin.
double rejoin_gap(const GrowthFunction& g, double pole, double t) {
  return 1.0 / (pole - t) - 0.5 * g.fn.eval(t);
}

void require_verified(const GrowthFunction& g, const char* who) {
  if (!g.verified) {
    throw PreconditionError(std::string(who) + ": growth function is not verified admissible");
  }
}

double joint_band(double T) { return std::max(1e-7, 16.0 * std::numeric_limits<double>::epsilon() * T); }

}  // namespace

IntervalSet detect_fast_growth_set(const GrowthFunction& g, double T, const SlowdownOptions& opt) {
  require_verified(g, "detect_fast_growth_set");
  if (!(T > 0.0) || T > g.fn.domain_max) {
    throw PreconditionError("detect_fast_growth_set: horizon outside domain");
  }
  if (opt.grid < 2) throw PreconditionError("detect_fast_growth_set: grid too small");

  IntervalSet out;
  const int n = opt.grid;
  bool inside = false;
  Interval current;
  double prev_t = 0.0;

  for (int i = 0; i <= n; ++i) {
    const double t = T * static_cast<double>(i) / n;
    const bool pos = fast_gap(g, t) > 0.0;
    if (i == 0) {
      if (pos) {
        inside = true;
        current.lo = 0.0;
        current.lo_kind = EndpointKind::boundary;
      }
    } else if (pos && !inside) {
      inside = true;
      current.lo = bisect_root([&g](double x) { return fast_gap(g, x); }, prev_t, t, opt.root_tol);
      current.lo_kind = EndpointKind::root;
    } else if (!pos && inside) {
      inside = false;
      current.hi = bisect_root([&g](double x) { return fast_gap(g, x); }, prev_t, t, opt.root_tol);
      current.hi_kind = EndpointKind::root;
      out.components.push_back(current);
    }
    prev_t = t;
  }
  if (inside) {
    current.hi = T;
    current.hi_kind = EndpointKind::truncation;
    out.components.push_back(current);
  }
  return out;
}

SpliceInterval build_splice(const GrowthFunction& g, double start, double T,
                            const SlowdownOptions& opt) {
  require_verified(g, "build_splice");
  if (!(start >= 0.0) || start >= T) {
    throw PreconditionError("build_splice: start outside [0, T)");
  }

  SpliceInterval sp;
  sp.start = start;
  sp.pole = start + 2.0 / g.fn.eval(start);

  // The rejoin is the first upward crossing of the hyperbola through G/2 in
  // (start, pole). Near the pole the hyperbola dominates any finite G, so a
  // crossing is always found when the horizon reaches that far; running out
  // of horizon first is the escape case.
  const double margin = 1e-13 * std::max(1.0, sp.pole);
  const double scan_hi = std::min(sp.pole - margin, T);
  const int m = std::max(opt.scan_points, 16);
  const double step = (scan_hi - start) / m;

  double prev = start + step * 1e-6;  // just inside; the gap starts at zero
  double prev_gap = rejoin_gap(g, sp.pole, prev);
  double lo = 0.0, hi = 0.0;
  bool bracketed = false;
  for (int i = 1; i <= m; ++i) {
    const double t = start + step * i;
    const double gap = rejoin_gap(g, sp.pole, t);
    if (!std::isfinite(gap)) throw NonFiniteError("build_splice: non-finite rejoin scan", t);
    if (prev_gap <= 0.0 && gap > 0.0) {
      lo = prev;
      hi = t;
      bracketed = true;
      break;
    }
    prev = t;
    prev_gap = gap;
  }
  if (!bracketed) {
    throw SpliceEscapeError(
        "build_splice: hyperbola from " + std::to_string(start) +
            " does not rejoin G/2 before min(pole " + std::to_string(sp.pole) +
            ", horizon " + std::to_string(T) + "); enlarge the horizon",
        start, sp.pole);
  }
  sp.rejoin = bisect_root([&g, &sp](double x) { return rejoin_gap(g, sp.pole, x); }, lo, hi,
                          opt.root_tol);
  return sp;
}

std::vector<SpliceInterval> disjointify(std::vector<SpliceInterval> splices) {
  constexpr double kTol = 1e-12;
  for (std::size_t i = 1; i < splices.size(); ++i) {
    if (splices[i].start < splices[i - 1].start - kTol) {
      throw PreconditionError("disjointify: splices must be sorted by start");
    }
  }
  std::vector<SpliceInterval> kept;
  for (const SpliceInterval& sp : splices) {
    if (kept.empty() || sp.start >= kept.back().rejoin - kTol) {
      kept.push_back(sp);
      continue;
    }
    // Overlap: nested is dropped, partial overlap has no consistent profile.
    if (sp.rejoin <= kept.back().rejoin + kTol) continue;
    throw NestingError("disjointify: splices overlap without nesting", kept.back().start,
                       kept.back().rejoin, sp.start, sp.rejoin);
  }
  return kept;
}

int SlowedGrowth::branch_at(double t) const {
  if (!splices) return 0;
  const auto& v = *splices;
  // Last splice with start <= t.
  std::size_t lo = 0, n = v.size();
  if (n == 0 || t < v[0].start) return 0;
  std::size_t hi = n;
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (v[mid].start <= t) lo = mid; else hi = mid;
  }
  return t <= v[lo].rejoin ? static_cast<int>(lo + 1) : 0;
}

SlowedGrowth build_H(const GrowthFunction& g, double T, const SlowdownOptions& opt) {
  require_verified(g, "build_H");
  if (!(T > 0.0) || T > g.fn.domain_max) {
    throw PreconditionError("build_H: horizon outside domain");
  }

  // Gate: the construction is only meaningful when the reciprocal integral
  // converges, and we insist on a declared verdict rather than guessing from
  // horizon values. force_gate lets exploratory runs through.
  const IntegralVerdict verdict =
      g.fn.declared ? g.fn.declared->verdict : IntegralVerdict::inconclusive_numeric;
  if (!opt.force_gate) {
    if (verdict == IntegralVerdict::diverges_declared) {
      throw PreconditionError(
          "build_H: integral of 1/G diverges (declared); the slowed profile targets a "
          "convergent reciprocal integral (pass force to build anyway)");
    }
    if (verdict != IntegralVerdict::converges_declared) {
      throw PreconditionError(
          "build_H: integral of 1/G has no convergence declaration (pass force to build "
          "from horizon data alone)");
    }
  }

  SlowedGrowth s;
  s.growth = g;
  s.horizon = T;
  s.fast_set = detect_fast_growth_set(g, T, opt);

  std::vector<SpliceInterval> raw;
  for (const Interval& comp : s.fast_set.components) {
    SpliceInterval sp = build_splice(g, comp.lo, T, opt);
    sp.fast_end = comp.hi;
    raw.push_back(sp);
  }
  std::vector<SpliceInterval> kept = disjointify(std::move(raw));
  s.dropped_nested = s.fast_set.components.size() - kept.size();

  // Construction postconditions, checked with root-refinement slack.
  for (const SpliceInterval& sp : kept) {
    const double slack = 1e-8 * std::max(1.0, sp.pole);
    if (!(sp.start < sp.fast_end + slack && sp.fast_end < sp.rejoin + slack &&
          sp.rejoin < sp.pole)) {
      throw PropertyViolation("build_H: splice ordering start < fast_end < rejoin < pole failed",
                              sp.start, sp.rejoin);
    }
    const double residual = rejoin_gap(g, sp.pole, sp.rejoin);
    if (std::fabs(residual) > 1e-6 * std::max(1.0, g.fn.eval(sp.rejoin))) {
      throw PropertyViolation("build_H: rejoin point does not sit on G/2", sp.rejoin, residual);
    }
  }

  auto splices = std::make_shared<const std::vector<SpliceInterval>>(std::move(kept));
  s.splices = splices;

  const auto geval = g.fn.eval;
  const auto gderiv = g.fn.deriv;
  const auto gderiv2 = g.fn.deriv2;

  // Branch dispatch shared by the three closures: the splice covering t, or
  // none. Splices are disjoint and sorted, so one binary search suffices.
  auto find = [splices](double t) -> const SpliceInterval* {
    const auto& v = *splices;
    if (v.empty() || t < v[0].start) return nullptr;
    std::size_t lo = 0, hi = v.size();
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      if (v[mid].start <= t) lo = mid; else hi = mid;
    }
    return t <= v[lo].rejoin ? &v[lo] : nullptr;
  };

  ScalarFunction1D H;
  H.kind = FunctionKind::piecewise;
  H.label = "H[" + g.fn.label + "]";
  H.domain_max = T;
  for (const SpliceInterval& sp : *splices) {
    H.nonsmooth_points.push_back(sp.start);
    H.nonsmooth_points.push_back(sp.rejoin);
  }
  H.eval = [find, geval](double t) {
    if (const SpliceInterval* sp = find(t)) return 1.0 / (sp->pole - t);
    return 0.5 * geval(t);
  };
  H.deriv = [find, gderiv](double t) {
    if (const SpliceInterval* sp = find(t)) {
      const double k = 1.0 / (sp->pole - t);
      return k * k;
    }
    return 0.5 * gderiv(t);
  };
  H.deriv2 = [find, gderiv2](double t) {
    if (const SpliceInterval* sp = find(t)) {
      const double k = 1.0 / (sp->pole - t);
      return 2.0 * k * k * k;
    }
    return 0.5 * gderiv2(t);
  };
  s.fn = std::move(H);
  return s;
}

ReciprocalIntegral integral_reciprocal_H(const SlowedGrowth& s, double T,
                                         const QuadratureOptions& opt) {
  if (!(T > 0.0) || T > s.horizon + 1e-12) {
    throw PreconditionError("integral_reciprocal_H: T outside the built horizon");
  }
  const auto& g = s.growth;

  ReciprocalIntegral out;

  // Route one: straight quadrature of 1/H, segmented at the joints so every
  // panel sees a smooth integrand.
  std::vector<double> cuts{0.0, T};
  for (double j : s.fn.nonsmooth_points) {
    if (j > 0.0 && j < T) cuts.push_back(j);
  }
  std::sort(cuts.begin(), cuts.end());
  const auto heval = s.fn.eval;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    out.value_on_horizon += integrate_adaptive(
        [&heval](double t) { return 1.0 / heval(t); }, cuts[i], cuts[i + 1], opt);
  }

  // Route two: 2/G on base segments by quadrature, splices in closed form
  // (the reciprocal hyperbola integrates to a difference of squares).
  const auto geval = g.fn.eval;
  double pos = 0.0;
  for (const SpliceInterval& sp : *s.splices) {
    if (sp.start >= T) break;
    out.closed_form_on_horizon += integrate_adaptive(
        [&geval](double t) { return 2.0 / geval(t); }, pos, std::min(sp.start, T), opt);
    const double v_eff = std::min(sp.rejoin, T);
    const double w0 = sp.pole - sp.start;
    const double w1 = sp.pole - v_eff;
    out.closed_form_on_horizon += 0.5 * (w0 * w0 - w1 * w1);
    pos = v_eff;
  }
  if (pos < T) {
    out.closed_form_on_horizon += integrate_adaptive(
        [&geval](double t) { return 2.0 / geval(t); }, pos, T, opt);
  }

  // Telescoping certificate over the full built horizon.
  auto& tel = out.telescoping;
  if (!s.splices->empty()) {
    const double w1 = 2.0 / geval(s.splices->front().start);
    tel.bound_rhs = w1 * w1;
    double acc = 0.0;
    for (const SpliceInterval& sp : *s.splices) {
      const double a = sp.pole - sp.start;
      const double b = sp.pole - sp.rejoin;
      const double term = a * a - b * b;
      tel.terms.push_back(term);
      acc += term;
      if (0.5 * acc > tel.bound_rhs + 1e-9) tel.prefix_bounds_ok = false;
    }
    tel.splice_sum = 0.5 * acc;
    for (const SpliceInterval& sp : *s.splices) {
      tel.splice_sum_quadrature += integrate_adaptive(
          [&heval](double t) { return 1.0 / heval(t); }, sp.start, sp.rejoin, opt);
    }
  }

  if (g.fn.declared && g.fn.declared->verdict == IntegralVerdict::converges_declared &&
      g.fn.declared->tail_bound) {
    out.full_bound = out.value_on_horizon + 2.0 * g.fn.declared->tail_bound(T);
  }
  return out;
}

LemmaScan scan_lemma_properties(const SlowedGrowth& s, int grid) {
  if (grid < 2) throw PreconditionError("scan_lemma_properties: grid too small");
  const double T = s.horizon;
  const double band = joint_band(T);

  LemmaScan scan;
  scan.floor_margin = scan.cap_margin = scan.slope_margin = scan.slope_square_margin =
      std::numeric_limits<double>::infinity();

  double prev_h = -std::numeric_limits<double>::infinity();
  bool prev_near = false;
  for (int i = 0; i <= grid; ++i) {
    const double t = T * static_cast<double>(i) / grid;

    bool near_joint = false;
    for (double j : s.fn.nonsmooth_points) {
      if (std::fabs(t - j) <= band) near_joint = true;
    }

    const double h = s.fn.eval(t);
    // Monotonicity uses every grid point. Within a branch H is exactly
    // nondecreasing, so the slack is roundoff-sized; pairs adjacent to a
    // joint may dip by the rejoin root tolerance times the local slope
    // (bounded by H^2), so they get the continuity-scale allowance.
    const double mono_slack =
        (near_joint || prev_near) ? 4.0 * band * std::max(1.0, h * h) + 1e-9 : 1e-12;
    if (h < prev_h - mono_slack) scan.monotone_ok = false;
    prev_h = h;
    prev_near = near_joint;

    if (near_joint) continue;

    const double gv = 0.5 * s.growth.fn.eval(t);
    const double hd = s.fn.deriv(t);

    const double floor_m = h - 0.5;
    if (floor_m < scan.floor_margin) {
      scan.floor_margin = floor_m;
      scan.floor_t = t;
    }
    const double cap_m = gv - h;
    if (cap_m < scan.cap_margin) {
      scan.cap_margin = cap_m;
      scan.cap_t = t;
    }
    if (hd < scan.slope_margin) {
      scan.slope_margin = hd;
      scan.slope_t = t;
    }
    const double sq_m = h * h - hd;
    if (sq_m < scan.slope_square_margin) {
      scan.slope_square_margin = sq_m;
      scan.slope_square_t = t;
    }
  }
  scan.floor_ok = scan.floor_margin >= -1e-12;
  scan.cap_ok = scan.cap_margin >= -1e-9 * std::max(1.0, 0.5 * s.growth.fn.eval(scan.cap_t));
  scan.slope_nonneg_ok = scan.slope_margin >= -1e-12;
  {
    const double h = s.fn.eval(scan.slope_square_t);
    scan.slope_square_ok = scan.slope_square_margin >= -1e-9 * std::max(1.0, h * h);
  }

  for (double j : s.fn.nonsmooth_points) {
    const double d = band;
    const double left = (j - d >= 0.0) ? s.fn.eval(j - d) : s.fn.eval(0.0);
    const double right = (j + d <= T) ? s.fn.eval(j + d) : s.fn.eval(T);
    const double jump = std::fabs(right - left);
    if (jump > scan.continuity_worst_jump) scan.continuity_worst_jump = jump;
    // Allowed drift: local slope (bounded by H^2) over the probe gap, padded.
    const double hj = s.fn.eval(j);
    const double allowed = 4.0 * d * std::max(1.0, hj * hj) + 1e-9;
    if (jump > allowed) scan.continuity_ok = false;
  }
  return scan;
}

}  // namespace oylab
