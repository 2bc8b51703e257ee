#include "oylab/principle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "oylab/errors.hpp"
#include "oylab/root_finding.hpp"

namespace oylab {
namespace {

struct SweepContext {
  double T = 0.0;
  double L = 0.0;
  double guard_bound = 0.0;
  double sup_g = 0.0;
  double argmax_t = 0.0;
  bool attained = false;
  std::vector<double> grid_t;
  std::vector<double> grid_g;
  std::vector<double> grid_F;
  ScalarFunction1D F;
};

double joint_exclusion_band(double T) {
  return std::max(1e-7, 16.0 * std::numeric_limits<double>::epsilon() * T);
}

bool near_any_joint(double t, const std::vector<double>& joints, double band) {
  for (double j : joints) {
    if (std::fabs(t - j) <= band) return true;
  }
  return false;
}

SweepContext build_sweep_context(const ModelManifold& m, const ScalarFunction1D& g, double L,
                                 const GrowthFunction& G, double T, const SweepOptions& opt) {
  if (!G.verified) {
    throw PreconditionError("sweep: growth function is not verified admissible");
  }
  if (!(T > 1.0)) {
    throw PreconditionError("sweep: horizon must exceed the unit ball");
  }
  if (T > g.domain_max + 1e-12 || T > G.fn.domain_max + 1e-12 ||
      T > m.warping.domain_max + 1e-12) {
    throw PreconditionError("sweep: horizon outside a participant's domain");
  }
  if (opt.grid < 16) throw PreconditionError("sweep: grid too small");

  SweepContext ctx;
  ctx.T = T;
  ctx.L = L;

  // Guard: eps must stay below min{1, L - sup of g over the open unit ball}.
  double ball_sup = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < opt.guard_samples; ++i) {
    const double r = std::min(1.0, T) * static_cast<double>(i) / opt.guard_samples;
    ball_sup = std::max(ball_sup, g.eval(r));
  }
  ctx.guard_bound = std::min(1.0, L - ball_sup);

  // delta_r <= G beyond the unit ball: the structural hypothesis that makes
  // lambda * F a usable sweep family.
  for (int j = 1; j <= opt.precheck_samples; ++j) {
    const double t = 1.0 + (T - 1.0) * static_cast<double>(j) / opt.precheck_samples;
    const double dr = delta_r(m, t);
    const double Gv = G.fn.eval(t);
    if (dr > Gv + 1e-9 * std::max(1.0, Gv)) {
      throw PreconditionError("sweep: delta_r exceeds G at t = " + std::to_string(t) +
                              " (delta_r = " + std::to_string(dr) + ", G = " + std::to_string(Gv) +
                              ")");
    }
  }

  ctx.grid_t.resize(opt.grid + 1);
  ctx.grid_g.resize(opt.grid + 1);
  double sup = -std::numeric_limits<double>::infinity();
  std::size_t arg = 0;
  for (std::size_t i = 0; i <= opt.grid; ++i) {
    const double t = T * static_cast<double>(i) / static_cast<double>(opt.grid);
    const double gv = g.eval(t);
    if (!std::isfinite(gv)) throw NonFiniteError("sweep: non-finite g during scan", t);
    ctx.grid_t[i] = t;
    ctx.grid_g[i] = gv;
    if (gv > sup) {
      sup = gv;
      arg = i;
    }
  }
  ctx.sup_g = sup;
  ctx.argmax_t = ctx.grid_t[arg];

  const double attained_tol = opt.attained_tol * std::max(1.0, std::fabs(L));
  if (sup >= L - attained_tol) {
    if (sup > L + attained_tol) {
      throw PreconditionError("sweep: g exceeds its declared supremum on the horizon");
    }
    // Supremum attained inside the domain: the trivial certificate path.
    if (arg == 0 || ctx.argmax_t > opt.horizon_frac * T) {
      throw PreconditionError("sweep: supremum attained at the domain edge");
    }
    ctx.attained = true;
  }

  ctx.F = build_F(G, opt.quad);
  ctx.grid_F.resize(opt.grid + 1);
  for (std::size_t i = 0; i <= opt.grid; ++i) ctx.grid_F[i] = ctx.F.eval(ctx.grid_t[i]);
  return ctx;
}

SweepCertificate certificate_at(const ModelManifold& m, const ScalarFunction1D& g,
                                const SweepContext& ctx, double eps, double x, double lambda0,
                                bool trivial) {
  SweepCertificate cert;
  cert.epsilon = eps;
  cert.lambda0 = lambda0;
  cert.x_eps = x;
  cert.guard_bound = ctx.guard_bound;
  cert.trivial = trivial;
  cert.gap = ctx.L - g.eval(x);
  cert.grad_norm = std::fabs(g.deriv(x));
  cert.laplacian = radial_laplacian(m, g, x);
  cert.near_sup_ok = cert.gap <= eps;
  cert.lambda_ok = lambda0 < eps / ctx.F.eval(x) && lambda0 < eps;
  cert.grad_ok = cert.grad_norm < eps;
  cert.laplacian_ok = cert.laplacian <= 2.0 * eps;
  return cert;
}

SweepCertificate sweep_one(const ModelManifold& m, const ScalarFunction1D& g,
                           const SweepContext& ctx, double eps, const SweepOptions& opt) {
  if (!(eps > 0.0)) throw PreconditionError("sweep: eps must be positive");
  if (!(eps < ctx.guard_bound)) {
    throw PreconditionError(
        "sweep: eps violates the guard min{1, L - sup of g on the unit ball} = " +
        std::to_string(ctx.guard_bound));
  }

  if (ctx.attained) {
    // Sweep level zero already touches at the attained maximum; refine the
    // grid argmax to locate it sharply.
    std::size_t arg = 0;
    for (std::size_t i = 1; i < ctx.grid_g.size(); ++i) {
      if (ctx.grid_g[i] > ctx.grid_g[arg]) arg = i;
    }
    const double lo = ctx.grid_t[arg > 0 ? arg - 1 : 0];
    const double hi = ctx.grid_t[std::min(arg + 1, ctx.grid_t.size() - 1)];
    const Extremum ex = golden_section_max([&g](double t) { return g.eval(t); }, lo, hi,
                                           opt.refine_tol);
    return certificate_at(m, g, ctx, eps, ex.x, 0.0, true);
  }

  // First touching level of lambda * F + L - eps over g, located as the
  // maximum of the pointwise ratio.
  std::size_t arg = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ctx.grid_t.size(); ++i) {
    const double ratio = (ctx.grid_g[i] - ctx.L + eps) / ctx.grid_F[i];
    if (ratio > best) {
      best = ratio;
      arg = i;
    }
  }
  const double lo = ctx.grid_t[arg > 0 ? arg - 1 : 0];
  const double hi = ctx.grid_t[std::min(arg + 1, ctx.grid_t.size() - 1)];
  const auto& F = ctx.F;
  const double L = ctx.L;
  const Extremum ex = golden_section_max(
      [&g, &F, L, eps](double t) { return (g.eval(t) - L + eps) / F.eval(t); }, lo, hi,
      opt.refine_tol);

  if (ex.x >= opt.horizon_frac * ctx.T) {
    throw HorizonLimitedError(
        "sweep: touch radius sits on the horizon; the result would be a truncation artifact "
        "(enlarge T)",
        ex.x, ctx.T);
  }
  return certificate_at(m, g, ctx, eps, ex.x, ex.value, false);
}

}  // namespace

SweepCertificate sweep_lambda0(const ModelManifold& m, const ScalarFunction1D& g, double L,
                               const GrowthFunction& G, double eps, double T,
                               const SweepOptions& opt) {
  const SweepContext ctx = build_sweep_context(m, g, L, G, T, opt);
  return sweep_one(m, g, ctx, eps, opt);
}

std::vector<SweepCertificate> certify_definition(const ModelManifold& m,
                                                 const ScalarFunction1D& g, double L,
                                                 const GrowthFunction& G,
                                                 const std::vector<double>& eps_list, double T,
                                                 const SweepOptions& opt) {
  if (eps_list.empty()) throw PreconditionError("certify_definition: empty eps list");
  const SweepContext ctx = build_sweep_context(m, g, L, G, T, opt);
  std::vector<SweepCertificate> out;
  out.reserve(eps_list.size());
  for (double eps : eps_list) out.push_back(sweep_one(m, g, ctx, eps, opt));
  return out;
}

SequenceReport search_omori_sequence(const ModelManifold& m, const ScalarFunction1D& g,
                                     const std::vector<double>& horizons,
                                     const SequenceOptions& opt) {
  if (horizons.empty()) throw PreconditionError("search_omori_sequence: no horizons");
  for (std::size_t i = 1; i < horizons.size(); ++i) {
    if (!(horizons[i] > horizons[i - 1])) {
      throw PreconditionError("search_omori_sequence: horizons must be increasing");
    }
  }
  if (horizons.back() > g.domain_max + 1e-12 || horizons.back() > m.warping.domain_max + 1e-12) {
    throw PreconditionError("search_omori_sequence: horizon outside domain");
  }

  SequenceReport rep;
  double range0 = 0.0;
  bool all_violate = true;

  for (std::size_t k = 0; k < horizons.size(); ++k) {
    const double T = horizons[k];
    const double band = joint_exclusion_band(T);

    // Pass one: supremum over the horizon grid (joints excluded; g is only
    // shy of smooth there and the neighbors see the same values anyway).
    double sup = -std::numeric_limits<double>::infinity();
    double arg = 0.0;
    double min_g = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= opt.grid; ++i) {
      const double t = T * static_cast<double>(i) / opt.grid;
      if (near_any_joint(t, g.nonsmooth_points, band)) continue;
      const double gv = g.eval(t);
      if (!std::isfinite(gv)) throw NonFiniteError("search_omori_sequence: non-finite g", t);
      if (gv > sup) {
        sup = gv;
        arg = t;
      }
      min_g = std::min(min_g, gv);
    }
    if (k == 0) range0 = std::max(sup - min_g, 0.0);

    HorizonDiagnostics diag;
    diag.horizon = T;
    diag.sup_g = sup;
    diag.argmax = arg;
    diag.delta = std::max(range0 * std::pow(2.0, -static_cast<double>(k + 2)), opt.delta_floor);

    // Pass two: infima of |g'| and the Laplacian over the near-sup region.
    double inf_grad = std::numeric_limits<double>::infinity();
    double inf_lap = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= opt.grid; ++i) {
      const double t = T * static_cast<double>(i) / opt.grid;
      if (near_any_joint(t, g.nonsmooth_points, band)) continue;
      if (!(g.eval(t) > sup - diag.delta)) continue;
      inf_grad = std::min(inf_grad, std::fabs(g.deriv(t)));
      inf_lap = std::min(inf_lap, radial_laplacian(m, g, t));
    }
    diag.inf_abs_grad = inf_grad;
    diag.inf_laplacian = inf_lap;
    rep.horizons.push_back(diag);

    if (!(inf_lap >= opt.violation_floor)) all_violate = false;
  }

  const HorizonDiagnostics& last = rep.horizons.back();
  if (all_violate) {
    rep.verdict = SequenceVerdict::violated;
  } else if (last.inf_abs_grad <= opt.grad_tol && last.inf_laplacian <= opt.lap_tol) {
    rep.verdict = SequenceVerdict::plausible;
  } else {
    rep.verdict = SequenceVerdict::inconclusive;
  }
  return rep;
}

Counterexample build_counterexample(const GrowthFunction& g, int n, double T,
                                    const CounterexampleOptions& opt) {
  if (!g.verified) {
    throw PreconditionError("build_counterexample: growth function is not verified admissible");
  }
  // The slowdown gate rejects divergent/undeclared reciprocal integrals; no
  // forcing here, since an unbounded h certifies nothing.
  SlowdownOptions sopt = opt.slowdown;
  sopt.force_gate = false;

  Counterexample ce;
  ce.slowed = build_H(g, T, sopt);
  ce.manifold = build_counterexample_manifold(g, n, opt.quad);

  // h as a prefix integral of 1/H, with exact derivative closures and cell
  // boundaries pinned to the splice joints.
  const auto heval = ce.slowed.fn.eval;
  const auto hderiv = ce.slowed.fn.deriv;
  auto cum = std::make_shared<CumulativeIntegral>(
      [heval](double t) { return 1.0 / heval(t); }, 0.0, T, opt.quad,
      ce.slowed.fn.nonsmooth_points);

  ScalarFunction1D h;
  h.kind = FunctionKind::piecewise;
  h.label = "h[" + g.fn.label + "]";
  h.domain_max = T;
  h.nonsmooth_points = ce.slowed.fn.nonsmooth_points;
  h.eval = [cum](double t) { return (*cum)(t); };
  h.deriv = [heval](double t) { return 1.0 / heval(t); };
  h.deriv2 = [heval, hderiv](double t) {
    const double H = heval(t);
    return -hderiv(t) / (H * H);
  };
  ce.h = h;

  const ReciprocalIntegral integral = integral_reciprocal_H(ce.slowed, T, opt.quad);
  ce.report.h_sup = integral.full_bound.value_or(integral.value_on_horizon);
  ce.report.h_sup_is_full_bound = integral.full_bound.has_value();

  // delta_h over the grid: the defining inequality delta_h > 1 is re-checked
  // pointwise away from the joints.
  const double band = joint_exclusion_band(T);
  double min_lap = std::numeric_limits<double>::infinity();
  double argmin = 0.0;
  double sup_h = -std::numeric_limits<double>::infinity();
  for (int i = 1; i <= opt.grid; ++i) {
    const double t = T * static_cast<double>(i) / opt.grid;
    if (near_any_joint(t, h.nonsmooth_points, band)) continue;
    const double lap = radial_laplacian(ce.manifold, h, t);
    if (lap < min_lap) {
      min_lap = lap;
      argmin = t;
    }
    sup_h = std::max(sup_h, h.eval(t));
  }
  ce.report.delta_h_min = min_lap;
  ce.report.delta_h_argmin = argmin;
  ce.report.sup_h_on_grid = sup_h;
  if (!(min_lap > 1.0)) {
    throw PropertyViolation("build_counterexample: delta_h failed to clear 1", argmin, min_lap);
  }

  // Witness tail along [T/2, T], nudged off joints.
  ce.report.maximizing_tail.reserve(opt.tail_samples);
  for (int j = 0; j < opt.tail_samples; ++j) {
    double r = T / 2.0 + (T / 2.0) * static_cast<double>(j) / (opt.tail_samples - 1);
    r = std::min(r, T);
    while (near_any_joint(r, h.nonsmooth_points, band)) r += 2.0 * band;
    TailSample s;
    s.radius = r;
    s.height = h.eval(r);
    s.laplacian = radial_laplacian(ce.manifold, h, r);
    ce.report.maximizing_tail.push_back(s);
  }

  std::vector<double> horizons = opt.sequence_horizons;
  if (horizons.empty()) horizons = {T / 2.0, 3.0 * T / 4.0, T};
  ce.report.sequence = search_omori_sequence(ce.manifold, h, horizons, opt.sequence);
  return ce;
}

}  // namespace oylab
