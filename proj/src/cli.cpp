#include "oylab/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oylab/errors.hpp"
#include "oylab/expression.hpp"
#include "oylab/growth.hpp"
#include "oylab/manifold.hpp"
#include "oylab/presets.hpp"
#include "oylab/principle.hpp"
#include "oylab/report_io.hpp"
#include "oylab/slowdown.hpp"

namespace oylab {
namespace {

std::string default_out_dir() {
  if (const char* env = std::getenv("OYLAB_OUT"); env != nullptr && *env != '\0') {
    return env;
  }
  return "out";
}

// Compact rendering for terminal summaries; files always use format_double.
std::string short9(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", x);
  return buf;
}

const char* verdict_name(IntegralVerdict v) {
  switch (v) {
    case IntegralVerdict::diverges_declared: return "diverges-declared";
    case IntegralVerdict::converges_declared: return "converges-declared";
    case IntegralVerdict::inconclusive_numeric: return "inconclusive-numeric";
  }
  return "unknown";
}

const char* sequence_verdict_name(SequenceVerdict v) {
  switch (v) {
    case SequenceVerdict::violated: return "violated";
    case SequenceVerdict::plausible: return "plausible";
    case SequenceVerdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

const char* endpoint_kind_name(EndpointKind k) {
  switch (k) {
    case EndpointKind::boundary: return "boundary";
    case EndpointKind::root: return "root";
    case EndpointKind::truncation: return "truncation";
  }
  return "unknown";
}

GrowthFunction admissible_growth(const std::string& spec, double T, int samples) {
  const ScalarFunction1D raw = resolve_scalar_spec(spec, T);
  GrowthFunction g = validate_growth(raw, samples);
  if (!g.verified && g.violation) {
    const auto& v = *g.violation;
    const char* cond = v.condition == AdmissibilityViolation::Condition::below_floor
                           ? "dips below 1"
                           : "has negative slope";
    throw PropertyViolation("growth function " + g.fn.label + " " + cond, v.t, v.value);
  }
  return g;
}

ordered_json splice_json(const SpliceInterval& sp) {
  ordered_json j;
  j["t_n"] = sp.start;
  j["s_n"] = sp.fast_end;
  j["a_n"] = sp.pole;
  j["v_n"] = sp.rejoin;
  return j;
}

ordered_json telescoping_json(const TelescopingReport& tel) {
  ordered_json j;
  j["terms"] = tel.terms;
  j["splice_sum"] = tel.splice_sum;
  j["splice_sum_quadrature"] = tel.splice_sum_quadrature;
  j["bound_rhs"] = tel.bound_rhs;
  j["prefix_bounds_ok"] = tel.prefix_bounds_ok;
  return j;
}

ordered_json sequence_json(const SequenceReport& seq) {
  ordered_json j;
  j["verdict"] = sequence_verdict_name(seq.verdict);
  ordered_json rows = ordered_json::array();
  for (const HorizonDiagnostics& d : seq.horizons) {
    ordered_json r;
    r["horizon"] = d.horizon;
    r["sup_g"] = d.sup_g;
    r["argmax"] = d.argmax;
    r["delta"] = d.delta;
    r["inf_abs_grad"] = d.inf_abs_grad;
    r["inf_laplacian"] = d.inf_laplacian;
    rows.push_back(std::move(r));
  }
  j["horizons"] = std::move(rows);
  return j;
}

void note_wrote(const std::string& path) { std::printf("wrote %s\n", path.c_str()); }

// ----------------------------------------------------------------- growth --

struct GrowthArgs {
  std::string G;
  double T = 10.0;
  std::vector<double> horizons;
  int samples = 1000;
  int rows = 500;
  std::string out;
};

int cmd_growth(const GrowthArgs& a) {
  const ScalarFunction1D raw = resolve_scalar_spec(a.G, a.T);
  const GrowthFunction g = validate_growth(raw, a.samples);
  ensure_directory(a.out);

  ordered_json j;
  j["G"] = g.fn.label;
  j["T"] = a.T;
  j["admissible"] = g.verified;
  if (g.violation) {
    const auto& v = *g.violation;
    ordered_json vj;
    vj["condition"] = v.condition == AdmissibilityViolation::Condition::below_floor
                          ? "below-floor"
                          : "negative-slope";
    vj["t"] = v.t;
    vj["value"] = v.value;
    j["violation"] = std::move(vj);
  }

  bool ok = g.verified;
  if (!g.verified) {
    write_json_atomic(a.out + "/growth_report.json", j);
    note_wrote(a.out + "/growth_report.json");
    const auto& v = *g.violation;
    std::printf("G = %s on [0, %s]: NOT admissible (G %s at t = %s: %s)\n", g.fn.label.c_str(),
                short9(a.T).c_str(),
                v.condition == AdmissibilityViolation::Condition::below_floor ? "< 1" : "' < 0",
                short9(v.t).c_str(), short9(v.value).c_str());
    return 2;
  }

  std::vector<double> hz = a.horizons;
  if (hz.empty()) hz = {a.T / 4.0, a.T / 2.0, a.T};
  const IntegralClassification cls = classify_integral(g, hz);
  ordered_json jc;
  jc["verdict"] = verdict_name(cls.verdict);
  ordered_json vals = ordered_json::array();
  for (const auto& [T, value] : cls.horizon_values) {
    vals.push_back(ordered_json{{"T", T}, {"value", value}});
  }
  jc["horizon_values"] = std::move(vals);
  if (cls.tail_estimate) jc["tail_estimate"] = *cls.tail_estimate;
  j["reciprocal_integral"] = std::move(jc);

  const ScalarFunction1D F = build_F(g);
  const ConsistencyReport cons = check_derivative_consistency(F);
  ok = ok && cons.ok;
  ordered_json jf;
  jf["F_at_0"] = F.eval(0.0);
  jf["F_at_T"] = F.eval(a.T);
  jf["derivative_consistency"] =
      ordered_json{{"ok", cons.ok},
                   {"worst_t", cons.worst_t},
                   {"worst_rel_error", cons.worst_rel_error},
                   {"worst2_t", cons.worst2_t},
                   {"worst2_rel_error", cons.worst2_rel_error}};
  j["F"] = std::move(jf);
  write_json_atomic(a.out + "/growth_report.json", j);

  CsvBuilder csv({"t", "F", "dF", "d2F"});
  for (int i = 0; i <= a.rows; ++i) {
    const double t = a.T * static_cast<double>(i) / static_cast<double>(a.rows);
    csv.add_row({format_double(t), format_double(F.eval(t)), format_double(F.deriv(t)),
                 format_double(F.deriv2(t))});
  }
  write_text_atomic(a.out + "/F.csv", csv.str());

  std::printf("G = %s on [0, %s]: admissible\n", g.fn.label.c_str(), short9(a.T).c_str());
  std::printf("reciprocal integral: %s; value at T = %s\n", verdict_name(cls.verdict),
              short9(cls.value_on_horizon()).c_str());
  if (cls.tail_estimate) {
    std::printf("declared tail beyond T: %s\n", short9(*cls.tail_estimate).c_str());
  }
  std::printf("F(0) = %s, F(T) = %s, derivative consistency: %s\n", short9(F.eval(0.0)).c_str(),
              short9(F.eval(a.T)).c_str(), cons.ok ? "ok" : "FAILED");
  note_wrote(a.out + "/growth_report.json");
  note_wrote(a.out + "/F.csv");
  return ok ? 0 : 2;
}

// --------------------------------------------------------------- slowdown --

struct SlowdownArgs {
  std::string G;
  double T = 50.0;
  int grid = 10000;
  int rows = 1000;
  bool force = false;
  std::string out;
};

int cmd_slowdown(const SlowdownArgs& a) {
  const GrowthFunction g = admissible_growth(a.G, a.T, 1000);
  SlowdownOptions opt;
  opt.grid = a.grid;
  opt.force_gate = a.force;
  const SlowedGrowth slowed = build_H(g, a.T, opt);
  const ReciprocalIntegral integral = integral_reciprocal_H(slowed, a.T, opt.quad);
  const LemmaScan scan = scan_lemma_properties(slowed, a.grid);
  ensure_directory(a.out);

  ordered_json j;
  j["G"] = g.fn.label;
  j["T"] = a.T;
  ordered_json fast = ordered_json::array();
  for (const Interval& c : slowed.fast_set.components) {
    fast.push_back(ordered_json{{"lo", c.lo},
                                {"hi", c.hi},
                                {"lo_kind", endpoint_kind_name(c.lo_kind)},
                                {"hi_kind", endpoint_kind_name(c.hi_kind)}});
  }
  j["fast_set"] = std::move(fast);
  ordered_json sj = ordered_json::array();
  for (const SpliceInterval& sp : *slowed.splices) sj.push_back(splice_json(sp));
  j["splices"] = std::move(sj);
  j["dropped_nested"] = slowed.dropped_nested;
  j["reciprocal_integral"] =
      ordered_json{{"value_on_horizon", integral.value_on_horizon},
                   {"closed_form_on_horizon", integral.closed_form_on_horizon}};
  if (integral.full_bound) j["reciprocal_integral"]["full_bound"] = *integral.full_bound;
  j["telescoping"] = telescoping_json(integral.telescoping);
  write_json_atomic(a.out + "/splices.json", j);

  ordered_json lj;
  lj["floor_ok"] = scan.floor_ok;
  lj["floor_margin"] = scan.floor_margin;
  lj["floor_t"] = scan.floor_t;
  lj["cap_ok"] = scan.cap_ok;
  lj["cap_margin"] = scan.cap_margin;
  lj["cap_t"] = scan.cap_t;
  lj["slope_nonneg_ok"] = scan.slope_nonneg_ok;
  lj["slope_margin"] = scan.slope_margin;
  lj["slope_t"] = scan.slope_t;
  lj["slope_square_ok"] = scan.slope_square_ok;
  lj["slope_square_margin"] = scan.slope_square_margin;
  lj["slope_square_t"] = scan.slope_square_t;
  lj["monotone_ok"] = scan.monotone_ok;
  lj["continuity_ok"] = scan.continuity_ok;
  lj["continuity_worst_jump"] = scan.continuity_worst_jump;
  lj["all_ok"] = scan.all_ok();
  write_json_atomic(a.out + "/lemma_report.json", lj);

  CsvBuilder csv({"t", "H", "dH", "branch"});
  for (int i = 0; i <= a.rows; ++i) {
    const double t = a.T * static_cast<double>(i) / static_cast<double>(a.rows);
    csv.add_row({format_double(t), format_double(slowed.fn.eval(t)),
                 format_double(slowed.fn.deriv(t)), std::to_string(slowed.branch_at(t))});
  }
  write_text_atomic(a.out + "/H.csv", csv.str());

  std::printf("G = %s on [0, %s]: %zu fast component(s), %zu splice(s) kept, %zu dropped\n",
              g.fn.label.c_str(), short9(a.T).c_str(), slowed.fast_set.components.size(),
              slowed.splices->size(), slowed.dropped_nested);
  std::size_t idx = 0;
  for (const SpliceInterval& sp : *slowed.splices) {
    ++idx;
    std::printf("splice %zu: t_%zu = %s, s_%zu = %s, a_%zu = %s, v_%zu = %s\n", idx, idx,
                short9(sp.start).c_str(), idx, short9(sp.fast_end).c_str(), idx,
                short9(sp.pole).c_str(), idx, short9(sp.rejoin).c_str());
  }
  const auto& tel = integral.telescoping;
  std::printf("integral of 1/H on [0, T]: %s (closed form %s)\n",
              short9(integral.value_on_horizon).c_str(),
              short9(integral.closed_form_on_horizon).c_str());
  if (integral.full_bound) {
    std::printf("bound on the full integral of 1/H: %s\n", short9(*integral.full_bound).c_str());
  }
  if (!tel.terms.empty()) {
    std::printf("splice mass %s (quadrature %s) < partial-sum bound %s: %s\n",
                short9(tel.splice_sum).c_str(), short9(tel.splice_sum_quadrature).c_str(),
                short9(tel.bound_rhs).c_str(), tel.prefix_bounds_ok ? "ok" : "FAILED");
  }
  std::printf("construction scan: %s\n", scan.all_ok() ? "all properties hold" : "FAILED");
  note_wrote(a.out + "/splices.json");
  note_wrote(a.out + "/lemma_report.json");
  note_wrote(a.out + "/H.csv");

  const double route_gap = std::abs(integral.value_on_horizon - integral.closed_form_on_horizon);
  const double splice_gap = std::abs(tel.splice_sum - tel.splice_sum_quadrature);
  const bool ok = scan.all_ok() && tel.prefix_bounds_ok &&
                  route_gap <= 1e-8 * std::max(1.0, integral.value_on_horizon) &&
                  splice_gap <= 1e-9;
  return ok ? 0 : 2;
}

// ---------------------------------------------------------------- riccati --

struct RiccatiArgs {
  std::string G;
  int n = 2;
  double t0 = 0.1;
  double m0 = 0.0;
  double T = 10.0;
  double tol = 1e-9;
  std::string out;
};

int cmd_riccati(const RiccatiArgs& a) {
  const GrowthFunction g = admissible_growth(a.G, std::max(a.T, a.t0) + 1.0, 1000);
  OdeOptions ode;
  ode.tol = a.tol;
  const RiccatiTrace trace = riccati_integrate(neg_growth_squared(g), a.n, a.t0, a.m0, a.T, ode);
  const ComparisonBoundReport report = check_comparison_bound(trace, g, a.n);
  ensure_directory(a.out);

  ordered_json j;
  j["G"] = g.fn.label;
  j["n"] = a.n;
  j["t0"] = a.t0;
  j["m0"] = a.m0;
  j["T"] = a.T;
  j["samples"] = trace.t.size();
  j["blow_up"] = trace.blow_up;
  if (trace.blow_up_t) j["blow_up_t"] = *trace.blow_up_t;
  j["bound_factor"] = report.factor;
  j["holds_everywhere"] = report.holds_everywhere;
  if (report.holds_from) j["holds_from"] = *report.holds_from;
  if (report.witness_t) {
    j["witness"] = ordered_json{{"t", *report.witness_t},
                                {"m", *report.witness_m},
                                {"bound", *report.witness_bound}};
  }
  write_json_atomic(a.out + "/riccati_report.json", j);

  CsvBuilder csv({"t", "m", "bound", "margin"});
  for (std::size_t i = 0; i < trace.t.size(); ++i) {
    const double bound = report.factor * g.fn.eval(trace.t[i]);
    csv.add_row({format_double(trace.t[i]), format_double(trace.m[i]), format_double(bound),
                 format_double(bound - trace.m[i])});
  }
  write_text_atomic(a.out + "/riccati_trace.csv", csv.str());

  std::printf("m' = -R - m^2/(n-1) with R = -G^2, G = %s, n = %d: %zu samples on [%s, %s]\n",
              g.fn.label.c_str(), a.n, trace.t.size(), short9(a.t0).c_str(),
              short9(trace.t.back()).c_str());
  if (trace.blow_up) {
    std::printf("finite-time blow-up near t = %s\n", short9(*trace.blow_up_t).c_str());
  }
  if (report.holds_everywhere) {
    std::printf("bound m < (sqrt(n-1)+1) G holds at every sample\n");
  } else if (report.holds_from) {
    std::printf("bound m < (sqrt(n-1)+1) G holds from t = %s on\n",
                short9(*report.holds_from).c_str());
  } else {
    std::printf("bound m < (sqrt(n-1)+1) G never takes hold; last violation at t = %s (m = %s, "
                "bound = %s)\n",
                short9(*report.witness_t).c_str(), short9(*report.witness_m).c_str(),
                short9(*report.witness_bound).c_str());
  }
  note_wrote(a.out + "/riccati_report.json");
  note_wrote(a.out + "/riccati_trace.csv");
  return report.holds_from ? 0 : 2;
}

// ------------------------------------------------------------------ sweep --

struct SweepArgs {
  std::string warping;
  int n = 2;
  std::string g;
  double L = 0.0;
  std::string G;
  std::vector<double> eps;
  double T = 100.0;
  int rows = 2000;
  std::string out;
};

int cmd_sweep(const SweepArgs& a) {
  const GrowthFunction G = admissible_growth(a.G, a.T, 1000);
  const ModelManifold model = make_model_manifold(a.n, resolve_warping_spec(a.warping, a.T));
  const ScalarFunction1D g = resolve_scalar_spec(a.g, a.T);
  const std::vector<SweepCertificate> certs = certify_definition(model, g, a.L, G, a.eps, a.T);
  const ScalarFunction1D F = build_F(G);
  ensure_directory(a.out);

  ordered_json j;
  j["warping"] = model.warping.label;
  j["n"] = a.n;
  j["g"] = g.label;
  j["L"] = a.L;
  j["G"] = G.fn.label;
  j["T"] = a.T;
  j["guard_bound"] = certs.front().guard_bound;
  ordered_json rows = ordered_json::array();
  for (const SweepCertificate& c : certs) {
    ordered_json cj;
    cj["epsilon"] = c.epsilon;
    cj["lambda0"] = c.lambda0;
    cj["x_eps"] = c.x_eps;
    cj["gap"] = c.gap;
    cj["grad_norm"] = c.grad_norm;
    cj["laplacian"] = c.laplacian;
    cj["near_sup_ok"] = c.near_sup_ok;
    cj["lambda_ok"] = c.lambda_ok;
    cj["grad_ok"] = c.grad_ok;
    cj["laplacian_ok"] = c.laplacian_ok;
    cj["trivial"] = c.trivial;
    cj["passed"] = c.passed();
    rows.push_back(std::move(cj));
  }
  j["certificates"] = std::move(rows);
  write_json_atomic(a.out + "/certificates.json", j);
  note_wrote(a.out + "/certificates.json");

  for (std::size_t k = 0; k < certs.size(); ++k) {
    const SweepCertificate& c = certs[k];
    CsvBuilder csv({"t", "g", "h_lambda0", "gap"});
    for (int i = 0; i <= a.rows; ++i) {
      const double t = a.T * static_cast<double>(i) / static_cast<double>(a.rows);
      const double gv = g.eval(t);
      const double hv = c.lambda0 * F.eval(t) + a.L - c.epsilon;
      csv.add_row({format_double(t), format_double(gv), format_double(hv),
                   format_double(hv - gv)});
    }
    const std::string path = a.out + "/sweep_trace_" + std::to_string(k + 1) + ".csv";
    write_text_atomic(path, csv.str());
    note_wrote(path);
  }

  bool all_passed = true;
  std::printf("guard on eps: min{1, L - sup of g on the unit ball} = %s\n",
              short9(certs.front().guard_bound).c_str());
  for (const SweepCertificate& c : certs) {
    all_passed = all_passed && c.passed();
    std::printf("eps = %s: lambda0 = %s, x_eps = %s, gap = %s, |g'| = %s, laplacian = %s -> %s%s\n",
                short9(c.epsilon).c_str(), short9(c.lambda0).c_str(), short9(c.x_eps).c_str(),
                short9(c.gap).c_str(), short9(c.grad_norm).c_str(), short9(c.laplacian).c_str(),
                c.passed() ? "PASS" : "FAIL", c.trivial ? " (supremum attained)" : "");
  }
  return all_passed ? 0 : 2;
}

// --------------------------------------------------------- counterexample --

struct CounterexampleArgs {
  std::string G;
  int n = 2;
  double T = 50.0;
  int grid = 10000;
  int rows = 2000;
  std::string out;
};

int cmd_counterexample(const CounterexampleArgs& a) {
  const GrowthFunction g = admissible_growth(a.G, a.T, 1000);
  CounterexampleOptions opt;
  opt.grid = a.grid;
  const Counterexample ce = build_counterexample(g, a.n, a.T, opt);
  const ViolationReport& report = ce.report;
  ensure_directory(a.out);

  ordered_json j;
  j["G"] = g.fn.label;
  j["n"] = a.n;
  j["T"] = a.T;
  j["h_sup"] = report.h_sup;
  j["h_sup_is_full_bound"] = report.h_sup_is_full_bound;
  j["sup_h_on_grid"] = report.sup_h_on_grid;
  j["delta_h_min"] = report.delta_h_min;
  j["delta_h_argmin"] = report.delta_h_argmin;
  ordered_json sj = ordered_json::array();
  for (const SpliceInterval& sp : *ce.slowed.splices) sj.push_back(splice_json(sp));
  j["splices"] = std::move(sj);
  ordered_json tails = ordered_json::array();
  for (const TailSample& s : report.maximizing_tail) {
    tails.push_back(ordered_json{{"radius", s.radius},
                                 {"height", s.height},
                                 {"laplacian", s.laplacian}});
  }
  j["maximizing_tail"] = std::move(tails);
  j["sequence"] = sequence_json(report.sequence);
  write_json_atomic(a.out + "/violation_report.json", j);

  CsvBuilder csv({"t", "h", "delta_h"});
  for (int i = 1; i <= a.rows; ++i) {
    const double t = a.T * static_cast<double>(i) / static_cast<double>(a.rows);
    csv.add_row({format_double(t), format_double(ce.h.eval(t)),
                 format_double(radial_laplacian(ce.manifold, ce.h, t))});
  }
  write_text_atomic(a.out + "/delta_h.csv", csv.str());

  std::printf("G = %s, n = %d, T = %s: h bounded by %s%s\n", g.fn.label.c_str(), a.n,
              short9(a.T).c_str(), short9(report.h_sup).c_str(),
              report.h_sup_is_full_bound ? " (full-line bound)" : " (horizon value)");
  std::printf("min delta h on the grid: %s at t = %s (needs > 1)\n",
              short9(report.delta_h_min).c_str(), short9(report.delta_h_argmin).c_str());
  std::printf("maximizing-sequence search verdict: %s\n",
              sequence_verdict_name(report.sequence.verdict));
  note_wrote(a.out + "/violation_report.json");
  note_wrote(a.out + "/delta_h.csv");

  const bool ok =
      report.delta_h_min > 1.0 && report.sequence.verdict == SequenceVerdict::violated;
  return ok ? 0 : 2;
}

}  // namespace

int run_cli(std::vector<std::string> args) {
  CLI::App app{"maximum-principle laboratory for radially symmetric models"};
  app.set_config("--config", "", "read options from a key=value file (flags win)");
  app.require_subcommand(1);

  const std::string out_default = default_out_dir();

  GrowthArgs ga;
  ga.out = out_default;
  CLI::App* growth = app.add_subcommand(
      "growth", "admissibility, reciprocal-integral classification, and the F table");
  growth->add_option("--G", ga.G, "growth function: preset, number, or expression in t")
      ->required();
  growth->add_option("--T", ga.T, "horizon")->check(CLI::PositiveNumber);
  growth->add_option("--horizons", ga.horizons, "integral horizons (default: T/4, T/2, T)")
      ->delimiter(',');
  growth->add_option("--samples", ga.samples, "admissibility scan points")
      ->check(CLI::PositiveNumber);
  growth->add_option("--rows", ga.rows, "F table rows")->check(CLI::PositiveNumber);
  growth->add_option("--out", ga.out, "output directory");

  SlowdownArgs sa;
  sa.out = out_default;
  CLI::App* slowdown =
      app.add_subcommand("slowdown", "splice ledger, H table, and construction property scan");
  slowdown->add_option("--G", sa.G, "growth function")->required();
  slowdown->add_option("--T", sa.T, "horizon")->check(CLI::PositiveNumber);
  slowdown->add_option("--grid", sa.grid, "detection and property-scan grid")
      ->check(CLI::PositiveNumber);
  slowdown->add_option("--rows", sa.rows, "H table rows")->check(CLI::PositiveNumber);
  slowdown->add_flag("--force", sa.force, "build even without a convergent declaration");
  slowdown->add_option("--out", sa.out, "output directory");

  RiccatiArgs ra;
  ra.out = out_default;
  CLI::App* riccati = app.add_subcommand(
      "riccati", "comparison ODE m' = -R - m^2/(n-1) with R = -G^2, plus the bound report");
  riccati->add_option("--G", ra.G, "growth function")->required();
  riccati->add_option("--n", ra.n, "dimension (n >= 2)");
  riccati->add_option("--t0", ra.t0, "initial time (t0 >= 0)");
  riccati->add_option("--m0", ra.m0, "initial value m(t0)")->required();
  riccati->add_option("--T", ra.T, "final time");
  riccati->add_option("--tol", ra.tol, "local error tolerance");
  riccati->add_option("--out", ra.out, "output directory");

  SweepArgs wa;
  wa.out = out_default;
  CLI::App* sweep =
      app.add_subcommand("sweep", "touching-family certificates for a bounded radial g");
  sweep->add_option("--warping", wa.warping, "warping profile: t, sinh, or expression")
      ->required();
  sweep->add_option("--n", wa.n, "dimension (n >= 2)");
  sweep->add_option("--g", wa.g, "bounded radial function of t (or r)")->required();
  sweep->add_option("--L", wa.L, "declared supremum of g")->required();
  sweep->add_option("--G", wa.G, "growth function dominating delta r beyond the unit ball")
      ->required();
  sweep->add_option("--eps", wa.eps, "epsilon levels")->required()->delimiter(',');
  sweep->add_option("--T", wa.T, "horizon")->check(CLI::PositiveNumber);
  sweep->add_option("--rows", wa.rows, "trace rows per epsilon")->check(CLI::PositiveNumber);
  sweep->add_option("--out", wa.out, "output directory");

  CounterexampleArgs ca;
  ca.out = out_default;
  CLI::App* counterexample = app.add_subcommand(
      "counterexample", "slowed profile, warped model, and bounded h with delta h > 1");
  counterexample->add_option("--G", ca.G, "growth function (convergent reciprocal integral)")
      ->required();
  counterexample->add_option("--n", ca.n, "dimension (n >= 2)");
  counterexample->add_option("--T", ca.T, "horizon")->check(CLI::PositiveNumber);
  counterexample->add_option("--grid", ca.grid, "delta h scan grid")->check(CLI::PositiveNumber);
  counterexample->add_option("--rows", ca.rows, "delta h table rows")->check(CLI::PositiveNumber);
  counterexample->add_option("--out", ca.out, "output directory");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (growth->parsed()) return cmd_growth(ga);
    if (slowdown->parsed()) return cmd_slowdown(sa);
    if (riccati->parsed()) return cmd_riccati(ra);
    if (sweep->parsed()) return cmd_sweep(wa);
    if (counterexample->parsed()) return cmd_counterexample(ca);
    std::fprintf(stderr, "oylab: no command given\n");
    return 1;
  } catch (const PropertyViolation& e) {
    std::fprintf(stderr, "oylab: property violation: %s (t = %s, value = %s)\n", e.what(),
                 short9(e.witness_t).c_str(), short9(e.witness_value).c_str());
    return 2;
  } catch (const ExprParseError& e) {
    std::fprintf(stderr, "oylab: parse error at offset %zu: %s\n", e.offset, e.what());
    return 1;
  } catch (const SpliceEscapeError& e) {
    std::fprintf(stderr,
                 "oylab: %s (splice starts at t = %s, pole at t = %s; raise --T)\n", e.what(),
                 short9(e.start).c_str(), short9(e.pole).c_str());
    return 1;
  } catch (const HorizonLimitedError& e) {
    std::fprintf(stderr, "oylab: %s (maximizer at t = %s, horizon %s; raise --T)\n", e.what(),
                 short9(e.argmax).c_str(), short9(e.horizon).c_str());
    return 1;
  } catch (const PreconditionError& e) {
    std::fprintf(stderr, "oylab: %s\n", e.what());
    return 1;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "oylab: %s\n", e.what());
    return 1;
  } catch (const NumericsError& e) {
    std::fprintf(stderr, "oylab: numerical failure: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "oylab: %s\n", e.what());
    return 1;
  }
}

}  // namespace oylab
