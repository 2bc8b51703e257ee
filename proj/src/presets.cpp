#include "oylab/presets.hpp"

#include <charconv>
#include <cmath>
#include <memory>

#include "oylab/errors.hpp"
#include "oylab/expression.hpp"
#include "oylab/report_io.hpp"

namespace oylab {
namespace {

std::string strip_spaces(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (c != ' ' && c != '\t') out += c;
  }
  return out;
}

bool parse_full_number(const std::string& s, double& out) {
  const char* b = s.data();
  const char* e = s.data() + s.size();
  auto res = std::from_chars(b, e, out);
  return res.ec == std::errc{} && res.ptr == e;
}

std::shared_ptr<const DeclaredIntegral> declare_divergent() {
  auto d = std::make_shared<DeclaredIntegral>();
  d->verdict = IntegralVerdict::diverges_declared;
  return d;
}

std::shared_ptr<const DeclaredIntegral> declare_convergent(std::function<double(double)> tail) {
  auto d = std::make_shared<DeclaredIntegral>();
  d->verdict = IntegralVerdict::converges_declared;
  d->tail_bound = std::move(tail);
  return d;
}

bool is_any(const std::string& s, std::initializer_list<const char*> names) {
  for (const char* n : names) {
    if (s == n) return true;
  }
  return false;
}

}  // namespace

ScalarFunction1D make_constant(double c, double domain_max) {
  ScalarFunction1D fn;
  fn.kind = FunctionKind::preset;
  fn.label = format_double(c);
  fn.domain_max = domain_max;
  fn.eval = [c](double) { return c; };
  fn.deriv = [](double) { return 0.0; };
  fn.deriv2 = [](double) { return 0.0; };
  fn.declared = declare_divergent();  // integral of 1/c grows linearly
  return fn;
}

ScalarFunction1D make_table_function(const std::vector<TablePoint>& points, std::string label) {
  if (points.size() < 2) throw UsageError("table function needs at least two knots");
  if (points.front().t != 0.0) throw UsageError("table function must start at t = 0");
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!(points[i].t > points[i - 1].t)) {
      throw UsageError("table knots must be strictly increasing in t");
    }
  }

  auto pts = std::make_shared<const std::vector<TablePoint>>(points);
  const double hi = points.back().t;

  // Locate the cell; clamp so evaluation at the domain ends is exact.
  auto cell_of = [pts, hi](double t) -> std::size_t {
    if (t < 0.0 || t > hi) throw PreconditionError("table function: t outside knot range");
    std::size_t lo = 0, up = pts->size() - 1;
    while (up - lo > 1) {
      const std::size_t mid = (lo + up) / 2;
      if ((*pts)[mid].t <= t) lo = mid; else up = mid;
    }
    return lo;
  };

  ScalarFunction1D fn;
  fn.kind = FunctionKind::piecewise;
  fn.label = std::move(label);
  fn.domain_max = hi;
  fn.eval = [pts, cell_of](double t) {
    const std::size_t i = cell_of(t);
    const TablePoint& a = (*pts)[i];
    const TablePoint& b = (*pts)[i + 1];
    const double w = (t - a.t) / (b.t - a.t);
    return a.value + w * (b.value - a.value);
  };
  fn.deriv = [pts, cell_of](double t) {
    const std::size_t i = cell_of(t);
    const TablePoint& a = (*pts)[i];
    const TablePoint& b = (*pts)[i + 1];
    return (b.value - a.value) / (b.t - a.t);
  };
  fn.deriv2 = [](double) { return 0.0; };
  for (std::size_t i = 1; i + 1 < points.size(); ++i) fn.nonsmooth_points.push_back(points[i].t);
  return fn;
}

ScalarFunction1D resolve_scalar_spec(const std::string& text, double domain_max) {
  const std::string s = strip_spaces(text);
  if (s.empty()) throw UsageError("empty function specification");

  double c = 0.0;
  if (parse_full_number(s, c)) return make_constant(c, domain_max);

  ScalarFunction1D fn;
  fn.kind = FunctionKind::preset;
  fn.domain_max = domain_max;

  if (is_any(s, {"1+t", "t+1"})) {
    fn.label = "1+t";
    fn.eval = [](double t) { return 1.0 + t; };
    fn.deriv = [](double) { return 1.0; };
    fn.deriv2 = [](double) { return 0.0; };
    fn.declared = declare_divergent();
    return fn;
  }
  if (is_any(s, {"(1+t)^2", "(t+1)^2"})) {
    fn.label = "(1+t)^2";
    fn.eval = [](double t) { return (1.0 + t) * (1.0 + t); };
    fn.deriv = [](double t) { return 2.0 * (1.0 + t); };
    fn.deriv2 = [](double) { return 2.0; };
    fn.declared = declare_convergent([](double T) { return 1.0 / (1.0 + T); });
    return fn;
  }
  if (is_any(s, {"e^t", "exp(t)"})) {
    fn.label = "e^t";
    fn.eval = [](double t) { return std::exp(t); };
    fn.deriv = [](double t) { return std::exp(t); };
    fn.deriv2 = [](double t) { return std::exp(t); };
    fn.declared = declare_convergent([](double T) { return std::exp(-T); });
    return fn;
  }
  if (is_any(s, {"(1+t)*log(1+t)+1", "(1+t)log(1+t)+1", "(t+1)*log(t+1)+1"})) {
    fn.label = "(1+t)*log(1+t)+1";
    fn.eval = [](double t) { return (1.0 + t) * std::log1p(t) + 1.0; };
    fn.deriv = [](double t) { return std::log1p(t) + 1.0; };
    fn.deriv2 = [](double t) { return 1.0 / (1.0 + t); };
    fn.declared = declare_divergent();  // reciprocal decays like 1/(t log t)
    return fn;
  }
  return parse_expression(text, domain_max);
}

ScalarFunction1D resolve_warping_spec(const std::string& text, double domain_max) {
  const std::string s = strip_spaces(text);
  ScalarFunction1D fn;
  fn.kind = FunctionKind::preset;
  fn.domain_max = domain_max;

  if (s == "t") {
    fn.label = "t";
    fn.eval = [](double t) { return t; };
    fn.deriv = [](double) { return 1.0; };
    fn.deriv2 = [](double) { return 0.0; };
    return fn;
  }
  if (is_any(s, {"sinh", "sinh(t)"})) {
    fn.label = "sinh(t)";
    fn.eval = [](double t) { return std::sinh(t); };
    fn.deriv = [](double t) { return std::cosh(t); };
    fn.deriv2 = [](double t) { return std::sinh(t); };
    return fn;
  }
  return parse_expression(text, domain_max);
}

}  // namespace oylab
