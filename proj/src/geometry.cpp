#include "axioquad/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

namespace axioquad {

namespace {

constexpr int kGridPoints = 1025;
constexpr int kExtractionPoints = 9;
constexpr std::size_t kOracleCells = 8192;
constexpr double kExtractionTol = 1e-4;
constexpr double kSlopeCap = 1e8;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void check_bounds(const Function& f, double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw PreconditionError("bounds must be finite");
  if (!(a < b)) throw PreconditionError("need a < b, got a = " + num(a) + ", b = " + num(b));
  if (!f.domain().contains(a) || !f.domain().contains(b))
    throw PreconditionError("[" + num(a) + ", " + num(b) + "] leaves the domain [" + num(f.domain().lo) + ", " +
                            num(f.domain().hi) + "]");
}

double grid_point(double a, double b, int i) {
  return i == kGridPoints - 1 ? b : a + (b - a) * i / (kGridPoints - 1);
}

void check_nonnegative(const Function& f, double a, double b) {
  for (int i = 0; i < kGridPoints; ++i) {
    const double t = grid_point(a, b, i);
    const double v = f(t);
    if (v < 0.0) throw PreconditionError("f is negative at sample x = " + num(t) + " (f = " + num(v) + ")");
  }
}

void check_c1(const Function& f, double a, double b) {
  for (int i = 0; i < kGridPoints; ++i) {
    const double t = grid_point(a, b, i);
    double d;
    try {
      d = f.derivative_at(t);
    } catch (const Error& e) {
      throw NotC1Error("f' fails at x = " + num(t) + ": " + e.what());
    }
    if (!std::isfinite(d) || std::fabs(d) > kSlopeCap)
      throw NotC1Error("f' blows up at x = " + num(t) + " (f' = " + num(d) + ")");
  }
}

GeometricResult finish(const Function& integrand, const LocalModel& model, double a, double b, double eps) {
  GeometricResult r;
  r.closed_form_integrand = to_string(integrand.body());
  r.integral = integrate(integrand, a, b, eps);
  r.value = r.integral.value;
  r.extraction_tolerance = kExtractionTol;
  for (double x : extraction_points(a, b)) {
    const double want = integrand(x);
    const double got = extract_model_coefficient(model, x, a, b, {}, kExtractionTol).rho;
    if (!(std::fabs(got - want) <= kExtractionTol))
      throw ExtractionMismatchError("extracted rho " + num(got) + " at x = " + num(x) + " differs from " + num(want) +
                                    " by more than " + num(kExtractionTol));
    r.extracted_rho_samples.push_back({x, got, want});
  }
  r.oracle_value = accumulate_local_model(model, a, b, kOracleCells);
  return r;
}

}  // namespace

std::string_view model_name(ModelKind k) noexcept {
  switch (k) {
    case ModelKind::rectangle: return "rectangle";
    case ModelKind::chord: return "chord";
    case ModelKind::shell: return "shell";
  }
  return "?";
}

std::string_view geometric_method_name(GeometricMethod m) noexcept {
  return m == GeometricMethod::closed_form ? "closed-form" : "extracted";
}

LocalModel rectangle_model(const Function& f) {
  LocalModel m{ModelKind::rectangle, {}, {}, f};
  m.quantity = [f](double x, double h) { return f(x) * std::fabs(h); };
  m.noise_magnitude = [](double, double) { return 0.0; };
  return m;
}

LocalModel chord_model(const Function& f) {
  LocalModel m{ModelKind::chord, {}, {}, f};
  m.quantity = [f](double x, double h) {
    const double dx = (x + h) - x;
    return std::hypot(dx, f(x + h) - f(x));
  };
  m.noise_magnitude = [f](double x, double h) { return std::fabs(f(x + h)) + std::fabs(f(x)) + std::fabs(x); };
  return m;
}

LocalModel shell_model(const Function& f) {
  LocalModel m{ModelKind::shell, {}, {}, f};
  m.quantity = [f](double x, double h) {
    const double y = x + h;
    return std::fabs(std::numbers::pi * y * y - std::numbers::pi * x * x) * f(x);
  };
  m.noise_magnitude = [f](double x, double h) {
    const double y = x + h;
    return std::numbers::pi * (y * y + x * x + std::fabs(x)) * std::fabs(f(x));
  };
  return m;
}

Expression arclength_integrand(const Function& f) {
  const Expression& d = f.derivative();
  return Expression::call(Builtin::sqrt, Expression::constant(1.0) + d * d);
}

Expression shell_integrand(const Function& f) {
  return Expression::constant(2.0 * std::numbers::pi) * Expression::variable() * f.body();
}

std::vector<double> extraction_points(double a, double b, const HSchedule& schedule) {
  if (!(a < b)) throw PreconditionError("extraction needs a < b");
  std::vector<double> pts(kExtractionPoints);
  const double margin = schedule.h0;
  if (b - a > 4.0 * margin) {
    const double lo = a + margin, hi = b - margin;
    for (int i = 0; i < kExtractionPoints; ++i) pts[i] = lo + (hi - lo) * i / (kExtractionPoints - 1);
  } else {
    for (int i = 0; i < kExtractionPoints; ++i) pts[i] = a + (b - a) * (i + 1) / (kExtractionPoints + 1);
  }
  return pts;
}

CoefficientEstimate extract_model_coefficient(const LocalModel& q, double x, double a, double b,
                                              const HSchedule& schedule, double tol) {
  CoefficientOptions opt;
  opt.domain = Interval{a, b};
  opt.noise_scale = q.noise_magnitude;
  return extract_coefficient(q.quantity, x, schedule, tol, opt);
}

GeometricResult area_under_curve(const Function& f, double a, double b, double eps) {
  check_bounds(f, a, b);
  check_nonnegative(f, a, b);
  return finish(f, rectangle_model(f), a, b, eps);
}

GeometricResult arclength(const Function& f, double a, double b, double eps) {
  check_bounds(f, a, b);
  check_c1(f, a, b);
  const Function integrand(arclength_integrand(f), Interval{a, b});
  return finish(integrand, chord_model(f), a, b, eps);
}

GeometricResult volume_of_revolution_shells(const Function& f, double a, double b, double eps) {
  check_bounds(f, a, b);
  if (a < 0.0) throw PreconditionError("shell volume needs 0 <= a, got a = " + num(a));
  check_nonnegative(f, a, b);
  const Function integrand(shell_integrand(f), Interval{a, b});
  return finish(integrand, shell_model(f), a, b, eps);
}

double accumulate_local_model(const LocalModel& q, double a, double b, std::size_t n) {
  if (n < 1) throw PreconditionError("n must be at least 1");
  if (!std::isfinite(a) || !std::isfinite(b)) throw PreconditionError("bounds must be finite");
  const double h = (b - a) / static_cast<double>(n);
  CompensatedSum sum;
  for (std::size_t k = 0; k < n; ++k) {
    try {
      sum.add(q(a + static_cast<double>(k) * h, h));
    } catch (const Error& e) {
      throw EvaluationError("cell " + std::to_string(k) + ": " + e.what());
    }
  }
  return sum.value();
}

std::pair<AxiomReport, AxiomReport> verify_geometric_axioms(const CandidateIntegral& functional, const LocalModel& q,
                                                            double a, double b, int trials,
                                                            const HSchedule& schedule, double tol,
                                                            std::uint64_t seed) {
  AxiomReport additivity = verify_additivity(functional, a, b, trials, seed, tol);

  AxiomReport local;
  local.axiom = Axiom::asymptotic;
  local.tolerance = tol;
  local.seed = seed;
  for (double x : extraction_points(a, b, schedule)) {
    AxiomTrial t;
    t.site = {x};
    try {
      const HSchedule fitted = fit_schedule(schedule, x, a, b);
      LimitOptions opt;
      opt.noise_scale = [&](double h) {
        const double qv = std::fabs(q(x, h));
        const double m = functional.magnitude + std::fabs(functional(x, x + h)) + qv + std::fabs(x) * qv / std::fabs(h) +
                         std::fabs(q.noise_magnitude(x, h));
        return 1.0 + m / std::fabs(h);
      };
      // functional(x, x+h) = +Q(x,h) + o(h) as h -> 0+, -Q(x,h) + o(h) as h -> 0-
      const LimitEstimate est = estimate_limit(
          [&](double h) { return (functional(x, x + h) - std::copysign(1.0, h) * q(x, h)) / h; }, fitted, tol, opt);
      t.residual = std::max(std::fabs(est.value), est.residual);
      t.estimate = est;
    } catch (const Error& e) {
      t.residual = std::numeric_limits<double>::infinity();
      t.error = std::string(e.kind()) + ": " + e.what();
    }
    local.max_residual = std::max(local.max_residual, t.residual);
    local.trials.push_back(std::move(t));
  }
  local.pass = local.max_residual <= tol;
  return {std::move(additivity), std::move(local)};
}

}  // namespace axioquad
