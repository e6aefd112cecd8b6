#include "axioquad/integral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace axioquad {

namespace {

constexpr int kSpotChecks = 9;
constexpr double kSpotTolerance = 1e-6;
constexpr double kMaxFailureFraction = 0.10;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double ulp(double v) {
  v = std::fabs(v);
  return std::nextafter(v, std::numeric_limits<double>::infinity()) - v;
}

void check_interval(const Function& rho, double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b)) throw PreconditionError("integration bounds must be finite");
  const Interval& d = rho.domain();
  if (!d.contains(std::min(a, b)) || !d.contains(std::max(a, b)))
    throw PreconditionError("[" + num(std::min(a, b)) + ", " + num(std::max(a, b)) + "] leaves the domain [" +
                            num(d.lo) + ", " + num(d.hi) + "]");
}

void spot_check_antiderivative(const Function& rho, double lo, double hi) {
  if (!(lo < hi)) {
    lo = rho.domain().lo;
    hi = rho.domain().hi;
  }
  const CompiledExpression r_prime(differentiate(*rho.antiderivative()));
  for (int i = 0; i < kSpotChecks; ++i) {
    const double t = lo + (hi - lo) * (i + 0.5) / kSpotChecks;
    const double want = rho(t);
    double got;
    try {
      got = r_prime(t);
    } catch (const Error& e) {
      throw BadAntiderivativeError(std::string("derivative of the antiderivative fails at x = ") + num(t) + ": " +
                                   e.what());
    }
    if (std::fabs(got - want) > kSpotTolerance * std::max(1.0, std::fabs(want)))
      throw BadAntiderivativeError("antiderivative check failed at x = " + num(t) + ": R'(x) = " + num(got) +
                                   " but rho(x) = " + num(want));
  }
}

}  // namespace

std::string_view axiom_name(Axiom a) noexcept { return a == Axiom::additivity ? "additivity" : "asymptotic"; }

std::uint64_t SplitMix64::next() noexcept {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

CandidateIntegral candidate_from_antiderivative(const Function& rho) {
  if (!rho.has_antiderivative()) throw PreconditionError("function has no antiderivative");
  double magnitude = 1.0;
  const Interval d = rho.domain();
  for (int i = 0; i <= 16; ++i) magnitude = std::max(magnitude, std::fabs(rho.antiderivative_at(d.lo + d.width() * i / 16)));
  CandidateIntegral c;
  c.eval = [rho](double x, double y) { return rho.antiderivative_at(y) - rho.antiderivative_at(x); };
  c.description = "R(y) - R(x) with R = " + to_string(*rho.antiderivative());
  c.domain = d;
  c.magnitude = magnitude;
  return c;
}

CandidateIntegral candidate_from_darboux(const Function& rho, double eps) {
  if (!(eps > 0.0)) throw PreconditionError("eps must be positive");
  CandidateIntegral c;
  c.eval = [rho, eps](double x, double y) { return darboux_integral(rho, x, y, eps).value; };
  c.description = "darboux integral of " + to_string(rho.body()) + " (eps " + num(eps) + ")";
  c.domain = rho.domain();
  return c;
}

IntegralResult integrate(const Function& rho, double a, double b, double eps) {
  if (!(eps > 0.0)) throw PreconditionError("eps must be positive");
  check_interval(rho, a, b);
  if (!rho.has_antiderivative()) return darboux_integral(rho, a, b, eps);

  spot_check_antiderivative(rho, std::min(a, b), std::max(a, b));
  const double ra = rho.antiderivative_at(a);
  const double rb = rho.antiderivative_at(b);
  IntegralResult r;
  r.method = IntegrationMethod::ftc;
  r.value = a == b ? 0.0 : rb - ra;
  r.error_bound = a == b ? 0.0 : 4.0 * ulp(std::max(std::fabs(ra), std::fabs(rb)));
  r.evaluations = 2;
  return r;
}

AxiomReport verify_additivity(const CandidateIntegral& I, double a, double b, int trials, std::uint64_t seed,
                              double tol) {
  if (trials < 1) throw PreconditionError("trials must be at least 1");
  if (!(a < b)) throw PreconditionError("additivity check needs a < b");
  if (!(tol > 0.0)) throw PreconditionError("tol must be positive");

  AxiomReport report;
  report.axiom = Axiom::additivity;
  report.tolerance = tol;
  report.seed = seed;

  std::vector<std::vector<double>> sites{{a, a, b}, {a, b, b}};
  SplitMix64 rng(seed);
  for (int i = 0; i < trials; ++i) {
    const double x = rng.uniform(a, b);
    const double y = rng.uniform(a, b);
    const double z = rng.uniform(a, b);
    sites.push_back({x, y, z});
  }

  std::size_t failures = 0;
  for (auto& site : sites) {
    AxiomTrial t;
    t.site = site;
    try {
      const double xy = I(site[0], site[1]);
      const double yz = I(site[1], site[2]);
      const double xz = I(site[0], site[2]);
      t.residual = std::fabs(xy + yz - xz) / (1.0 + std::fabs(xz));
      if (!std::isfinite(t.residual)) throw EvaluationError("non-finite additivity residual");
    } catch (const Error& e) {
      ++failures;
      t.residual = std::numeric_limits<double>::infinity();
      t.error = std::string(e.kind()) + ": " + e.what();
    }
    report.max_residual = std::max(report.max_residual, t.residual);
    report.trials.push_back(std::move(t));
  }
  if (static_cast<double>(failures) > kMaxFailureFraction * static_cast<double>(sites.size()))
    throw ReportError(std::to_string(failures) + " of " + std::to_string(sites.size()) +
                      " additivity trials failed to evaluate; first: " +
                      std::find_if(report.trials.begin(), report.trials.end(), [](const AxiomTrial& t) {
                        return t.error.has_value();
                      })->error.value());
  report.pass = report.max_residual <= tol;
  return report;
}

AxiomReport verify_asymptotic(const CandidateIntegral& I, const Function& rho, const std::vector<double>& points,
                              const HSchedule& schedule, double tol) {
  if (points.empty()) throw PreconditionError("asymptotic check needs at least one point");
  if (!(tol > 0.0)) throw PreconditionError("tol must be positive");

  AxiomReport report;
  report.axiom = Axiom::asymptotic;
  report.tolerance = tol;

  for (double x : points) {
    AxiomTrial t;
    t.site = {x};
    try {
      if (!I.domain.contains(x)) throw PreconditionError("point " + num(x) + " leaves the candidate's domain");
      const HSchedule fitted = fit_schedule(schedule, x, I.domain.lo, I.domain.hi);
      const double density = rho(x);
      LimitOptions opt;
      opt.noise_scale = [&](double h) {
        const double step = std::fabs((x + h) - x);
        return 1.0 + (I.magnitude + std::fabs(I(x, x + h)) + std::fabs(density * step)) / step;
      };
      const LimitEstimate est = estimate_limit(
          [&](double h) {
            const double step = (x + h) - x;
            if (step == 0.0) throw EvaluationError("step h = " + num(h) + " vanishes against x = " + num(x));
            return (I(x, x + h) - density * step) / step;
          },
          fitted, tol, opt);
      t.residual = std::max(std::fabs(est.value), est.residual);
      t.estimate = est;
    } catch (const Error& e) {
      t.residual = std::numeric_limits<double>::infinity();
      t.error = std::string(e.kind()) + ": " + e.what();
    }
    report.max_residual = std::max(report.max_residual, t.residual);
    report.trials.push_back(std::move(t));
  }
  report.pass = report.max_residual <= tol;
  return report;
}

UniquenessCheck uniqueness_crosscheck(const Function& rho, double a, double b, double eps) {
  if (!rho.has_antiderivative()) throw PreconditionError("uniqueness cross-check needs an antiderivative");
  UniquenessCheck out;
  out.ftc_value = integrate(rho, a, b, eps).value;
  try {
    const IntegralResult d = darboux_integral(rho, a, b, eps);
    out.darboux_value = d.value;
    out.bracket = *d.bracket;
  } catch (const NoConvergenceError& e) {
    DarbouxBracket best = e.best();
    if (a > b) best = DarbouxBracket{-best.upper, -best.lower, best.partition_size, best.samples_per_cell, best.width};
    out.bracket = best;
    out.darboux_value = 0.5 * (best.lower + best.upper);
    out.certified = false;
  }
  out.discrepancy = std::fabs(out.ftc_value - out.darboux_value);
  return out;
}

}  // namespace axioquad
