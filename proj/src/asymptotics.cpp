#include "axioquad/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

namespace axioquad {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kNoiseFactor = 64.0;
constexpr int kMinSamples = 4;
constexpr double kLittleOSlopeMargin = 0.25;
constexpr double kLittleOMinR2 = 0.99;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct OneSided {
  double value = 0.0;
  double residual = 0.0;
  std::vector<Sample> samples;
  std::size_t clean = 0;  // samples[0, clean) form the clean window
  bool noise_floor_hit = false;
};

std::vector<Sample> sample(const ScalarFn& g, const std::vector<double>& steps) {
  std::vector<Sample> out;
  out.reserve(steps.size());
  for (double h : steps) {
    const double v = g(h);
    if (!std::isfinite(v)) throw EvaluationError("g(h) is not finite at h = " + num(h));
    out.push_back({h, v});
  }
  return out;
}

// Index of the first dirty sample: differences of g stopped shrinking and
// are already at the rounding level of the inputs.
std::size_t clean_prefix(const std::vector<Sample>& s, const ScalarFn& noise_scale, bool& hit) {
  hit = false;
  auto scale = [&](std::size_t k) { return noise_scale ? noise_scale(s[k].h) : 1.0 + std::fabs(s[k].g); };
  for (std::size_t j = 2; j < s.size(); ++j) {
    const double prev = std::fabs(s[j - 1].g - s[j - 2].g);
    const double cur = std::fabs(s[j].g - s[j - 1].g);
    if (cur > 0.0 && cur >= prev && cur <= kNoiseFactor * kEps * std::max(scale(j - 1), scale(j))) {
      hit = true;
      return j;
    }
  }
  return s.size();
}

OneSided one_sided(const ScalarFn& g, const std::vector<double>& steps, double ratio, const LimitOptions& opt) {
  OneSided r;
  r.samples = sample(g, steps);
  r.clean = clean_prefix(r.samples, opt.noise_scale, r.noise_floor_hit);
  if (r.clean < static_cast<std::size_t>(kMinSamples)) {
    // g is flat from the first step: every early difference already sits at
    // the rounding level, so there is nothing to extrapolate.
    const std::size_t k = std::min<std::size_t>(r.samples.size(), kMinSamples + 1);
    auto scale = [&](std::size_t i) {
      return opt.noise_scale ? opt.noise_scale(r.samples[i].h) : 1.0 + std::fabs(r.samples[i].g);
    };
    bool flat = r.noise_floor_hit && k > 1;
    double spread = 0.0;
    for (std::size_t i = 1; flat && i < k; ++i) {
      const double d = std::fabs(r.samples[i].g - r.samples[i - 1].g);
      flat = d <= kNoiseFactor * kEps * std::max(scale(i - 1), scale(i));
      spread = std::max(spread, d);
    }
    if (flat) {
      r.value = r.samples[0].g;
      r.residual = spread;
      return r;
    }
    throw InsufficientDataError("only " + std::to_string(r.clean) + " clean samples before the noise floor (need " +
                                std::to_string(kMinSamples) + ")");
  }
  const std::size_t m = std::min<std::size_t>(r.clean, std::max(opt.extrapolation_points, kMinSamples));
  const std::size_t first = r.clean - m;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double last = 0.0;
  for (std::size_t i = first; i + 1 < r.clean; ++i) {
    // Eliminates a leading C*h error term.
    last = (r.samples[i + 1].g - ratio * r.samples[i].g) / (1.0 - ratio);
    lo = std::min(lo, last);
    hi = std::max(hi, last);
  }
  r.value = last;
  r.residual = hi - lo;
  return r;
}

}  // namespace

void HSchedule::validate() const {
  if (!(h0 > 0.0) || !std::isfinite(h0)) throw PreconditionError("schedule h0 must be positive");
  if (!(ratio > 0.0 && ratio < 1.0)) throw PreconditionError("schedule ratio must lie in (0, 1)");
  if (count < 1) throw PreconditionError("schedule count must be positive");
}

std::vector<double> HSchedule::steps(double sign) const {
  std::vector<double> out(static_cast<std::size_t>(count));
  double h = h0;
  for (auto& s : out) {
    s = sign * h;
    h *= ratio;
  }
  return out;
}

HSchedule fit_schedule(HSchedule schedule, double x, double lo, double hi) {
  schedule.validate();
  const double room_pos = hi - x;
  const double room_neg = x - lo;
  const bool want_pos = schedule.has_positive();
  const bool want_neg = schedule.has_negative();
  const bool pos_ok = want_pos && schedule.h0 <= room_pos;
  const bool neg_ok = want_neg && schedule.h0 <= room_neg;
  if (pos_ok && neg_ok) return schedule;
  if (pos_ok) {
    schedule.side = Side::positive;
    return schedule;
  }
  if (neg_ok) {
    schedule.side = Side::negative;
    return schedule;
  }
  const double best_pos = want_pos ? room_pos : 0.0;
  const double best_neg = want_neg ? room_neg : 0.0;
  if (!(std::max(best_pos, best_neg) > 0.0))
    throw PreconditionError("no room for a step schedule at x = " + num(x));
  schedule.side = best_pos >= best_neg ? Side::positive : Side::negative;
  schedule.h0 = std::max(best_pos, best_neg);
  return schedule;
}

AsymmetryError::AsymmetryError(double positive, double negative, double tol)
    : Error("one-sided coefficients disagree: h->0+ gives " + num(positive) + ", h->0- gives " + num(negative) +
            " (tolerance " + num(tol) + ")"),
      positive_(positive),
      negative_(negative) {}

LimitEstimate estimate_limit(const ScalarFn& g, const HSchedule& schedule, double tol, const LimitOptions& options) {
  schedule.validate();
  if (!(tol > 0.0)) throw PreconditionError("tol must be positive");
  LimitEstimate est;
  est.side = schedule.side;
  std::optional<OneSided> pos, neg;
  if (schedule.has_positive()) pos = one_sided(g, schedule.steps(1.0), schedule.ratio, options);
  if (schedule.has_negative()) neg = one_sided(g, schedule.steps(-1.0), schedule.ratio, options);

  for (auto* s : {&pos, &neg}) {
    if (!*s) continue;
    est.samples.insert(est.samples.end(), (*s)->samples.begin(), (*s)->samples.end());
    est.noise_floor_hit = est.noise_floor_hit || (*s)->noise_floor_hit;
  }
  if (pos && neg) {
    est.positive_limit = pos->value;
    est.negative_limit = neg->value;
    est.value = 0.5 * (pos->value + neg->value);
    est.residual = std::max({pos->residual, neg->residual, std::fabs(pos->value - neg->value)});
  } else {
    const OneSided& s = pos ? *pos : *neg;
    est.value = s.value;
    est.residual = s.residual;
  }
  est.converged = est.residual <= tol;
  return est;
}

OrderFit fit_order(const ScalarFn& g, const HSchedule& schedule, const LimitOptions& options) {
  schedule.validate();
  const auto samples = sample(g, schedule.steps(schedule.has_positive() ? 1.0 : -1.0));
  bool hit = false;
  const std::size_t clean = clean_prefix(samples, options.noise_scale, hit);

  OrderFit fit;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < clean; ++i) {
    if (samples[i].g == 0.0) {
      ++fit.zeros_dropped;
      continue;
    }
    xs.push_back(std::log(std::fabs(samples[i].h)));
    ys.push_back(std::log(std::fabs(samples[i].g)));
    fit.window.push_back(samples[i].h);
  }
  if (xs.empty() && fit.zeros_dropped > 0) {
    fit.exact_zero = true;
    fit.slope = std::numeric_limits<double>::infinity();
    return fit;
  }
  if (xs.size() < static_cast<std::size_t>(kMinSamples))
    throw InsufficientDataError("order fit needs at least 4 nonzero clean samples, got " + std::to_string(xs.size()));

  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  const bool distinct = std::any_of(ys.begin(), ys.end(), [&](double y) { return y != ys.front(); });
  if (distinct && syy > 0.0) {
    double ss_res = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
      ss_res += r * r;
    }
    fit.r_squared = std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  }
  return fit;
}

LittleODecision is_little_o(const ScalarFn& g, int n, const HSchedule& schedule, double tol,
                            const LimitOptions& options) {
  if (n < 0) throw PreconditionError("little-o order n must be >= 0");
  LimitOptions scaled = options;
  if (options.noise_scale)
    scaled.noise_scale = [&](double h) { return 1.0 + std::fabs(options.noise_scale(h)) / std::pow(std::fabs(h), n); };
  LittleODecision d;
  d.evidence = estimate_limit([&](double h) { return g(h) / std::pow(h, n); }, schedule, tol, scaled);
  d.verdict = d.evidence.converged && std::fabs(d.evidence.value) <= tol;
  if (d.verdict || !d.evidence.noise_floor_hit) return d;

  // Rounding stopped the limit short of tol. Fall back on the order of
  // g/h^n over the clean window: a clean positive slope still means -> 0.
  const ScalarFn q = [&](double h) { return g(h) / std::pow(h, n); };
  bool decided = true;
  for (Side side : {Side::positive, Side::negative}) {
    if ((side == Side::positive && !schedule.has_positive()) || (side == Side::negative && !schedule.has_negative()))
      continue;
    HSchedule one = schedule;
    one.side = side;
    try {
      OrderFit fit = fit_order(q, one, scaled);
      const bool clean = fit.exact_zero ||
                         (fit.slope >= kLittleOSlopeMargin && fit.r_squared && *fit.r_squared >= kLittleOMinR2);
      decided = decided && clean;
      if (!d.order_evidence || fit.slope < d.order_evidence->slope) d.order_evidence = std::move(fit);
    } catch (const InsufficientDataError&) {
      decided = false;
    }
  }
  d.verdict = decided && d.order_evidence.has_value();
  return d;
}

LimitEstimate check_increment(const ScalarFn& f, double slope, double x, const HSchedule& schedule, double tol,
                              double magnitude) {
  const double fx = f(x);
  LimitOptions opt;
  opt.noise_scale = [&](double h) {
    const double step = std::fabs((x + h) - x);
    return 1.0 + (magnitude + std::fabs(fx) + std::fabs(f(x + h))) / step;
  };
  return estimate_limit(
      [&](double h) {
        const double step = (x + h) - x;
        if (step == 0.0) throw EvaluationError("step h = " + num(h) + " vanishes against x = " + num(x));
        return (f(x + h) - fx - slope * step) / step;
      },
      schedule, tol, opt);
}

LimitEstimate check_increment_theorem(const Function& f, double x, const HSchedule& schedule, double tol) {
  const Interval& dom = f.domain();
  if (!(dom.lo < x && x < dom.hi))
    throw PreconditionError("increment check needs x interior to [" + num(dom.lo) + ", " + num(dom.hi) + "], got " +
                            num(x));
  const HSchedule fitted = fit_schedule(schedule, x, dom.lo, dom.hi);
  return check_increment([&](double t) { return f(t); }, f.derivative_at(x), x, fitted, tol);
}

CoefficientEstimate extract_coefficient(const LocalFn& q, double x, const HSchedule& schedule, double tol,
                                        const CoefficientOptions& options) {
  const HSchedule fitted = options.domain ? fit_schedule(schedule, x, options.domain->lo, options.domain->hi)
                                          : (schedule.validate(), schedule);
  LimitOptions opt;
  if (options.noise_scale)
    opt.noise_scale = [&](double h) {
      return 1.0 + std::fabs(q(x, h) / h) + std::fabs(options.noise_scale(x, h)) / std::fabs(h);
    };
  std::optional<LimitEstimate> pos, neg;
  if (fitted.has_positive()) {
    HSchedule s = fitted;
    s.side = Side::positive;
    pos = estimate_limit([&](double h) { return q(x, h) / h; }, s, tol, opt);
  }
  if (fitted.has_negative()) {
    HSchedule s = fitted;
    s.side = Side::negative;
    neg = estimate_limit([&](double h) { return -q(x, h) / h; }, s, tol, opt);
  }

  CoefficientEstimate out;
  if (pos && neg) {
    if (std::fabs(pos->value - neg->value) > tol) throw AsymmetryError(pos->value, neg->value, tol);
    LimitEstimate& e = out.evidence;
    e.side = Side::both;
    e.samples = pos->samples;
    e.samples.insert(e.samples.end(), neg->samples.begin(), neg->samples.end());
    e.positive_limit = pos->value;
    e.negative_limit = neg->value;
    e.value = 0.5 * (pos->value + neg->value);
    e.residual = std::max({pos->residual, neg->residual, std::fabs(pos->value - neg->value)});
    e.noise_floor_hit = pos->noise_floor_hit || neg->noise_floor_hit;
    e.converged = e.residual <= tol;
  } else {
    out.evidence = pos ? *pos : *neg;
  }
  out.rho = out.evidence.value;
  return out;
}

}  // namespace axioquad
