#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "axioquad/error.hpp"
#include "axioquad/expr.hpp"

namespace axioquad {

using ScalarFn = std::function<double(double)>;
// Local quantity Q(x, h).
using LocalFn = std::function<double(double, double)>;

enum class Side { positive, negative, both };

// Steps h0 * ratio^k, k = 0..count-1, on the requested side(s) of 0.
struct HSchedule {
  double h0 = 0.125;
  double ratio = 0.5;
  int count = 40;
  Side side = Side::both;

  void validate() const;
  [[nodiscard]] std::vector<double> steps(double sign) const;
  [[nodiscard]] bool has_positive() const noexcept { return side != Side::negative; }
  [[nodiscard]] bool has_negative() const noexcept { return side != Side::positive; }
};

// The default schedule restricted to the sides of x whose first step stays
// inside [lo, hi]. If neither fits, h0 is shrunk to fit the roomier side.
[[nodiscard]] HSchedule fit_schedule(HSchedule schedule, double x, double lo, double hi);

struct Sample {
  double h;
  double g;
};

struct LimitEstimate {
  double value = 0.0;
  double residual = 0.0;
  // Per side in strictly decreasing |h|; with both sides the positive-side
  // samples come first.
  std::vector<Sample> samples;
  bool converged = false;
  bool noise_floor_hit = false;
  Side side = Side::both;
  // One-sided limits when both sides were taken.
  std::optional<double> positive_limit;
  std::optional<double> negative_limit;
  [[nodiscard]] double side_gap() const noexcept {
    return positive_limit && negative_limit ? *positive_limit - *negative_limit : 0.0;
  }
};

struct OrderFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::optional<double> r_squared;
  std::vector<double> window;
  int zeros_dropped = 0;
  bool exact_zero = false;  // g vanished on every step; slope is +inf
};

struct LittleODecision {
  bool verdict = false;
  LimitEstimate evidence;
  // Set when the limit hit the noise floor: log-log fit of g/h^n on the
  // clean window, which then decides (slope >= 0.25, r^2 >= 0.99).
  std::optional<OrderFit> order_evidence;
};

struct CoefficientEstimate {
  double rho = 0.0;
  LimitEstimate evidence;
};

// Fewer than four samples survived noise-floor trimming.
class InsufficientDataError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] std::string_view kind() const noexcept override { return "insufficient-data"; }
};

// The h > 0 and h < 0 coefficient estimates disagree beyond tolerance.
class AsymmetryError : public Error {
 public:
  AsymmetryError(double positive, double negative, double tol);
  [[nodiscard]] std::string_view kind() const noexcept override { return "asymmetry"; }
  [[nodiscard]] double positive() const noexcept { return positive_; }
  [[nodiscard]] double negative() const noexcept { return negative_; }

 private:
  double positive_;
  double negative_;
};

inline constexpr double kDefaultLimitTol = 1e-6;

struct LimitOptions {
  // Magnitude of the quantities whose difference g(h) computes; rounding
  // noise in g(h) is about machine epsilon times this. Defaults to 1 + |g(h)|.
  ScalarFn noise_scale;
  // Points from the end of the clean window used for extrapolation.
  int extrapolation_points = 6;
};

// Limit of g(h) as h -> 0 by one-step Richardson extrapolation over the
// clean part of the schedule.
[[nodiscard]] LimitEstimate estimate_limit(const ScalarFn& g, const HSchedule& schedule = {},
                                           double tol = kDefaultLimitTol, const LimitOptions& options = {});

// Least-squares exponent p in |g(h)| ~ C |h|^p.
[[nodiscard]] OrderFit fit_order(const ScalarFn& g, const HSchedule& schedule = {},
                                 const LimitOptions& options = {});

// g = o(h^n): g(h)/h^n -> 0. options.noise_scale, when set, is the size of
// the terms g(h) itself subtracts (before the division by h^n).
[[nodiscard]] LittleODecision is_little_o(const ScalarFn& g, int n, const HSchedule& schedule = {},
                                          double tol = kDefaultLimitTol, const LimitOptions& options = {});

// (f(x+h) - f(x) - slope*h)/h -> 0 certifies that f is differentiable at x
// with derivative `slope`. The step actually taken, (x+h)-x, is used so the
// rounding of x+h does not leak into the quotient.
[[nodiscard]] LimitEstimate check_increment(const ScalarFn& f, double slope, double x,
                                            const HSchedule& schedule = {}, double tol = kDefaultLimitTol,
                                            double magnitude = 1.0);

// check_increment with f' from the function (supplied or symbolic). x must be
// interior to f's domain; sides that would leave the domain are dropped.
[[nodiscard]] LimitEstimate check_increment_theorem(const Function& f, double x, const HSchedule& schedule = {},
                                                    double tol = kDefaultLimitTol);

struct CoefficientOptions {
  std::optional<Interval> domain;  // keep x + h inside; drops sides that leave it
  LocalFn noise_scale;             // see LimitOptions; receives (x, h)
};

// rho(x) = lim Q(x,h)/h for h -> 0+ and lim -Q(x,h)/h for h -> 0-.
// Throws AsymmetryError when the two sides disagree beyond tol.
[[nodiscard]] CoefficientEstimate extract_coefficient(const LocalFn& q, double x, const HSchedule& schedule = {},
                                                      double tol = kDefaultLimitTol,
                                                      const CoefficientOptions& options = {});

}  // namespace axioquad
