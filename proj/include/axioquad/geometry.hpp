#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "axioquad/asymptotics.hpp"
#include "axioquad/darboux.hpp"
#include "axioquad/expr.hpp"
#include "axioquad/integral.hpp"

namespace axioquad {

enum class ModelKind { rectangle, chord, shell };

// Elementary Euclidean quantity over [x, x+h] that a geometric functional
// matches to first order in h.
//   rectangle: f(x) |h|
//   chord:     sqrt(dx^2 + (f(x+dx) - f(x))^2), dx = (x+h) - x
//   shell:     |pi (x+h)^2 - pi x^2| f(x)
struct LocalModel {
  ModelKind kind = ModelKind::rectangle;
  LocalFn quantity;
  // Size of the terms the quantity subtracts internally, for noise-floor
  // detection during coefficient extraction.
  LocalFn noise_magnitude;
  Function source;

  double operator()(double x, double h) const { return quantity(x, h); }
};

[[nodiscard]] LocalModel rectangle_model(const Function& f);
[[nodiscard]] LocalModel chord_model(const Function& f);
[[nodiscard]] LocalModel shell_model(const Function& f);
[[nodiscard]] std::string_view model_name(ModelKind k) noexcept;

struct RhoSample {
  double x = 0.0;
  double extracted = 0.0;
  double closed_form = 0.0;
};

enum class GeometricMethod { closed_form, extracted };

struct GeometricResult {
  double value = 0.0;
  std::string closed_form_integrand;
  std::vector<RhoSample> extracted_rho_samples;
  std::optional<double> oracle_value;  // left-endpoint accumulation of the local model
  GeometricMethod method = GeometricMethod::closed_form;
  double extraction_tolerance = 1e-4;
  IntegralResult integral;
};

// The curve is not continuously differentiable on the sample grid.
class NotC1Error : public Error {
 public:
  using Error::Error;
  [[nodiscard]] std::string_view kind() const noexcept override { return "not-c1"; }
};

// A coefficient extracted from the local model disagrees with the
// closed-form integrand.
class ExtractionMismatchError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] std::string_view kind() const noexcept override { return "extraction-mismatch"; }
};

// Integrand expressions of the three functionals.
[[nodiscard]] Expression arclength_integrand(const Function& f);
[[nodiscard]] Expression shell_integrand(const Function& f);

[[nodiscard]] GeometricResult area_under_curve(const Function& f, double a, double b, double eps = kDefaultEps);
[[nodiscard]] GeometricResult arclength(const Function& f, double a, double b, double eps = kDefaultEps);
[[nodiscard]] GeometricResult volume_of_revolution_shells(const Function& f, double a, double b,
                                                          double eps = kDefaultEps);

// Sum of Q(a + k h, h), k = 0..n-1, h = (b - a)/n.
[[nodiscard]] double accumulate_local_model(const LocalModel& q, double a, double b, std::size_t n);

// Points where coefficients are extracted: nine, evenly spaced, at least one
// schedule step h0 inside [a, b] when the interval allows it.
[[nodiscard]] std::vector<double> extraction_points(double a, double b, const HSchedule& schedule = {});

// Coefficient of h in q at x, two-sided where [a, b] allows.
[[nodiscard]] CoefficientEstimate extract_model_coefficient(const LocalModel& q, double x, double a, double b,
                                                            const HSchedule& schedule = {},
                                                            double tol = kDefaultLimitTol);

// first: additivity of the functional; second: functional(x, x+h) = +-Q(x, h) + o(h)
// as h -> 0+-, at the extraction points.
[[nodiscard]] std::pair<AxiomReport, AxiomReport> verify_geometric_axioms(
    const CandidateIntegral& functional, const LocalModel& q, double a, double b, int trials = 200,
    const HSchedule& schedule = {}, double tol = 1e-4, std::uint64_t seed = kDefaultSeed);

[[nodiscard]] std::string_view geometric_method_name(GeometricMethod m) noexcept;

}  // namespace axioquad
