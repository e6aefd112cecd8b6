#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "axioquad/asymptotics.hpp"
#include "axioquad/darboux.hpp"
#include "axioquad/expr.hpp"

namespace axioquad {

// A candidate for the integral function I : [a, b] x [a, b] -> R.
struct CandidateIntegral {
  std::function<double(double, double)> eval;
  std::string description;
  Interval domain;
  // Typical size of the numbers I combines internally (e.g. |R| for
  // I = R(y) - R(x)). Sets the rounding noise floor in the asymptotic check.
  double magnitude = 1.0;

  double operator()(double x, double y) const { return eval(x, y); }
};

// I(x, y) = R(y) - R(x).
[[nodiscard]] CandidateIntegral candidate_from_antiderivative(const Function& rho);
// I(x, y) = darboux_integral(rho, x, y, eps).
[[nodiscard]] CandidateIntegral candidate_from_darboux(const Function& rho, double eps);

enum class Axiom { additivity, asymptotic };

struct AxiomTrial {
  std::vector<double> site;  // (x, y, z) for additivity, (x) for asymptotic
  double residual = 0.0;     // +inf when the evaluation failed
  std::optional<std::string> error;
  std::optional<LimitEstimate> estimate;  // asymptotic trials only
};

struct AxiomReport {
  Axiom axiom = Axiom::additivity;
  std::vector<AxiomTrial> trials;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::uint64_t seed = 0;
};

inline constexpr std::uint64_t kDefaultSeed = 42;

// More than 10% of the trial evaluations failed.
class ReportError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] std::string_view kind() const noexcept override { return "report"; }
};

// R' disagrees with rho at a spot-check point.
class BadAntiderivativeError : public Error {
 public:
  using Error::Error;
  [[nodiscard]] std::string_view kind() const noexcept override { return "bad-antiderivative"; }
};

// SplitMix64. Deterministic across platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}
  std::uint64_t next() noexcept;
  // Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  // Independent generator derived from this one's stream.
  SplitMix64 split() noexcept { return SplitMix64(next()); }

 private:
  std::uint64_t state_;
};

// Antiderivative route when rho carries one (after a spot check of R' = rho),
// Darboux refinement otherwise.
[[nodiscard]] IntegralResult integrate(const Function& rho, double a, double b, double eps = kDefaultEps);

// |I(x,y) + I(y,z) - I(x,z)| / (1 + |I(x,z)|) over `trials` random triples
// in [a,b]^3 plus the fixed triples (a,a,b) and (a,b,b).
[[nodiscard]] AxiomReport verify_additivity(const CandidateIntegral& I, double a, double b, int trials = 200,
                                            std::uint64_t seed = kDefaultSeed, double tol = 1e-9);

// Per point x: limit of (I(x, x+h) - rho(x) h)/h, which must be 0. Points
// near the ends of I's domain use the side that fits.
[[nodiscard]] AxiomReport verify_asymptotic(const CandidateIntegral& I, const Function& rho,
                                            const std::vector<double>& points, const HSchedule& schedule = {},
                                            double tol = kDefaultLimitTol);

struct UniquenessCheck {
  double ftc_value = 0.0;
  double darboux_value = 0.0;
  double discrepancy = 0.0;
  DarbouxBracket bracket;
  // False when refinement hit the cell cap before reaching eps; the values
  // then come from the narrowest bracket reached.
  bool certified = true;
};

// Two independent constructions of the integral, which must agree.
[[nodiscard]] UniquenessCheck uniqueness_crosscheck(const Function& rho, double a, double b, double eps = kDefaultEps);

[[nodiscard]] std::string_view axiom_name(Axiom a) noexcept;

}  // namespace axioquad
