#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "axioquad/integral.hpp"
#include "oracles.hpp"

using namespace axioquad;

namespace {

CandidateIntegral lambda_candidate(std::function<double(double, double)> f, Interval d) {
  CandidateIntegral c;
  c.eval = std::move(f);
  c.domain = d;
  c.description = "test";
  return c;
}

}  // namespace

TEST_CASE("SplitMix64 reference stream") {
  SplitMix64 r(0);
  CHECK(r.next() == 0xE220A8397B1DCDAFULL);
  CHECK(r.next() == 0x6E789E6AA1B965F4ULL);
  SplitMix64 a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    const double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("integrate examples") {
  const Function id = Function::from_source("x", {0.0, 1.0}, std::nullopt, std::string_view("x^2/2"));
  const IntegralResult r = integrate(id, 0.0, 1.0);
  CHECK(r.value == 0.5);
  CHECK(r.method == IntegrationMethod::ftc);
  CHECK(!r.bracket);

  const Function g = Function::from_source("exp(-x^2)", {0.0, 1.0});
  const IntegralResult d = integrate(g, 0.0, 1.0, 1e-6);
  CHECK(d.method == IntegrationMethod::darboux);
  CHECK(std::fabs(d.value - oracle::gauss_integral(1.0)) <= 1e-6);
  CHECK(d.bracket.has_value());

  const double half_pi = std::numbers::pi / 2;
  const Function c = Function::from_source("cos(x)", {0.0, half_pi}, std::nullopt, std::string_view("sin(x)"));
  const IntegralResult cr = integrate(c, 0.0, half_pi);
  CHECK(cr.value == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cr.error_bound > 0.0);
  CHECK(cr.error_bound < 1e-15);

  CHECK_THROWS_AS((void)integrate(g, 0.0, 2.0), PreconditionError);
  CHECK_THROWS_AS((void)integrate(g, 0.0, 1.0, -1.0), PreconditionError);
}

TEST_CASE("a wrong antiderivative is rejected") {
  const Function f = Function::from_source("x", {0.0, 1.0}, std::nullopt, std::string_view("x^2"));
  CHECK_THROWS_AS((void)integrate(f, 0.0, 1.0), BadAntiderivativeError);
}

TEST_CASE("verify_additivity examples") {
  const Interval d{0.0, 2.0};
  const AxiomReport len = verify_additivity(lambda_candidate([](double x, double y) { return y - x; }, d), 0.0, 2.0);
  CHECK(len.pass);
  CHECK(len.max_residual <= 1e-12);
  CHECK(len.trials.size() == 202);
  CHECK(len.seed == 42);
  CHECK(len.trials[0].site == std::vector<double>{0.0, 0.0, 2.0});
  CHECK(len.trials[1].site == std::vector<double>{0.0, 2.0, 2.0});

  const AxiomReport sq =
      verify_additivity(lambda_candidate([](double x, double y) { return (y - x) * (y - x); }, d), 0.0, 2.0);
  CHECK(!sq.pass);
  CHECK(sq.max_residual > 0.1);

  const Function g = Function::from_source("exp(-x^2)", {0.0, 1.0});
  const AxiomReport dg = verify_additivity(candidate_from_darboux(g, 1e-6), 0.0, 1.0, 50, 42, 1e-5);
  CHECK(dg.pass);
}

TEST_CASE("additivity reports are reproducible per seed") {
  const CandidateIntegral c = lambda_candidate([](double x, double y) { return std::sin(y) - std::sin(x); }, {0, 1});
  const AxiomReport a = verify_additivity(c, 0.0, 1.0, 30, 7);
  const AxiomReport b = verify_additivity(c, 0.0, 1.0, 30, 7);
  const AxiomReport other = verify_additivity(c, 0.0, 1.0, 30, 8);
  REQUIRE(a.trials.size() == b.trials.size());
  for (std::size_t i = 0; i < a.trials.size(); ++i) CHECK(a.trials[i].site == b.trials[i].site);
  CHECK(a.trials[5].site != other.trials[5].site);
}

TEST_CASE("failing evaluations in additivity trials") {
  const CandidateIntegral half = lambda_candidate(
      [](double x, double y) {
        if (x > 0.5 || y > 0.5) throw EvaluationError("outside");
        return y - x;
      },
      {0, 1});
  CHECK_THROWS_AS((void)verify_additivity(half, 0.0, 1.0), ReportError);

  const CandidateIntegral rare = lambda_candidate(
      [](double x, double y) {
        if (x > 0.999 && y > 0.999 && x != 1.0) throw EvaluationError("corner");
        return y - x;
      },
      {0, 1});
  const AxiomReport r = verify_additivity(rare, 0.0, 1.0);
  CHECK(r.pass);
}

TEST_CASE("verify_asymptotic examples") {
  const Function c = Function::from_source("cos(x)", {0.0, 3.0}, std::nullopt, std::string_view("sin(x)"));
  const std::vector<double> pts{0.5, 1.0, 1.5, 2.0, 2.5};
  const AxiomReport ok = verify_asymptotic(candidate_from_antiderivative(c), c, pts);
  CHECK(ok.pass);
  CHECK(ok.axiom == Axiom::asymptotic);
  REQUIRE(ok.trials.size() == 5);
  CHECK(ok.trials[0].estimate.has_value());

  const Function zero = Function::from_source("0", {0.0, 3.0});
  const AxiomReport bad =
      verify_asymptotic(lambda_candidate([](double x, double y) { return y - x; }, {0, 3}), zero, pts);
  CHECK(!bad.pass);
  for (const auto& t : bad.trials) CHECK(std::fabs(t.estimate->value - 1.0) <= 1e-6);

  const Function sq = Function::from_source("x^2", {0.0, 1.0});
  const AxiomReport dsq = verify_asymptotic(candidate_from_darboux(sq, 1e-7), sq, {0.25, 0.5, 0.75}, {}, 1e-4);
  CHECK(dsq.pass);

  // Endpoints use the one side that fits.
  const AxiomReport ends = verify_asymptotic(candidate_from_antiderivative(c), c, {0.0, 3.0});
  CHECK(ends.pass);
  CHECK(ends.trials[0].estimate->side == Side::positive);
  CHECK(ends.trials[1].estimate->side == Side::negative);
}

TEST_CASE("asymptotic failures are recorded per site") {
  const Function f = Function::from_source("x", {0.0, 1.0});
  const CandidateIntegral broken = lambda_candidate(
      [](double x, double y) {
        if (x > 0.6) throw EvaluationError("no");
        return (y * y - x * x) / 2;
      },
      {0, 1});
  const AxiomReport r = verify_asymptotic(broken, f, {0.3, 0.8});
  CHECK(!r.pass);
  CHECK(!r.trials[0].error.has_value());
  CHECK(r.trials[1].error.has_value());
  CHECK(std::isinf(r.trials[1].residual));
}

TEST_CASE("uniqueness cross-check") {
  const Function id = Function::from_source("x", {0.0, 1.0}, std::nullopt, std::string_view("x^2/2"));
  const UniquenessCheck a = uniqueness_crosscheck(id, 0.0, 1.0, 1e-6);
  CHECK(a.discrepancy <= 1e-6);
  CHECK(a.certified);

  const Function c = Function::from_source("cos(x)", {0.0, 3.0}, std::nullopt, std::string_view("sin(x)"));
  CHECK(uniqueness_crosscheck(c, 0.0, 3.0, 1e-6).discrepancy <= 1e-6);

  const Function at = Function::from_source("1/(1+x^2)", {0.0, 1.0}, std::nullopt, std::string_view("atan(x)"));
  const UniquenessCheck u = uniqueness_crosscheck(at, 0.0, 1.0, 1e-8);
  CHECK(u.ftc_value == doctest::Approx(std::numbers::pi / 4).epsilon(1e-15));
  CHECK(u.darboux_value == doctest::Approx(std::numbers::pi / 4).epsilon(1e-8));
  CHECK(u.discrepancy <= 1e-8);
  // 2^22 cells leave a bracket wider than 1e-8 for this rho.
  CHECK(!u.certified);
  CHECK(u.bracket.lower <= u.ftc_value);
  CHECK(u.ftc_value <= u.bracket.upper);

  CHECK_THROWS_AS((void)uniqueness_crosscheck(Function::from_source("x", {0.0, 1.0}), 0.0, 1.0), PreconditionError);
}

TEST_CASE("antisymmetry and zero diagonal") {
  const Function f = Function::from_source("sin(x) + x^2", {-1.0, 2.0});
  for (double a : {-1.0, 0.3})
    for (double b : {1.1, 2.0}) {
      const IntegralResult fwd = integrate(f, a, b, 1e-5);
      const IntegralResult back = integrate(f, b, a, 1e-5);
      CHECK(std::fabs(fwd.value + back.value) <= 2 * fwd.error_bound);
    }
  CHECK(integrate(f, 0.7, 0.7).value == 0.0);
}

TEST_CASE("linearity") {
  const double eps = 1e-5;
  const Interval d{0.0, 1.0};
  const Function f = Function::from_source("x^2", d);
  const Function g = Function::from_source("cos(x)", d);
  const double If = integrate(f, 0.0, 1.0, eps).value;
  const double Ig = integrate(g, 0.0, 1.0, eps).value;
  for (double c1 : {-2.0, 0.5, 3.0})
    for (double c2 : {-2.0, 0.5, 3.0}) {
      const Function h(Expression::constant(c1) * f.body() + Expression::constant(c2) * g.body(), d);
      const double Ih = integrate(h, 0.0, 1.0, eps).value;
      CHECK(std::fabs(Ih - (c1 * If + c2 * Ig)) <= (1 + std::fabs(c1) + std::fabs(c2)) * 3 * eps);
    }
}

TEST_CASE("range bound") {
  const double eps = 1e-4;
  const Function f = Function::from_source("sin(5*x) * exp(x)", {0.0, 2.0});
  double lo = INFINITY, hi = -INFINITY;
  for (int i = 0; i <= 4096; ++i) {
    const double v = f(2.0 * i / 4096);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double v = integrate(f, 0.0, 2.0, eps).value;
  CHECK(lo * 2.0 - eps <= v);
  CHECK(v <= hi * 2.0 + eps);
}

TEST_CASE("the integral as a function of its upper end has derivative rho") {
  const Function rho = Function::from_source("cos(x) + x", {0.0, 2.0});
  // I(0, x) by refinement; steps stop at 2^-13 so the remainder quotient
  // stays above the bracket error of each evaluation.
  HSchedule s;
  s.count = 11;
  for (double x : {0.4, 0.7, 1.0, 1.3, 1.6}) {
    const LimitEstimate e =
        check_increment([&](double t) { return integrate(rho, 0.0, t, 1e-5).value; }, rho(x), x, s, 1e-4);
    CHECK(e.converged);
    CHECK(std::fabs(e.value) <= 1e-4);
  }
}
