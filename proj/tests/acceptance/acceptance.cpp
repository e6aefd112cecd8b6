// One line per acceptance criterion; exit status 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "axioquad/asymptotics.hpp"
#include "axioquad/cli.hpp"
#include "axioquad/darboux.hpp"
#include "axioquad/geometry.hpp"
#include "axioquad/integral.hpp"
#include "oracles.hpp"

using namespace axioquad;

namespace {

constexpr double kPi = std::numbers::pi;

struct Check {
  bool ok = true;
  std::string why;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) why = what;
    ok = ok && cond;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

HSchedule positive_schedule() {
  HSchedule s;
  s.side = Side::positive;
  s.count = 60;
  return s;
}

Check c1() {
  Check c;
  const Function g = Function::from_source("exp(-x^2)", {0.0, 1.0});
  const IntegralResult r = integrate(g, 0.0, 1.0, 1e-6);
  c.expect(std::fabs(r.value - oracle::gauss_integral(1.0)) <= 1e-6, "value " + fmt("%.12g", r.value));
  c.expect(r.evaluations < 10'000'000, "evaluations " + std::to_string(r.evaluations));
  return c;
}

Check c2() {
  Check c;
  struct Pair {
    const char* rho;
    const char* F;
  };
  const Pair family[] = {{"x", "x^2/2"}, {"cos(x)", "sin(x)"}, {"1/(1+x^2)", "atan(x)"}};
  const std::pair<double, double> intervals[] = {{0.0, 1.0}, {-1.0, 2.0}, {0.5, 3.0}};
  for (const Pair& p : family)
    for (auto [a, b] : intervals) {
      const Function f = Function::from_source(p.rho, {a, b}, std::nullopt, std::string_view(p.F));
      const UniquenessCheck u = uniqueness_crosscheck(f, a, b, 1e-8);
      c.expect(std::fabs(u.ftc_value - u.darboux_value) <= 1e-7,
               std::string(p.rho) + " on [" + fmt("%g", a) + ", " + fmt("%g", b) + "]: " + fmt("%.3g", u.discrepancy));
    }
  return c;
}

// Darboux candidates for criteria 3 and 4 are built at this eps; see the
// README on the cost of tighter brackets.
constexpr double kCandidateEps = 1e-4;

Check c3() {
  Check c;
  for (const char* s : {"x^2", "cos(x)", "exp(-x^2)"}) {
    const Function f = Function::from_source(s, {0.0, 2.0});
    const AxiomReport r = verify_additivity(candidate_from_darboux(f, kCandidateEps), 0.0, 2.0, 200, 42, 1e-5);
    c.expect(r.pass, std::string(s) + " max_residual " + fmt("%.3g", r.max_residual));
  }
  CandidateIntegral sq;
  sq.eval = [](double x, double y) { return (y - x) * (y - x); };
  sq.domain = {0.0, 2.0};
  c.expect(!verify_additivity(sq, 0.0, 2.0, 200, 42, 1e-5).pass, "(y-x)^2 passed");
  return c;
}

Check c4() {
  Check c;
  const std::vector<double> pts{2.0 / 6, 4.0 / 6, 1.0, 8.0 / 6, 10.0 / 6};
  for (const char* s : {"x^2", "cos(x)", "exp(-x^2)"}) {
    const Function f = Function::from_source(s, {0.0, 2.0});
    const AxiomReport r = verify_asymptotic(candidate_from_darboux(f, kCandidateEps), f, pts, {}, 1e-4);
    c.expect(r.pass && r.trials.size() == 5, std::string(s) + " max_residual " + fmt("%.3g", r.max_residual));
  }
  CandidateIntegral len;
  len.eval = [](double x, double y) { return y - x; };
  len.domain = {0.0, 2.0};
  const AxiomReport bad = verify_asymptotic(len, Function::from_source("0", {0.0, 2.0}), pts, {}, 1e-4);
  c.expect(!bad.pass, "y-x against rho=0 passed");
  for (const auto& t : bad.trials)
    c.expect(t.estimate && std::fabs(t.estimate->value - 1.0) <= 1e-6, "limit estimate is not 1");
  return c;
}

Check c5() {
  Check c;
  const double s2 = fit_order([](double h) { return h * h; }).slope;
  const double s1 = fit_order([](double h) { return std::sin(h); }).slope;
  c.expect(std::fabs(s2 - 2.0) <= 0.05, "h^2 slope " + fmt("%.4f", s2));
  c.expect(std::fabs(s1 - 1.0) <= 0.05, "sin slope " + fmt("%.4f", s1));
  c.expect(!is_little_o([](double h) { return std::sin(h); }, 1).verdict, "sin = o(h)");
  c.expect(is_little_o([](double h) { return std::sin(h); }, 0).verdict, "sin != o(1)");
  return c;
}

Check c6() {
  Check c;
  const Interval d{-1.0, 2.0};
  for (const char* s : {"x^2", "exp(-x^2)", "sin(x)"}) {
    const Function f = Function::from_source(s, d);
    for (int i = 1; i <= 5; ++i) {
      const double x = d.lo + (d.hi - d.lo) * i / 6;
      const LimitEstimate e = check_increment_theorem(f, x);
      c.expect(e.converged && std::fabs(e.value) <= 1e-6, std::string(s) + " at " + fmt("%g", x));
    }
  }
  const LimitEstimate ab = check_increment_theorem(Function::from_source("abs(x)", {-1.0, 1.0}), 0.0);
  c.expect(!ab.converged, "|x| converged at 0");
  c.expect(std::fabs(std::fabs(ab.side_gap()) - 2.0) <= 1e-9, "|x| gap " + fmt("%.12g", ab.side_gap()));
  return c;
}

Check c7() {
  Check c;
  const GeometricResult line = arclength(Function::from_source("2*x", {0.0, 3.0}), 0.0, 3.0);
  c.expect(std::fabs(line.value - 3 * std::sqrt(5.0)) <= 1e-9, "2x: " + fmt("%.12g", line.value));
  const Function f = Function::from_source("x^1.5", {0.0, 1.0});
  const GeometricResult curve = arclength(f, 0.0, 1.0);
  c.expect(std::fabs(curve.value - oracle::arclength_x15()) <= 1e-6, "x^1.5: " + fmt("%.12g", curve.value));
  const LocalModel q = chord_model(f);
  for (int i = 0; i < 9; ++i) {
    const double x = 0.1 + 0.1 * i;
    const double want = std::sqrt(1 + 2.25 * x);
    const double got = extract_model_coefficient(q, x, 0.0, 1.0, {}, 1e-4).rho;
    c.expect(std::fabs(got - want) <= 1e-4, "chord rho at " + fmt("%g", x) + ": " + fmt("%.10g", got));
  }
  return c;
}

Check c8() {
  Check c;
  const GeometricResult r = area_under_curve(Function::from_source("sqrt(1-x^2)", {-1.0, 1.0}), -1.0, 1.0, 1e-5);
  c.expect(std::fabs(r.value - kPi / 2) <= 1e-5, "value " + fmt("%.12g", r.value));
  c.expect(r.integral.method == IntegrationMethod::darboux, "not the darboux path");
  return c;
}

Check c9() {
  Check c;
  const GeometricResult r = volume_of_revolution_shells(Function::from_source("1", {1.0, 2.0}), 1.0, 2.0, 1e-5);
  c.expect(std::fabs(r.value - 3 * kPi) <= 1e-8, "value " + fmt("%.15g", r.value));
  c.expect(r.extracted_rho_samples.size() == 9, "sample count");
  for (const RhoSample& s : r.extracted_rho_samples)
    c.expect(std::fabs(s.extracted - 2 * kPi * s.x) <= 1e-4, "shell rho at " + fmt("%g", s.x));
  return c;
}

Check c10() {
  Check c;
  auto fam = [](int m) { return [m](double h) { return std::pow(h, m) * std::sqrt(h); }; };
  for (int m = 0; m <= 3; ++m)
    for (int n = 0; n <= 3; ++n) {
      const auto g1 = fam(m), g2 = fam(n);
      const std::string site = " m=" + std::to_string(m) + " n=" + std::to_string(n);
      c.expect(is_little_o([&](double h) { return g1(h) + g2(h); }, std::min(m, n), positive_schedule()).verdict,
               "sum" + site);
      c.expect(is_little_o([&](double h) { return g1(h) - g2(h); }, std::min(m, n), positive_schedule()).verdict,
               "difference" + site);
      c.expect(is_little_o([&](double h) { return g1(h) * g2(h); }, m + n, positive_schedule()).verdict,
               "product" + site);
    }
  for (double A : {-3.0, 0.0, 2.5})
    for (int m = 0; m <= 3; ++m)
      for (int n = 0; n <= m; ++n) {
        const auto g = fam(m);
        LimitOptions opt;
        opt.noise_scale = [&](double h) { return std::fabs(A) + std::fabs(g(h)); };
        const LittleODecision d = is_little_o([&](double h) { return std::fabs(A + g(h)) - std::fabs(A); }, n,
                                              positive_schedule(), kDefaultLimitTol, opt);
        c.expect(d.verdict, "abs A=" + fmt("%g", A) + " m=" + std::to_string(m) + " n=" + std::to_string(n));
      }
  return c;
}

Check c11() {
  Check c;
  SplitMix64 rng(42);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * rng.uniform(); };
  const double eps = 1e-4;
  for (int i = 0; i < 50; ++i) {
    char src[256];
    std::snprintf(src, sizeof src, "(%.17g) + (%.17g)*x + (%.17g)*x^2 + (%.17g)*sin((%.17g)*x) + (%.17g)*cos(x)",
                  uniform(-1, 1), uniform(-1, 1), uniform(-1, 1), uniform(-1, 1), uniform(0.5, 3), uniform(-1, 1));
    double a = uniform(-1.5, 1.5), b = uniform(-1.5, 1.5);
    if (a == b) b = a + 0.5;
    const Function f = Function::from_source(src, {std::min(a, b), std::max(a, b)});
    const IntegralResult fwd = integrate(f, a, b, eps);
    const IntegralResult back = integrate(f, b, a, eps);
    c.expect(fwd.value == -back.value, std::string("antisymmetry: ") + src);
    c.expect(integrate(f, a, a, eps).value == 0.0 && integrate(f, b, b, eps).value == 0.0,
             std::string("zero diagonal: ") + src);
    // (1/(b-a)) I(a, b) lies between the extremes of rho
    double lo = INFINITY, hi = -INFINITY;
    for (int k = 0; k <= 4096; ++k) {
      const double v = f(a + (b - a) * k / 4096);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    const double mean = fwd.value / (b - a);
    const double slack = eps / std::fabs(b - a);
    c.expect(lo - slack <= mean && mean <= hi + slack, std::string("range bound: ") + src);
  }
  return c;
}

Check c12() {
  Check c;
  cli::CommandRequest r;
  r.subcommand = cli::Subcommand::integrate;
  r.f = "exp(-x^2)";
  r.a = 0.0;
  r.b = 1.0;
  r.eps = 1e-6;
  r.format = cli::Format::json;
  std::ostringstream o1, o2, e1, e2;
  c.expect(cli::run(r, o1, e1) == cli::kExitOk, "first run failed");
  c.expect(cli::run(r, o2, e2) == cli::kExitOk, "second run failed");
  c.expect(!o1.str().empty() && o1.str() == o2.str(), "outputs differ");
  return c;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Check()>> criteria[] = {
      {"darboux existence for exp(-x^2) on [0,1]", c1},
      {"ftc and darboux agree within 1e-7", c2},
      {"additivity of darboux candidates, (y-x)^2 fails", c3},
      {"asymptotic property of darboux candidates, y-x vs 0 fails", c4},
      {"little-o calibration", c5},
      {"increment theorem, |x| at 0 has gap 2", c6},
      {"arclength", c7},
      {"semicircle area", c8},
      {"shell volume", c9},
      {"sum, product and absolute-value rules", c10},
      {"range bound, antisymmetry, zero diagonal", c11},
      {"byte-identical repeat of criterion 1", c12},
  };
  int failed = 0, n = 0;
  for (const auto& [name, fn] : criteria) {
    ++n;
    const auto t0 = std::chrono::steady_clock::now();
    Check c;
    try {
      c = fn();
    } catch (const std::exception& e) {
      c.ok = false;
      c.why = std::string("threw: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s criterion %d: %s (%.1fs)%s%s\n", c.ok ? "PASS" : "FAIL", n, name, secs, c.ok ? "" : ": ",
                c.ok ? "" : c.why.c_str());
    std::fflush(stdout);
    if (!c.ok) ++failed;
  }
  std::printf("%d/%d criteria passed\n", n - failed, n);
  return failed == 0 ? 0 : 1;
}
