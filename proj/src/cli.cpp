#include "axioquad/cli.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <sstream>

#include "axioquad/geometry.hpp"
#include "axioquad/integral.hpp"
#include "axioquad/json.hpp"

namespace axioquad::cli {

namespace {

// An Error re-labelled with the request field it came from.
class FieldError : public Error {
 public:
  FieldError(std::string_view field, const Error& cause)
      : Error(std::string(field) + ": " + cause.what()), kind_(cause.kind()) {}
  [[nodiscard]] std::string_view kind() const noexcept override { return kind_; }

 private:
  std::string kind_;
};

struct Outcome {
  Json result;
  int status = kExitOk;
};

std::string fmt(double v, const char* pattern = "%.12g") {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

template <class F>
auto field(std::string_view name, F&& body) {
  try {
    return body();
  } catch (const NoConvergenceError&) {
    throw;
  } catch (const Error& e) {
    throw FieldError(name, e);
  }
}

Expression parse_field(std::string_view name, const std::string& source) {
  return field(name, [&] { return parse(source); });
}

void validate(const CommandRequest& r) {
  if (r.f.empty()) throw PreconditionError("--f: function source is required");
  if (!std::isfinite(r.a)) throw PreconditionError("--a must be finite");
  if (!std::isfinite(r.b)) throw PreconditionError("--b must be finite");
  if (!(r.eps > 0.0)) throw PreconditionError("--eps must be positive");
  if (!(r.tol > 0.0)) throw PreconditionError("--tol must be positive");
  if (r.candidate_eps && !(*r.candidate_eps > 0.0)) throw PreconditionError("--eps must be positive");
  if (r.trials < 1) throw PreconditionError("--trials must be at least 1");
  if (r.n && *r.n < 0) throw PreconditionError("--n must be nonnegative");
  const bool geometric =
      r.subcommand == Subcommand::area || r.subcommand == Subcommand::arclength || r.subcommand == Subcommand::volume;
  if (geometric && !(r.a < r.b)) throw PreconditionError("--a must be less than --b");
  if (r.subcommand == Subcommand::verify && !(r.a < r.b)) throw PreconditionError("--a must be less than --b");
  if (r.subcommand == Subcommand::volume && r.a < 0.0) throw PreconditionError("--a must be nonnegative for volume");
  if (r.format == Format::csv && !geometric)
    throw PreconditionError("--format: csv is only available for area, arclength and volume");
}

HSchedule schedule_of(const CommandRequest& r) {
  HSchedule s;
  if (r.h0) s.h0 = *r.h0;
  if (r.ratio) s.ratio = *r.ratio;
  if (r.count) s.count = *r.count;
  if (r.side) s.side = *r.side;
  field("schedule", [&] {
    s.validate();
    return 0;
  });
  return s;
}

Function function_of(const CommandRequest& r, Interval domain) {
  const Expression body = parse_field("--f", r.f);
  std::optional<Expression> df, F;
  if (r.df) df = parse_field("--df", *r.df);
  if (r.F) F = parse_field("--F", *r.F);
  return field("--f", [&] { return Function(body, domain, df, F); });
}

Json request_json(const CommandRequest& r, std::uint64_t seed) {
  const auto opt_text = [](const std::optional<std::string>& s) { return s ? Json(*s) : Json(nullptr); };
  Json schedule{{"h0", r.h0 ? json_number(*r.h0) : Json(nullptr)},
                {"ratio", r.ratio ? json_number(*r.ratio) : Json(nullptr)},
                {"count", r.count ? Json(*r.count) : Json(nullptr)},
                {"side", r.side ? Json(side_name(*r.side)) : Json(nullptr)}};
  Json j{{"subcommand", subcommand_name(r.subcommand)},
         {"f", r.f},
         {"df", opt_text(r.df)},
         {"F", opt_text(r.F)},
         {"a", json_number(r.a)},
         {"b", json_number(r.b)}};
  switch (r.subcommand) {
    case Subcommand::integrate:
    case Subcommand::area:
    case Subcommand::arclength:
    case Subcommand::volume:
      j["eps"] = json_number(r.eps);
      break;
    case Subcommand::order:
      j["tol"] = json_number(r.tol);
      j["schedule"] = schedule;
      j["n"] = r.n ? Json(*r.n) : Json(nullptr);
      break;
    case Subcommand::verify: {
      const char* axes[] = {"additivity", "asymptotic", "both"};
      j["tol"] = json_number(r.tol);
      j["eps"] = json_number(r.candidate_eps ? *r.candidate_eps : r.tol / 10);
      j["axiom"] = axes[static_cast<int>(r.axiom)];
      j["trials"] = r.trials;
      j["seed"] = seed;
      j["schedule"] = schedule;
      break;
    }
  }
  const char* formats[] = {"table", "json", "csv"};
  j["format"] = formats[static_cast<int>(r.format)];
  return j;
}

Outcome run_integrate(const CommandRequest& r) {
  const double lo = std::min(r.a, r.b), hi = std::max(r.a, r.b);
  if (lo == hi) {
    const Expression body = parse_field("--f", r.f);
    field("--f", [&] { return evaluate(body, lo); });
    IntegralResult z;
    z.bracket = DarbouxBracket{0.0, 0.0, 0, RefineOptions{}.samples_per_cell, 0.0};
    return {to_json(z)};
  }
  const Function f = function_of(r, Interval{lo, hi});
  return {to_json(integrate(f, r.a, r.b, r.eps))};
}

Outcome run_geometry(const CommandRequest& r) {
  const Function f = function_of(r, Interval{r.a, r.b});
  switch (r.subcommand) {
    case Subcommand::area: return {to_json(area_under_curve(f, r.a, r.b, r.eps))};
    case Subcommand::arclength: return {to_json(arclength(f, r.a, r.b, r.eps))};
    default: return {to_json(volume_of_revolution_shells(f, r.a, r.b, r.eps))};
  }
}

Outcome run_order(const CommandRequest& r) {
  const CompiledExpression g(parse_field("--f", r.f));
  const HSchedule s = schedule_of(r);
  const ScalarFn fn = [&](double h) { return g(h); };
  Json out{{"order_fit", to_json(fit_order(fn, s))}};
  if (r.n) {
    const LittleODecision d = is_little_o(fn, *r.n, s, r.tol);
    out["little_o"] = {{"n", *r.n}, {"verdict", d.verdict}, {"evidence", to_json(d.evidence)}};
  }
  return {out};
}

Outcome run_verify(const CommandRequest& r, std::uint64_t seed) {
  const Function rho = function_of(r, Interval{r.a, r.b});
  const HSchedule s = schedule_of(r);
  const double eps = r.candidate_eps ? *r.candidate_eps : r.tol / 10;
  const CandidateIntegral I = rho.has_antiderivative() ? candidate_from_antiderivative(rho)
                                                       : candidate_from_darboux(rho, eps);
  Json reports = Json::array();
  bool pass = true;
  if (r.axiom != AxiomChoice::asymptotic) {
    const AxiomReport rep = verify_additivity(I, r.a, r.b, r.trials, seed, r.tol);
    pass = pass && rep.pass;
    reports.push_back(to_json(rep));
  }
  if (r.axiom != AxiomChoice::additivity) {
    std::vector<double> points;
    for (int i = 1; i <= 5; ++i) points.push_back(r.a + (r.b - r.a) * i / 6);
    AxiomReport rep = verify_asymptotic(I, rho, points, s, r.tol);
    rep.seed = seed;
    pass = pass && rep.pass;
    reports.push_back(to_json(rep));
  }
  return {{{"candidate", I.description}, {"reports", reports}}, pass ? kExitOk : kExitReportFailed};
}

void table_bracket(std::ostream& os, const Json& b) {
  if (b.is_null()) return;
  os << "bracket       [" << fmt(b["lower"].get<double>()) << ", " << fmt(b["upper"].get<double>()) << "]  "
     << b["partition_size"].get<std::size_t>() << " cells x " << b["samples_per_cell"].get<int>() << " samples\n";
}

double num_or_nan(const Json& j) { return j.is_null() ? std::nan("") : j.get<double>(); }

void table_integral(std::ostream& os, const Json& r) {
  os << "value         " << fmt(r["value"].get<double>(), "%.15g") << '\n';
  os << "error_bound   " << fmt(r["error_bound"].get<double>(), "%.3e") << '\n';
  os << "method        " << r["method"].get<std::string>() << '\n';
  os << "evaluations   " << r["evaluations"].get<std::uint64_t>() << '\n';
  table_bracket(os, r["bracket"]);
}

void table_geometry(std::ostream& os, const Json& r) {
  os << "value         " << fmt(r["value"].get<double>(), "%.15g") << '\n';
  os << "integrand     " << r["closed_form_integrand"].get<std::string>() << '\n';
  os << "method        " << r["method"].get<std::string>() << " (" << r["integral"]["method"].get<std::string>()
     << ")\n";
  os << "error_bound   " << fmt(r["integral"]["error_bound"].get<double>(), "%.3e") << '\n';
  os << "oracle        " << fmt(num_or_nan(r["oracle_value"]), "%.15g") << " (local model, 8192 cells)\n";
  os << "\n  x                  rho_extracted      rho_closed_form    abs_err\n";
  for (const auto& s : r["extracted_rho_samples"]) {
    char line[128];
    std::snprintf(line, sizeof line, "  %-18.12g %-18.12g %-18.12g %.2e\n", s["x"].get<double>(),
                  s["rho_extracted"].get<double>(), s["rho_closed_form"].get<double>(), s["abs_err"].get<double>());
    os << line;
  }
}

void table_limit(std::ostream& os, const Json& e, const char* indent) {
  os << indent << "value       " << fmt(num_or_nan(e["value"])) << '\n';
  os << indent << "residual    " << fmt(num_or_nan(e["residual"]), "%.3e") << '\n';
  os << indent << "converged   " << (e["converged"].get<bool>() ? "yes" : "no")
     << (e["noise_floor_hit"].get<bool>() ? " (noise floor hit)" : "") << '\n';
  os << indent << "side        " << e["side"].get<std::string>() << '\n';
  if (!e["positive_limit"].is_null() && !e["negative_limit"].is_null())
    os << indent << "one-sided   " << fmt(e["positive_limit"].get<double>()) << " (h>0), "
       << fmt(e["negative_limit"].get<double>()) << " (h<0)\n";
}

void table_order(std::ostream& os, const Json& r) {
  const Json& f = r["order_fit"];
  if (f["exact_zero"].get<bool>()) {
    os << "slope         inf (g vanishes on every step)\n";
  } else {
    os << "slope         " << fmt(num_or_nan(f["slope"]), "%.6f") << '\n';
    os << "intercept     " << fmt(num_or_nan(f["intercept"]), "%.6f") << '\n';
    os << "r_squared     " << fmt(num_or_nan(f["r_squared"]), "%.6f") << '\n';
  }
  os << "window        " << f["window"].size() << " steps, " << f["zeros_dropped"].get<int>() << " zeros dropped\n";
  if (r.contains("little_o")) {
    const Json& d = r["little_o"];
    os << "o(h^" << d["n"].get<int>() << ")        " << (d["verdict"].get<bool>() ? "yes" : "no") << '\n';
    table_limit(os, d["evidence"], "  ");
  }
}

void table_verify(std::ostream& os, const Json& r) {
  os << "candidate     " << r["candidate"].get<std::string>() << '\n';
  for (const auto& rep : r["reports"]) {
    os << '\n' << rep["axiom"].get<std::string>() << ": " << (rep["pass"].get<bool>() ? "pass" : "FAIL") << '\n';
    os << "  max_residual  " << fmt(num_or_nan(rep["max_residual"]), "%.3e") << '\n';
    os << "  tolerance     " << fmt(rep["tolerance"].get<double>(), "%.3e") << '\n';
    os << "  trials        " << rep["trials"].size() << '\n';
    os << "  seed          " << rep["seed"].get<std::uint64_t>() << '\n';
    std::size_t shown = 0;
    for (const auto& t : rep["trials"]) {
      const double res = num_or_nan(t["residual"]);
      if (!(res > rep["tolerance"].get<double>()) && !std::isnan(res)) continue;
      if (shown++ == 5) {
        os << "  ...\n";
        break;
      }
      os << "  failing site [";
      for (std::size_t i = 0; i < t["site"].size(); ++i) os << (i ? ", " : "") << fmt(t["site"][i].get<double>());
      os << "] residual " << fmt(res, "%.3e");
      if (t.contains("error")) os << " (" << t["error"].get<std::string>() << ')';
      os << '\n';
    }
  }
}

void emit_table(std::ostream& os, Subcommand s, const Json& result) {
  if (result.contains("error")) {
    os << "no convergence: " << result["message"].get<std::string>() << '\n';
    os << "evaluations   " << result["evaluations"].get<std::uint64_t>() << '\n';
    table_bracket(os, result["best_bracket"]);
    return;
  }
  switch (s) {
    case Subcommand::integrate: table_integral(os, result); break;
    case Subcommand::area:
    case Subcommand::arclength:
    case Subcommand::volume: table_geometry(os, result); break;
    case Subcommand::order: table_order(os, result); break;
    case Subcommand::verify: table_verify(os, result); break;
  }
}

void emit_csv(std::ostream& os, const Json& result) {
  os << "x,rho_extracted,rho_closed_form,abs_err\n";
  if (!result.contains("extracted_rho_samples")) return;
  for (const auto& s : result["extracted_rho_samples"]) {
    os << fmt(s["x"].get<double>(), "%.17g") << ',' << fmt(s["rho_extracted"].get<double>(), "%.17g") << ','
       << fmt(s["rho_closed_form"].get<double>(), "%.17g") << ',' << fmt(s["abs_err"].get<double>(), "%.17g")
       << '\n';
  }
}

}  // namespace

std::string_view subcommand_name(Subcommand s) noexcept {
  switch (s) {
    case Subcommand::integrate: return "integrate";
    case Subcommand::area: return "area";
    case Subcommand::arclength: return "arclength";
    case Subcommand::volume: return "volume";
    case Subcommand::order: return "order";
    case Subcommand::verify: return "verify";
  }
  return "?";
}

std::uint64_t default_seed() {
  const char* env = std::getenv("AXIOQUAD_SEED");
  if (!env || !*env) return kDefaultSeed;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0' || env[0] == '-') throw PreconditionError("AXIOQUAD_SEED must be a nonnegative integer");
  return v;
}

int run(const CommandRequest& request, std::ostream& out, std::ostream& err) {
  Outcome outcome;
  std::uint64_t seed = kDefaultSeed;
  try {
    seed = request.seed ? *request.seed : default_seed();
    validate(request);
    switch (request.subcommand) {
      case Subcommand::integrate: outcome = run_integrate(request); break;
      case Subcommand::area:
      case Subcommand::arclength:
      case Subcommand::volume: outcome = run_geometry(request); break;
      case Subcommand::order: outcome = run_order(request); break;
      case Subcommand::verify: outcome = run_verify(request, seed); break;
    }
  } catch (const NoConvergenceError& e) {
    DarbouxBracket best = e.best();
    if (request.subcommand == Subcommand::integrate && request.a > request.b)
      best = DarbouxBracket{-best.upper, -best.lower, best.partition_size, best.samples_per_cell, best.width};
    outcome.result = {{"error", e.kind()},
                      {"message", one_line(e.what())},
                      {"best_bracket", to_json(best)},
                      {"evaluations", e.evaluations()}};
    outcome.status = kExitNoConvergence;
    err << "error: " << e.kind() << ": " << one_line(e.what()) << '\n';
  } catch (const Error& e) {
    err << "error: " << e.kind() << ": " << one_line(e.what()) << '\n';
    return kExitPrecondition;
  } catch (const std::exception& e) {
    err << "error: internal: " << one_line(e.what()) << '\n';
    return kExitPrecondition;
  }

  switch (request.format) {
    case Format::json: {
      Json doc{{"request", request_json(request, seed)}, {"result", outcome.result}, {"version", kVersion}};
      out << dump(doc) << '\n';
      break;
    }
    case Format::csv: emit_csv(out, outcome.result); break;
    case Format::table: emit_table(out, request.subcommand, outcome.result); break;
  }
  if (outcome.status == kExitReportFailed) err << "error: report: verification failed\n";
  return outcome.status;
}

}  // namespace axioquad::cli
