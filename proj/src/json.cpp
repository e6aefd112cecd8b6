#include "axioquad/json.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace axioquad {

namespace {

void write(const Json& j, int indent, int depth, std::string& out) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(key).dump();
        out += indent < 0 ? ":" : ": ";
        write(value, indent, depth + 1, out);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& value : j) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        write(value, indent, depth + 1, out);
      }
      newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      return;
    }
    default:
      out += j.dump();
  }
}

Json samples_json(const std::vector<Sample>& samples) {
  Json arr = Json::array();
  for (const auto& s : samples) arr.push_back({{"h", json_number(s.h)}, {"g", json_number(s.g)}});
  return arr;
}

Json optional_number(const std::optional<double>& v) { return v ? json_number(*v) : Json(nullptr); }

}  // namespace

Json json_number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

std::string_view side_name(Side s) noexcept {
  switch (s) {
    case Side::positive: return "positive";
    case Side::negative: return "negative";
    case Side::both: return "both";
  }
  return "?";
}

std::string_view method_name(IntegrationMethod m) noexcept { return m == IntegrationMethod::ftc ? "ftc" : "darboux"; }

Json to_json(const DarbouxBracket& b) {
  return {{"lower", json_number(b.lower)},
          {"upper", json_number(b.upper)},
          {"partition_size", b.partition_size},
          {"samples_per_cell", b.samples_per_cell},
          {"width", json_number(b.width)}};
}

Json to_json(const IntegralResult& r) {
  Json j{{"value", json_number(r.value)},
         {"error_bound", json_number(r.error_bound)},
         {"method", method_name(r.method)},
         {"evaluations", r.evaluations}};
  j["bracket"] = r.bracket ? to_json(*r.bracket) : Json(nullptr);
  return j;
}

Json to_json(const LimitEstimate& e) {
  return {{"value", json_number(e.value)},
          {"residual", json_number(e.residual)},
          {"samples", samples_json(e.samples)},
          {"converged", e.converged},
          {"noise_floor_hit", e.noise_floor_hit},
          {"side", side_name(e.side)},
          {"positive_limit", optional_number(e.positive_limit)},
          {"negative_limit", optional_number(e.negative_limit)}};
}

Json to_json(const OrderFit& f) {
  Json window = Json::array();
  for (double h : f.window) window.push_back(json_number(h));
  return {{"slope", json_number(f.slope)},
          {"intercept", json_number(f.intercept)},
          {"r_squared", optional_number(f.r_squared)},
          {"window", window},
          {"zeros_dropped", f.zeros_dropped},
          {"exact_zero", f.exact_zero}};
}

Json to_json(const LittleODecision& d) {
  Json j{{"verdict", d.verdict}, {"evidence", to_json(d.evidence)}};
  if (d.order_evidence) j["order_evidence"] = to_json(*d.order_evidence);
  return j;
}

Json to_json(const CoefficientEstimate& c) { return {{"rho", json_number(c.rho)}, {"evidence", to_json(c.evidence)}}; }

Json to_json(const AxiomReport& r) {
  Json trials = Json::array();
  for (const auto& t : r.trials) {
    Json site = Json::array();
    for (double s : t.site) site.push_back(json_number(s));
    Json jt{{"site", site}, {"residual", json_number(t.residual)}};
    if (t.error) jt["error"] = *t.error;
    trials.push_back(std::move(jt));
  }
  return {{"axiom", axiom_name(r.axiom)},
          {"tolerance", json_number(r.tolerance)},
          {"seed", r.seed},
          {"pass", r.pass},
          {"max_residual", json_number(r.max_residual)},
          {"trials", trials}};
}

Json to_json(const UniquenessCheck& u) {
  return {{"ftc_value", json_number(u.ftc_value)},
          {"darboux_value", json_number(u.darboux_value)},
          {"discrepancy", json_number(u.discrepancy)},
          {"bracket", to_json(u.bracket)},
          {"certified", u.certified}};
}

Json to_json(const GeometricResult& g) {
  Json samples = Json::array();
  for (const auto& s : g.extracted_rho_samples)
    samples.push_back({{"x", json_number(s.x)},
                       {"rho_extracted", json_number(s.extracted)},
                       {"rho_closed_form", json_number(s.closed_form)},
                       {"abs_err", json_number(std::fabs(s.extracted - s.closed_form))}});
  return {{"value", json_number(g.value)},
          {"closed_form_integrand", g.closed_form_integrand},
          {"extracted_rho_samples", samples},
          {"oracle_value", optional_number(g.oracle_value)},
          {"method", geometric_method_name(g.method)},
          {"extraction_tolerance", json_number(g.extraction_tolerance)},
          {"integral", to_json(g.integral)}};
}

std::string dump(const Json& j, int indent) {
  std::string out;
  write(j, indent, 0, out);
  return out;
}

}  // namespace axioquad
