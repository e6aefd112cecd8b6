#pragma once

#include <string>

#include <json.hpp>

#include "axioquad/asymptotics.hpp"
#include "axioquad/darboux.hpp"
#include "axioquad/geometry.hpp"
#include "axioquad/integral.hpp"

namespace axioquad {

using Json = nlohmann::ordered_json;

// Non-finite values become null.
[[nodiscard]] Json json_number(double v);

[[nodiscard]] Json to_json(const DarbouxBracket& b);
[[nodiscard]] Json to_json(const IntegralResult& r);
[[nodiscard]] Json to_json(const LimitEstimate& e);
[[nodiscard]] Json to_json(const OrderFit& f);
[[nodiscard]] Json to_json(const LittleODecision& d);
[[nodiscard]] Json to_json(const CoefficientEstimate& c);
[[nodiscard]] Json to_json(const AxiomReport& r);
[[nodiscard]] Json to_json(const UniquenessCheck& u);
[[nodiscard]] Json to_json(const GeometricResult& g);

[[nodiscard]] std::string_view side_name(Side s) noexcept;
[[nodiscard]] std::string_view method_name(IntegrationMethod m) noexcept;

// Like Json::dump, but floating-point numbers always carry 17 significant
// digits so documents round-trip bit for bit.
[[nodiscard]] std::string dump(const Json& j, int indent = 2);

}  // namespace axioquad
