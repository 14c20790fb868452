#pragma once

#include "implicitpoly/approx.hpp"
#include "implicitpoly/moments.hpp"
#include "implicitpoly/system.hpp"

#include <json.hpp>

#include <string>

namespace implicitpoly {

// {"center": [...], "shape": [...], "coeffs": nested row-major arrays}
nlohmann::json poly_to_json(const PolyTensor& poly);
PolyTensor poly_from_json(const nlohmann::json& j);

// Full artifact for one approximation run: level, center, box, range, rho,
// coefficients and solver diagnostics. Deliberately excludes the thread
// count, which must never change emitted bytes.
nlohmann::json approx_to_json(const ApproxResult& result);

nlohmann::json system_to_json(const SystemResult& result,
                              const IntervalBox& domain,
                              const std::array<std::string, 2>& y_names,
                              double jacobian_det);

// "%.17g" — round-trips doubles exactly, '.' decimal separator.
std::string format_g17(double v);

} // namespace implicitpoly
