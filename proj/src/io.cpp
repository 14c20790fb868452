#include "implicitpoly/io.hpp"

#include "implicitpoly/error.hpp"

#include <cstdio>

namespace implicitpoly {

namespace {

using nlohmann::json;

json nest_coeffs(const PolyTensor& poly, std::size_t axis, std::size_t offset,
                 std::size_t span_len)
{
    const std::size_t m = poly.shape[axis];
    json arr = json::array();
    if (axis + 1 == poly.shape.size()) {
        for (std::size_t j = 0; j < m; ++j)
            arr.push_back(poly.coeffs[offset + j]);
        return arr;
    }
    const std::size_t sub = span_len / m;
    for (std::size_t j = 0; j < m; ++j)
        arr.push_back(nest_coeffs(poly, axis + 1, offset + j * sub, sub));
    return arr;
}

void flatten_coeffs(const json& arr, std::span<const std::size_t> shape,
                    std::size_t axis, std::vector<double>& out)
{
    if (!arr.is_array() || arr.size() != shape[axis])
        fail(Errc::io, "coeffs array does not match shape");
    if (axis + 1 == shape.size()) {
        for (const auto& v : arr) {
            if (!v.is_number())
                fail(Errc::io, "coefficient is not a number");
            out.push_back(v.get<double>());
        }
        return;
    }
    for (const auto& sub : arr)
        flatten_coeffs(sub, shape, axis + 1, out);
}

json box_to_json(const IntervalBox& box)
{
    json axes = json::array();
    for (const auto& a : box.axes)
        axes.push_back({{"name", a.name}, {"lo", a.range.lo}, {"hi", a.range.hi}});
    return axes;
}

} // namespace

std::string format_g17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

nlohmann::json poly_to_json(const PolyTensor& poly)
{
    json j;
    j["center"] = poly.center;
    j["shape"] = poly.shape;
    j["coeffs"] = nest_coeffs(poly, 0, 0, poly.coeffs.size());
    return j;
}

PolyTensor poly_from_json(const nlohmann::json& j)
{
    if (!j.is_object() || !j.contains("center") || !j.contains("shape") ||
        !j.contains("coeffs"))
        fail(Errc::io, "polynomial JSON needs center, shape and coeffs");
    PolyTensor poly;
    try {
        poly.center = j.at("center").get<std::vector<double>>();
        poly.shape = j.at("shape").get<std::vector<std::size_t>>();
    } catch (const json::exception& e) {
        fail(Errc::io, std::string("malformed polynomial JSON: ") + e.what());
    }
    if (poly.center.size() != poly.shape.size() || poly.shape.empty())
        fail(Errc::io, "polynomial center and shape disagree");
    std::size_t total = 1;
    for (std::size_t m : poly.shape) {
        if (m == 0)
            fail(Errc::io, "polynomial shape has a zero extent");
        total *= m;
    }
    poly.coeffs.reserve(total);
    flatten_coeffs(j.at("coeffs"), poly.shape, 0, poly.coeffs);
    return poly;
}

nlohmann::json approx_to_json(const ApproxResult& result)
{
    json j = poly_to_json(result.poly);
    j["level"] = result.level;
    j["box"] = box_to_json(result.domain);
    j["range"] = {{"lo", result.range.lo}, {"hi", result.range.hi}};
    j["rho"] = result.rho;
    j["residual_norm"] = result.diagnostics.residual_norm;
    j["condition_estimates"] = result.diagnostics.condition_estimates;
    j["quad"] = {{"gauss_order", result.diagnostics.gauss_order},
                 {"bisect_tol", result.diagnostics.bisect_tol}};
    return j;
}

nlohmann::json system_to_json(const SystemResult& result,
                              const IntervalBox& domain,
                              const std::array<std::string, 2>& y_names,
                              double jacobian_det)
{
    json j;
    j["box"] = box_to_json(domain);
    j["y_names"] = y_names;
    j["pivot"] = {{"equation", result.pivot.first}, {"variable", result.pivot.second}};
    j["jacobian_det"] = jacobian_det;
    j["rho_stage1"] = result.rho_stage1;
    j["rho_stage2"] = result.rho_stage2;
    j["p_tensor"] = poly_to_json(result.p_tensor);
    j["q_tensor"] = poly_to_json(result.q_tensor);
    j["diagnostics"] = {
        {"stage1",
         {{"residual_norm", result.diag_stage1.residual_norm},
          {"condition_estimates", result.diag_stage1.condition_estimates},
          {"gauss_order", result.diag_stage1.gauss_order},
          {"bisect_tol", result.diag_stage1.bisect_tol}}},
        {"stage2",
         {{"residual_norm", result.diag_stage2.residual_norm},
          {"condition_estimates", result.diag_stage2.condition_estimates},
          {"gauss_order", result.diag_stage2.gauss_order},
          {"bisect_tol", result.diag_stage2.bisect_tol}}},
    };
    return j;
}

} // namespace implicitpoly
