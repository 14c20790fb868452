#include "implicitpoly/field.hpp"

#include "implicitpoly/error.hpp"

#include <array>
#include <vector>

namespace implicitpoly {

namespace {

constexpr std::size_t kMaxVars = 8;

// slot >= 0: x[slot]; slot == -1: y (or y1); slot == -2: y2
std::vector<int> map_free_vars(const Expression& f,
                               std::span<const std::string> x_names,
                               std::string_view y1, std::string_view y2)
{
    const auto& vars = f.free_vars();
    if (vars.size() > kMaxVars)
        fail(Errc::invalid_argument, "too many variables in expression");
    std::vector<int> slots;
    slots.reserve(vars.size());
    for (const auto& v : vars) {
        if (v == y1) {
            slots.push_back(-1);
            continue;
        }
        if (!y2.empty() && v == y2) {
            slots.push_back(-2);
            continue;
        }
        int found = -3;
        for (std::size_t k = 0; k < x_names.size(); ++k)
            if (x_names[k] == v)
                found = static_cast<int>(k);
        if (found == -3)
            fail(Errc::unbound_variable,
                 "variable '" + v + "' is neither a domain axis nor a dependent variable");
        slots.push_back(found);
    }
    return slots;
}

} // namespace

ImplicitFn expression_field(const Expression& f,
                            std::span<const std::string> x_names,
                            std::string_view y_name)
{
    auto slots = map_free_vars(f, x_names, y_name, {});
    return [f, slots](std::span<const double> x, double y) {
        std::array<double, kMaxVars> vals{};
        for (std::size_t i = 0; i < slots.size(); ++i)
            vals[i] = slots[i] == -1 ? y : x[static_cast<std::size_t>(slots[i])];
        return f.eval(std::span<const double>(vals.data(), slots.size()));
    };
}

SystemFn expression_field2(const Expression& f,
                           std::span<const std::string> x_names,
                           std::string_view y1_name, std::string_view y2_name)
{
    auto slots = map_free_vars(f, x_names, y1_name, y2_name);
    return [f, slots](std::span<const double> x, double y1, double y2) {
        std::array<double, kMaxVars> vals{};
        for (std::size_t i = 0; i < slots.size(); ++i) {
            int s = slots[i];
            vals[i] = s == -1 ? y1 : s == -2 ? y2 : x[static_cast<std::size_t>(s)];
        }
        return f.eval(std::span<const double>(vals.data(), slots.size()));
    };
}

} // namespace implicitpoly
