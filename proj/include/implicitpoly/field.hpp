#pragma once

#include "implicitpoly/expr.hpp"

#include <functional>
#include <span>
#include <string>
#include <string_view>

namespace implicitpoly {

// Scalar field over (x, y) with x in a fixed axis order. Implicit equations
// enter the pipeline through this shape, so a composed function (e.g. an
// equation with one variable substituted by a recovered polynomial) is as
// valid an input as a parsed expression.
using ImplicitFn = std::function<double(std::span<const double> x, double y)>;

// Scalar field over (x, y1, y2) for two-equation systems.
using SystemFn =
    std::function<double(std::span<const double> x, double y1, double y2)>;

// Wraps an expression as an ImplicitFn. Every free variable of `f` must be
// one of x_names or y_name; x_names supplies the evaluation order.
ImplicitFn expression_field(const Expression& f,
                            std::span<const std::string> x_names,
                            std::string_view y_name);

// Wraps an expression as a SystemFn over (x_names, y1_name, y2_name).
SystemFn expression_field2(const Expression& f,
                           std::span<const std::string> x_names,
                           std::string_view y1_name, std::string_view y2_name);

} // namespace implicitpoly
