#pragma once

#include <vector>

namespace implicitpoly {

// Gauss-Legendre rule on [-1, 1], nodes ascending. Exact for polynomials of
// degree <= 2*order - 1.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Cached, thread-safe; order >= 1.
const GaussRule& gauss_legendre(int order);

} // namespace implicitpoly
