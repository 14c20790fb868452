#pragma once

#include "implicitpoly/field.hpp"
#include "implicitpoly/geometry.hpp"

#include <array>
#include <cstdint>
#include <span>

namespace implicitpoly {

// Counter-based sampling: sample k is a pure function of (seed, k), so the
// estimate is byte-identical for any thread count and the counter range can
// be split across workers.
struct McConfig {
    std::uint64_t samples = 10'000'000;
    std::uint64_t seed = 0;
    unsigned threads = 0;
};

inline constexpr const char* kMcGenerator = "splitmix64-counter";

struct McEstimate {
    double estimate = 0;
    double std_error = 0;
};

// Uniform sampling over R x V; estimate = |R x V| * hits / samples with the
// binomial standard error. Requires samples >= 10^4.
McEstimate mc_volume(const ImplicitFn& f, const IntervalBox& block,
                     const Interval& range, const McConfig& cfg);

// Ground-truth g(x): bisection for the root of y -> f(x, y) on V. Errors
// when rho*f does not bracket a sign change.
double pointwise_implicit(const ImplicitFn& f, std::span<const double> x,
                          const Interval& range, int rho, double tol);

// Ground truth for a two-equation system: damped Newton from `start` with a
// finite-difference Jacobian, max 100 iterations. The returned pair has
// ||(f1, f2)||_inf <= tol.
std::array<double, 2> pointwise_system(const SystemFn& f1, const SystemFn& f2,
                                       std::span<const double> x,
                                       std::array<double, 2> start, double tol);

} // namespace implicitpoly
