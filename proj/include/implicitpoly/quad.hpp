#pragma once

#include "implicitpoly/field.hpp"
#include "implicitpoly/geometry.hpp"

#include <span>

namespace implicitpoly {

// Knobs shared by every quadrature-driven stage.
struct QuadConfig {
    int gauss_order = 32;
    double bisect_tol_rel = 1e-12; // absolute step tolerance = rel * |V|
    unsigned threads = 0;          // 0: hardware concurrency
    int max_level = 5;             // dyadic level cap for the moment systems

    // Hunt for the sign step beyond V on slices that do not cross inside
    // it, so the slab identity keeps returning the integral of the true
    // implicit function where it leaves the range. Composed second-stage
    // problems need this: their range was chosen for the pivot equation,
    // not for the substituted one.
    bool track_outside_range = false;
};

// Volume of {(x, y) in R x V : f(x, y) >= 0} for a field whose sign in y is
// a single monotone step of direction rho.
struct HeavisideVolumeSpec {
    ImplicitFn f;
    IntervalBox block;  // R
    Interval range;     // V
    int rho = +1;       // +1: sign steps - to +, -1: + to -
    int gauss_order = 32;
    double bisect_tol = 1e-12; // absolute, in y units
    bool track_outside_range = false;
};

// Location of the sign step of y -> f(x, y) on V, found by bisection to
// within `tol`. When the slice never changes sign the returned endpoint
// keeps the slice-measure formula correct: V.lo when rho*f >= 0 on all of V,
// V.hi when rho*f < 0 on all of V. A slice whose sign pattern is not a
// single step in direction rho raises Errc::rho_violated.
double step_point(const ImplicitFn& f, std::span<const double> x,
                  const Interval& range, int rho, double tol);

// As above, but with track_outside_range the no-crossing cases hunt for the
// step beyond V (doubling expansion, capped) and may return a location
// outside [V.lo, V.hi]; the endpoint conventions remain the fallback.
double step_point(const ImplicitFn& f, std::span<const double> x,
                  const Interval& range, int rho, double tol,
                  bool track_outside_range);

// Tensor-product Gauss-Legendre over the x-block; per node the y-extent of
// the f >= 0 region is (V.hi - y*) for rho=+1 and (y* - V.lo) for rho=-1.
// Fixed node set and summation order, so the result is reproducible.
double heaviside_volume(const HeavisideVolumeSpec& spec);

} // namespace implicitpoly
