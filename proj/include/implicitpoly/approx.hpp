#pragma once

#include "implicitpoly/field.hpp"
#include "implicitpoly/geometry.hpp"
#include "implicitpoly/moments.hpp"
#include "implicitpoly/quad.hpp"

#include <span>
#include <string>
#include <vector>

namespace implicitpoly {

// One implicit equation f(x, y) = 0 over U x V with a base root (a, b).
struct ImplicitProblem {
    ImplicitFn f;
    IntervalBox domain;          // U
    Interval range;              // V
    std::vector<double> base_x;  // a
    double base_y = 0;           // b
    int level = 0;               // n

    // Composed stages carry the error of an earlier approximation, so their
    // base residual cannot honor the user-facing tolerance.
    bool check_base_residual = true;
};

// Wires an expression into a problem. Axis names come from `domain`; every
// free variable of f must be a domain axis or y_name.
ImplicitProblem make_problem(const Expression& f, const std::string& y_name,
                             IntervalBox domain, Interval range,
                             std::vector<double> base_x, double base_y,
                             int level);

// Sign step direction of y -> f(x, y): +1 when the sign rises from - to +
// across V, -1 when it falls. Determined at the base point and validated on
// a sample grid over U; an inconsistent pattern is an error since the method
// assumes rho is constant on U x V.
int detect_rho(const ImplicitProblem& p);

struct Diagnostics {
    std::vector<double> condition_estimates;
    double residual_norm = 0;
    int gauss_order = 0;
    double bisect_tol = 0;
};

struct ApproxResult {
    PolyTensor poly;
    int rho = 0;
    MeanTensor means;
    Diagnostics diagnostics;
    IntervalBox domain;
    Interval range;
    int level = 0;
};

// detect rho -> per-axis moment matrices -> mean tensor -> coefficient
// solve. Stage failures are annotated with the stage name.
ApproxResult approximate(const ImplicitProblem& p, const QuadConfig& cfg);

// Local average of the recovered polynomial over the level-n dyadic block
// containing x: the step-function evaluator whose values converge to g(x).
double cesaro_eval(const ApproxResult& result, std::span<const double> x, int level);
double cesaro_eval(const ApproxResult& result, std::span<const double> x);

} // namespace implicitpoly
