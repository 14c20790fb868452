#pragma once

#include "implicitpoly/approx.hpp"
#include "implicitpoly/field.hpp"

#include <array>
#include <optional>
#include <string>
#include <utility>

namespace implicitpoly {

// Two equations f1 = f2 = 0 in (x, y1, y2) with a base root (a, b1, b2).
// Stage 1 solves the pivot equation i for variable y_j as p(x, y_j');
// stage 2 substitutes p into the other equation and solves for y_j' = q(x).
struct SystemProblem {
    SystemFn f1, f2;
    IntervalBox domain;                       // R (x axes)
    std::array<std::string, 2> y_names;
    Interval range1, range2;                  // V1, V2
    std::vector<double> base_x;               // a
    std::array<double, 2> base_y;             // (b1, b2)
    int level_p = 0;                          // n, stage-1 degree level
    int level_q = 0;                          // m, stage-2 degree level
    std::optional<std::pair<int, int>> pivot; // 1-based (equation, variable)
};

// 2x2 determinant of central finite differences of (f1, f2) in (y1, y2) at
// the base point. Errors when the determinant is below the degeneracy
// threshold (1e-6, scaled by the squared largest partial).
double jacobian_check(const SystemProblem& sp, double step = 1e-5);

// The user-supplied pivot when set (validated for a nonvanishing partial),
// otherwise the (equation, variable) pair with the largest finite-difference
// partial, ties broken lexicographically.
std::pair<int, int> choose_pivot(const SystemProblem& sp, double step = 1e-5);

// Finite-difference partials d f_i / d y_j at the base point; [i-1][j-1].
std::array<std::array<double, 2>, 2> jacobian_partials(const SystemProblem& sp,
                                                       double step = 1e-5);

// Stage-1 problem: equation i over (x, y_j') with dependent variable y_j.
ImplicitProblem stage_one_problem(const SystemProblem& sp,
                                  std::pair<int, int> pivot);

// Stage-2 problem for h(x, y_j') = f_i'(x, ..., p(x, y_j'), ...) over
// R x V_j', built from the stage-1 result.
ImplicitProblem compose_second_stage(const SystemProblem& sp,
                                     const ApproxResult& stage1,
                                     std::pair<int, int> pivot);

struct SystemResult {
    PolyTensor p_tensor;        // y_j = p(x..., y_j')
    PolyTensor q_tensor;        // y_j' = q(x)
    std::pair<int, int> pivot;  // (equation, variable), 1-based
    int rho_stage1 = 0;
    int rho_stage2 = 0;
    Diagnostics diag_stage1, diag_stage2;

    // Assembled solution (y1, y2) at x: y_j' = q(x), y_j = p(x, q(x)).
    // Kept as an evaluation pipeline; expanding p(x, q(x)) into a single
    // polynomial would raise the degree without adding accuracy.
    std::array<double, 2> solution_at(std::span<const double> x) const;
};

SystemResult solve_system(const SystemProblem& sp, const QuadConfig& cfg);

} // namespace implicitpoly
