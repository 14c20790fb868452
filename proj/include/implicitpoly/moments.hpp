#pragma once

#include "implicitpoly/field.hpp"
#include "implicitpoly/geometry.hpp"
#include "implicitpoly/linalg.hpp"
#include "implicitpoly/quad.hpp"

#include <span>
#include <vector>

namespace implicitpoly {

// Per-axis matrix of centered monomial integrals over the level-n dyadic
// subintervals: entries[i][j] = integral of (t - center)^j over block i,
// powers j = 0 .. 2^n - 1. A shifted-Vandermonde-type matrix; nonsingular,
// with determinant independent of the center.
struct MomentMatrix {
    Matrix entries;
    double center = 0;
    Interval axis;
    int level = 0;
};

MomentMatrix moment_matrix(const Interval& axis, int level, double center,
                           int max_level = 5);

// LU determinant of the moment matrix. Rebuilds the entries and runs the
// elimination in extended precision: for off-axis centers the determinant
// is smaller than the entry scale by many orders, so entry rounding alone
// already costs cond(A) * eps in relative accuracy.
double moment_determinant(const MomentMatrix& m);

// Per-block values of the integral of the implicit function, computed from
// Heaviside volumes without knowing the function: entry = |block| * (V.hi if
// rho=+1 else V.lo) - rho * mu(block).
struct MeanTensor {
    std::vector<double> entries;      // row-major over the block multi-index
    std::vector<std::size_t> shape;   // d entries, each 2^n
    int level = 0;
    int rho = 0;
    Interval range;
};

MeanTensor mean_tensor(const ImplicitFn& f, const IntervalBox& domain,
                       const Interval& range, int rho, int level,
                       const QuadConfig& cfg);

// Coefficient tensor of a multivariate polynomial centered at `center`:
// g(x) = sum_alpha coeffs[alpha] * prod_k (x_k - center_k)^alpha_k.
struct PolyTensor {
    std::vector<double> center;
    std::vector<std::size_t> shape;   // per-axis coefficient counts
    std::vector<double> coeffs;       // row-major, last axis fastest

    // Nested Horner evaluation in centered coordinates.
    double eval(std::span<const double> x) const;

    // Exact mean over a block: closed-form monomial integrals divided by
    // the block volume.
    double average(const IntervalBox& block) const;
};

struct SolvedCoefficients {
    PolyTensor poly;
    double residual_norm = 0;               // ||A o c - B||_inf
    std::vector<double> condition_estimates; // per axis, 1-norm
};

// Solves the mode-k systems A_k o c = B for the coefficient tensor (for
// d=2: c = A1^{-1} B A2^{-T}) by LU with partial pivoting per mode. Errors
// when any axis condition estimate exceeds 1e12 or the defining-equation
// residual exceeds 1e-10 relative.
SolvedCoefficients solve_coefficients(const std::vector<MomentMatrix>& axis_moments,
                                      const MeanTensor& rhs);

// Applies the forward contraction B = A o c (used for residuals and by
// tests that manufacture analytic right-hand sides).
std::vector<double> contract_forward(const std::vector<MomentMatrix>& axis_moments,
                                     const PolyTensor& coeffs);

} // namespace implicitpoly
