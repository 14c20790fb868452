#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace implicitpoly {

// Dense square matrix, row-major. Sized for the moment systems in this
// project (order <= 32), not for general-purpose linear algebra.
class Matrix {
public:
    Matrix() = default;
    explicit Matrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

    std::size_t size() const { return n_; }
    double& at(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    double at(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }
    std::span<const double> data() const { return a_; }

private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

// PA = LU with partial pivoting. Throws Error{ill_conditioned} on an exactly
// singular pivot.
class LuFactor {
public:
    static LuFactor compute(const Matrix& m);

    std::size_t size() const { return lu_.size(); }
    double determinant() const;

    // Solves A x = b in place.
    void solve(std::span<double> b) const;

    // Solves A x = b for a strided right-hand side (tensor mode fibers).
    void solve_strided(double* b, std::size_t stride) const;

private:
    Matrix lu_;
    std::vector<std::size_t> perm_;
    int perm_sign_ = 1;
};

double norm1(const Matrix& m);
double norm_inf(std::span<const double> v);

Matrix inverse(const LuFactor& f);

// 1-norm condition number via the explicit inverse. Exact at these sizes.
double condition_1(const Matrix& m);

} // namespace implicitpoly
