#include "implicitpoly/linalg.hpp"

#include "implicitpoly/error.hpp"

#include <cmath>
#include <utility>

namespace implicitpoly {

LuFactor LuFactor::compute(const Matrix& m)
{
    LuFactor f;
    f.lu_ = m;
    const std::size_t n = m.size();
    f.perm_.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        f.perm_[i] = i;

    Matrix& a = f.lu_;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        double best = std::abs(a.at(k, k));
        for (std::size_t i = k + 1; i < n; ++i) {
            double v = std::abs(a.at(i, k));
            if (v > best) {
                best = v;
                piv = i;
            }
        }
        if (best == 0.0)
            fail(Errc::ill_conditioned, "singular matrix in LU factorization");
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(a.at(k, j), a.at(piv, j));
            std::swap(f.perm_[k], f.perm_[piv]);
            f.perm_sign_ = -f.perm_sign_;
        }
        const double d = a.at(k, k);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double l = a.at(i, k) / d;
            a.at(i, k) = l;
            for (std::size_t j = k + 1; j < n; ++j)
                a.at(i, j) -= l * a.at(k, j);
        }
    }
    return f;
}

double LuFactor::determinant() const
{
    double det = perm_sign_;
    for (std::size_t i = 0; i < size(); ++i)
        det *= lu_.at(i, i);
    return det;
}

void LuFactor::solve(std::span<double> b) const
{
    solve_strided(b.data(), 1);
}

void LuFactor::solve_strided(double* b, std::size_t stride) const
{
    const std::size_t n = size();
    // apply the row permutation
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i)
        y[i] = b[perm_[i] * stride];
    // forward substitution (unit lower triangle)
    for (std::size_t i = 1; i < n; ++i) {
        double s = y[i];
        for (std::size_t j = 0; j < i; ++j)
            s -= lu_.at(i, j) * y[j];
        y[i] = s;
    }
    // back substitution
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t j = ii + 1; j < n; ++j)
            s -= lu_.at(ii, j) * y[j];
        y[ii] = s / lu_.at(ii, ii);
    }
    for (std::size_t i = 0; i < n; ++i)
        b[i * stride] = y[i];
}

double norm1(const Matrix& m)
{
    const std::size_t n = m.size();
    double best = 0;
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0;
        for (std::size_t i = 0; i < n; ++i)
            s += std::abs(m.at(i, j));
        if (s > best)
            best = s;
    }
    return best;
}

double norm_inf(std::span<const double> v)
{
    double best = 0;
    for (double x : v) {
        double a = std::abs(x);
        if (a > best)
            best = a;
    }
    return best;
}

Matrix inverse(const LuFactor& f)
{
    const std::size_t n = f.size();
    Matrix inv(n);
    std::vector<double> col(n);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t i = 0; i < n; ++i)
            col[i] = (i == j) ? 1.0 : 0.0;
        f.solve(col);
        for (std::size_t i = 0; i < n; ++i)
            inv.at(i, j) = col[i];
    }
    return inv;
}

double condition_1(const Matrix& m)
{
    LuFactor f = LuFactor::compute(m);
    return norm1(m) * norm1(inverse(f));
}

} // namespace implicitpoly
