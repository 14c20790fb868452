#include "implicitpoly/gauss.hpp"

#include "implicitpoly/error.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace implicitpoly {

namespace {

// Legendre P_n(x) and its derivative via the three-term recurrence.
void legendre(int n, double x, double& p, double& dp)
{
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    p = p1;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
}

GaussRule make_rule(int n)
{
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        // i-th root from the right; the classic Chebyshev initial guess
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double p = 0, dp = 1;
        for (int it = 0; it < 64; ++it) {
            legendre(n, x, p, dp);
            double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15)
                break;
        }
        legendre(n, x, p, dp);
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[n - 1 - i] = x;
        r.weights[n - 1 - i] = w;
        r.nodes[i] = -x;
        r.weights[i] = w;
    }
    if (n % 2 == 1) {
        // middle node is exactly zero by symmetry
        r.nodes[n / 2] = 0.0;
        double p = 0, dp = 1;
        legendre(n, 0.0, p, dp);
        r.weights[n / 2] = 2.0 / (dp * dp);
    }
    return r;
}

} // namespace

const GaussRule& gauss_legendre(int order)
{
    if (order < 1)
        fail(Errc::invalid_argument, "quadrature order must be >= 1");
    static std::mutex mu;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(order);
    if (it == cache.end())
        it = cache.emplace(order, make_rule(order)).first;
    return it->second;
}

} // namespace implicitpoly
