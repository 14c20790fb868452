#include "implicitpoly/oracle.hpp"

#include "implicitpoly/error.hpp"
#include "implicitpoly/parallel.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace implicitpoly {

namespace {

std::uint64_t splitmix64(std::uint64_t z)
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// dimension-d coordinate of sample k, uniform in [0, 1)
double u01(std::uint64_t seed, std::uint64_t counter, std::uint64_t dim)
{
    std::uint64_t v = splitmix64(splitmix64(seed + counter) + dim);
    return static_cast<double>(v >> 11) * 0x1.0p-53;
}

} // namespace

McEstimate mc_volume(const ImplicitFn& f, const IntervalBox& block,
                     const Interval& range, const McConfig& cfg)
{
    block.validate();
    if (cfg.samples < 10'000)
        fail(Errc::invalid_argument, "mc_volume needs at least 10^4 samples");

    const std::size_t d = block.dim();
    const std::uint64_t n = cfg.samples;

    unsigned workers = resolve_threads(cfg.threads);
    if (workers > 64)
        workers = 64;
    std::uint64_t chunk = (n + workers - 1) / workers;
    std::vector<std::uint64_t> hits(workers, 0);

    parallel_for(workers, workers, [&](std::size_t w) {
        std::uint64_t begin = w * chunk;
        std::uint64_t end = std::min(n, begin + chunk);
        std::uint64_t count = 0;
        std::array<double, 3> x{};
        for (std::uint64_t k = begin; k < end; ++k) {
            for (std::size_t dim = 0; dim < d; ++dim) {
                const Interval& axis = block.axes[dim].range;
                x[dim] = axis.lo + axis.length() * u01(cfg.seed, k, dim);
            }
            double y = range.lo + range.length() * u01(cfg.seed, k, d);
            if (f(std::span<const double>(x.data(), d), y) >= 0.0)
                ++count;
        }
        hits[w] = count;
    });

    std::uint64_t total_hits = 0;
    for (std::uint64_t h : hits)
        total_hits += h;

    const double vol = block.volume() * range.length();
    const double p = static_cast<double>(total_hits) / static_cast<double>(n);
    McEstimate out;
    out.estimate = vol * p;
    out.std_error = vol * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
    return out;
}

double pointwise_implicit(const ImplicitFn& f, std::span<const double> x,
                          const Interval& range, int rho, double tol)
{
    if (rho != 1 && rho != -1)
        fail(Errc::invalid_argument, "rho must be +1 or -1");
    if (!(tol > 0))
        fail(Errc::invalid_argument, "tolerance must be positive");

    const double r = rho;
    auto above = [&](double y) { return r * f(x, y) >= 0.0; };
    double lo = range.lo;
    double hi = range.hi;
    if (above(lo) || !above(hi))
        fail(Errc::no_bracket, "no sign bracket on V");
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (above(mid))
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

std::array<double, 2> pointwise_system(const SystemFn& f1, const SystemFn& f2,
                                       std::span<const double> x,
                                       std::array<double, 2> start, double tol)
{
    if (!(tol > 0))
        fail(Errc::invalid_argument, "tolerance must be positive");

    auto residual = [&](const std::array<double, 2>& y) {
        return std::array<double, 2>{f1(x, y[0], y[1]), f2(x, y[0], y[1])};
    };
    auto norm = [](const std::array<double, 2>& v) {
        return std::max(std::abs(v[0]), std::abs(v[1]));
    };

    std::array<double, 2> y = start;
    std::array<double, 2> r = residual(y);
    for (int iter = 0; iter < 100; ++iter) {
        if (norm(r) <= tol)
            return y;

        // finite-difference Jacobian in (y1, y2)
        double j[2][2];
        for (int col = 0; col < 2; ++col) {
            double h = 1e-7 * (1.0 + std::abs(y[col]));
            std::array<double, 2> yp = y, ym = y;
            yp[col] += h;
            ym[col] -= h;
            auto rp = residual(yp);
            auto rm = residual(ym);
            j[0][col] = (rp[0] - rm[0]) / (2.0 * h);
            j[1][col] = (rp[1] - rm[1]) / (2.0 * h);
        }
        double det = j[0][0] * j[1][1] - j[0][1] * j[1][0];
        if (det == 0.0)
            fail(Errc::newton_divergence, "singular Jacobian in Newton iteration");
        std::array<double, 2> delta{(r[0] * j[1][1] - r[1] * j[0][1]) / det,
                                    (r[1] * j[0][0] - r[0] * j[1][0]) / det};

        // backtracking damping
        double lambda = 1.0;
        bool accepted = false;
        for (int back = 0; back < 40; ++back) {
            std::array<double, 2> trial{y[0] - lambda * delta[0],
                                        y[1] - lambda * delta[1]};
            auto rt = residual(trial);
            if (norm(rt) < norm(r)) {
                y = trial;
                r = rt;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!accepted)
            fail(Errc::newton_divergence, "Newton iteration stalled");
    }
    if (norm(r) <= tol)
        return y;
    fail(Errc::newton_divergence,
         "Newton did not converge: residual " + std::to_string(norm(r)));
}

} // namespace implicitpoly
