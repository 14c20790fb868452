#include "implicitpoly/quad.hpp"

#include "implicitpoly/error.hpp"
#include "implicitpoly/gauss.hpp"

#include <array>
#include <cmath>

namespace implicitpoly {

namespace {

double bisect_step(const std::function<bool(double)>& above, double lo,
                   double hi, double tol)
{
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (above(mid))
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

// Expands the bracket beyond one end of V by doubling steps. Returns the
// step location when a sign change is found, the fallback endpoint when the
// hunt runs off the cap or the function stops being evaluable.
double hunt_outside(const std::function<bool(double)>& above,
                    const Interval& range, bool below, double tol,
                    double fallback)
{
    const double width = range.length();
    double inner = below ? range.lo : range.hi;
    double step = width;
    for (int attempt = 0; attempt < 6; ++attempt) {
        double outer = below ? inner - step : inner + step;
        bool outer_above;
        try {
            outer_above = above(outer);
        } catch (const Error&) {
            return fallback;
        }
        if (below ? !outer_above : outer_above)
            return below ? bisect_step(above, outer, inner, tol)
                         : bisect_step(above, inner, outer, tol);
        inner = outer;
        step *= 2.0;
    }
    return fallback;
}

} // namespace

double step_point(const ImplicitFn& f, std::span<const double> x,
                  const Interval& range, int rho, double tol)
{
    return step_point(f, x, range, rho, tol, false);
}

double step_point(const ImplicitFn& f, std::span<const double> x,
                  const Interval& range, int rho, double tol,
                  bool track_outside_range)
{
    if (rho != 1 && rho != -1)
        fail(Errc::invalid_argument, "rho must be +1 or -1");
    if (!(tol > 0))
        fail(Errc::invalid_argument, "bisection tolerance must be positive");

    const double r = rho;
    // phi = rho*f is a nondecreasing step in y under the rho hypothesis
    std::function<bool(double)> above = [&f, x, r](double y) {
        return r * f(x, y) >= 0.0;
    };

    double lo = range.lo;
    double hi = range.hi;
    const bool s_lo = above(lo);
    const bool s_hi = above(hi);
    const bool s_mid = above(0.5 * (lo + hi));

    // the indicator of {phi >= 0} must be nondecreasing along lo, mid, hi
    if ((s_lo && !s_mid) || (s_mid && !s_hi))
        fail(Errc::rho_violated, "rho violated in block: sign of f is not a single step");
    if (s_lo) {
        // phi >= 0 on all of V: the step lies at or below min V
        if (track_outside_range)
            return hunt_outside(above, range, true, tol, range.lo);
        return range.lo;
    }
    if (!s_hi) {
        // phi < 0 on all of V: the step lies above max V
        if (track_outside_range)
            return hunt_outside(above, range, false, tol, range.hi);
        return range.hi;
    }

    if (s_mid)
        hi = 0.5 * (lo + hi);
    else
        lo = 0.5 * (lo + hi);
    return bisect_step(above, lo, hi, tol);
}

double heaviside_volume(const HeavisideVolumeSpec& spec)
{
    spec.block.validate();
    if (spec.gauss_order < 2)
        fail(Errc::invalid_argument, "gauss_order must be >= 2");
    if (!(spec.range.lo < spec.range.hi))
        fail(Errc::invalid_argument, "range requires lo < hi");

    const std::size_t d = spec.block.dim();
    const GaussRule& rule = gauss_legendre(spec.gauss_order);
    const std::size_t m = rule.nodes.size();

    std::array<double, 3> mid{};
    std::array<double, 3> half{};
    for (std::size_t k = 0; k < d; ++k) {
        const Interval& axis = spec.block.axes[k].range;
        mid[k] = 0.5 * (axis.lo + axis.hi);
        half[k] = 0.5 * axis.length();
    }
    double weight_scale = 1.0;
    for (std::size_t k = 0; k < d; ++k)
        weight_scale *= half[k];

    std::size_t total = 1;
    for (std::size_t k = 0; k < d; ++k)
        total *= m;

    std::array<double, 3> x{};
    std::array<std::size_t, 3> idx{};
    double sum = 0.0;
    for (std::size_t flat = 0; flat < total; ++flat) {
        double w = weight_scale;
        for (std::size_t k = 0; k < d; ++k) {
            x[k] = mid[k] + half[k] * rule.nodes[idx[k]];
            w *= rule.weights[idx[k]];
        }
        double ystar = step_point(spec.f, std::span<const double>(x.data(), d),
                                  spec.range, spec.rho, spec.bisect_tol,
                                  spec.track_outside_range);
        double measure = spec.rho > 0 ? spec.range.hi - ystar : ystar - spec.range.lo;
        sum += w * measure;
        for (std::size_t k = d; k-- > 0;) {
            if (++idx[k] < m)
                break;
            idx[k] = 0;
        }
    }
    return sum;
}

} // namespace implicitpoly
