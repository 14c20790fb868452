#include "implicitpoly/approx.hpp"

#include "implicitpoly/error.hpp"

#include <array>
#include <cmath>
#include <string>

namespace implicitpoly {

namespace {

constexpr double kTolRootRel = 1e-9;

int sign_of(double v)
{
    return v > 0 ? +1 : v < 0 ? -1 : 0;
}

[[noreturn]] void rethrow_with_stage(const Error& e, const char* stage)
{
    fail(e.code(), std::string(stage) + ": " + e.what());
}

void validate_dimensions(const ImplicitProblem& p)
{
    p.domain.validate();
    if (!(p.range.lo < p.range.hi))
        fail(Errc::invalid_argument, "range requires lo < hi");
    if (p.base_x.size() != p.domain.dim())
        fail(Errc::invalid_argument, "base point dimension does not match domain");
    if (!p.f)
        fail(Errc::invalid_argument, "problem has no equation");
}

void validate_base(const ImplicitProblem& p)
{
    for (std::size_t k = 0; k < p.base_x.size(); ++k)
        if (!p.domain.axes[k].range.contains(p.base_x[k]))
            fail(Errc::invalid_argument, "base point is outside the domain box");
    if (!p.range.contains(p.base_y))
        fail(Errc::invalid_argument, "base value is outside the range interval");
    if (p.check_base_residual) {
        std::span<const double> a(p.base_x);
        double at_base = p.f(a, p.base_y);
        double scale = 1.0 + std::max(std::abs(p.f(a, p.range.lo)),
                                      std::abs(p.f(a, p.range.hi)));
        if (std::abs(at_base) > kTolRootRel * scale)
            fail(Errc::invalid_argument,
                 "base point is not on the zero set: |f(a,b)| = " +
                     std::to_string(std::abs(at_base)));
    }
}

} // namespace

ImplicitProblem make_problem(const Expression& f, const std::string& y_name,
                             IntervalBox domain, Interval range,
                             std::vector<double> base_x, double base_y,
                             int level)
{
    domain.validate();
    auto x_names = domain.axis_names();
    for (const auto& n : x_names)
        if (n == y_name)
            fail(Errc::invalid_argument,
                 "dependent variable '" + y_name + "' duplicates a domain axis");
    ImplicitProblem p;
    p.f = expression_field(f, x_names, y_name);
    p.domain = std::move(domain);
    p.range = range;
    p.base_x = std::move(base_x);
    p.base_y = base_y;
    p.level = level;
    validate_dimensions(p);
    return p;
}

int detect_rho(const ImplicitProblem& p)
{
    validate_dimensions(p);
    std::span<const double> a(p.base_x);
    const double f_lo = p.f(a, p.range.lo);
    const double f_hi = p.f(a, p.range.hi);

    int rho;
    if (f_lo < 0 && f_hi > 0)
        rho = +1;
    else if (f_lo > 0 && f_hi < 0)
        rho = -1;
    else
        fail(Errc::no_bracket,
             "V does not bracket the solution at the base point (f = " +
                 std::to_string(f_lo) + " at min V, " + std::to_string(f_hi) +
                 " at max V)");

    // Validate rho across the domain: 4 samples per axis, endpoints
    // included. A sample column may have no crossing at all (the step lies
    // outside V there, handled by the no-crossing conventions downstream),
    // but a bracket in the opposite direction contradicts the constancy of
    // rho.
    const std::size_t d = p.domain.dim();
    constexpr std::size_t kPerAxis = 4;
    std::size_t total = 1;
    for (std::size_t k = 0; k < d; ++k)
        total *= kPerAxis;
    std::array<double, 3> x{};
    std::array<std::size_t, 3> idx{};
    for (std::size_t flat = 0; flat < total; ++flat) {
        for (std::size_t k = 0; k < d; ++k) {
            const Interval& axis = p.domain.axes[k].range;
            x[k] = axis.lo + axis.length() * static_cast<double>(idx[k]) /
                                 static_cast<double>(kPerAxis - 1);
        }
        std::span<const double> xs(x.data(), d);
        if (sign_of(rho * p.f(xs, p.range.lo)) > 0 &&
            sign_of(rho * p.f(xs, p.range.hi)) < 0)
            fail(Errc::rho_violated, "rho not constant on U x V");
        for (std::size_t k = d; k-- > 0;) {
            if (++idx[k] < kPerAxis)
                break;
            idx[k] = 0;
        }
    }
    return rho;
}

ApproxResult approximate(const ImplicitProblem& p, const QuadConfig& cfg)
{
    validate_dimensions(p);

    ApproxResult out;
    try {
        out.rho = detect_rho(p);
    } catch (const Error& e) {
        rethrow_with_stage(e, "rho detection");
    }
    validate_base(p);

    std::vector<MomentMatrix> axis_moments;
    axis_moments.reserve(p.domain.dim());
    try {
        for (std::size_t k = 0; k < p.domain.dim(); ++k)
            axis_moments.push_back(moment_matrix(p.domain.axes[k].range, p.level,
                                                 p.base_x[k], cfg.max_level));
    } catch (const Error& e) {
        rethrow_with_stage(e, "moment matrix");
    }

    try {
        out.means = mean_tensor(p.f, p.domain, p.range, out.rho, p.level, cfg);
    } catch (const Error& e) {
        rethrow_with_stage(e, "mean tensor");
    }

    try {
        SolvedCoefficients solved = solve_coefficients(axis_moments, out.means);
        out.poly = std::move(solved.poly);
        out.diagnostics.condition_estimates = std::move(solved.condition_estimates);
        out.diagnostics.residual_norm = solved.residual_norm;
    } catch (const Error& e) {
        rethrow_with_stage(e, "coefficient solve");
    }

    out.diagnostics.gauss_order = cfg.gauss_order;
    out.diagnostics.bisect_tol = cfg.bisect_tol_rel * p.range.length();
    out.domain = p.domain;
    out.range = p.range;
    out.level = p.level;
    return out;
}

double cesaro_eval(const ApproxResult& result, std::span<const double> x, int level)
{
    DyadicGrid grid{result.domain, level};
    BlockRef block = shrinking_block(grid, x);
    return result.poly.average(block.box);
}

double cesaro_eval(const ApproxResult& result, std::span<const double> x)
{
    return cesaro_eval(result, x, result.level);
}

} // namespace implicitpoly
