#include "implicitpoly/moments.hpp"

#include "implicitpoly/error.hpp"
#include "implicitpoly/parallel.hpp"

#include <cmath>
#include <string>

namespace implicitpoly {

namespace {

constexpr double kConditionCap = 1e12;
constexpr double kResidualCap = 1e-10;

std::string block_label(std::span<const std::size_t> shape, std::size_t flat)
{
    std::vector<std::size_t> idx(shape.size());
    for (std::size_t k = shape.size(); k-- > 0;) {
        idx[k] = flat % shape[k];
        flat /= shape[k];
    }
    std::string s = "(";
    for (std::size_t k = 0; k < idx.size(); ++k) {
        if (k)
            s += ',';
        s += std::to_string(idx[k]);
    }
    s += ')';
    return s;
}

// In-place mode-k transform of a row-major tensor: each mode-k fiber is
// either solved against `lu` or multiplied by `mat`.
void mode_apply(std::vector<double>& tensor, std::span<const std::size_t> shape,
                std::size_t mode, const LuFactor* lu, const Matrix* mat)
{
    const std::size_t d = shape.size();
    const std::size_t m = shape[mode];
    std::size_t stride = 1;
    for (std::size_t k = d; k-- > mode + 1;)
        stride *= shape[k];
    std::size_t outer = 1; // product of extents before `mode`
    for (std::size_t k = 0; k < mode; ++k)
        outer *= shape[k];

    std::vector<double> fiber(m);
    for (std::size_t o = 0; o < outer; ++o) {
        for (std::size_t s = 0; s < stride; ++s) {
            double* base = tensor.data() + o * m * stride + s;
            if (lu != nullptr) {
                lu->solve_strided(base, stride);
            } else {
                for (std::size_t i = 0; i < m; ++i) {
                    double acc = 0;
                    for (std::size_t j = 0; j < m; ++j)
                        acc += mat->at(i, j) * base[j * stride];
                    fiber[i] = acc;
                }
                for (std::size_t i = 0; i < m; ++i)
                    base[i * stride] = fiber[i];
            }
        }
    }
}

} // namespace

MomentMatrix moment_matrix(const Interval& axis, int level, double center,
                           int max_level)
{
    if (!(axis.lo < axis.hi))
        fail(Errc::invalid_argument, "axis requires lo < hi");
    if (level < 0)
        fail(Errc::invalid_argument, "level must be >= 0");
    if (level > max_level)
        fail(Errc::invalid_argument,
             "level " + std::to_string(level) + " above cap " + std::to_string(max_level));

    const std::size_t n = std::size_t{1} << level;
    MomentMatrix out;
    out.center = center;
    out.axis = axis;
    out.level = level;
    out.entries = Matrix(n);

    const double step = axis.length() / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double lo = axis.lo + static_cast<double>(i) * step;
        const double hi = (i + 1 == n) ? axis.hi : lo + step;
        // ((hi-a)^{j+1} - (lo-a)^{j+1}) / (j+1) with running powers
        double u = lo - center;
        double v = hi - center;
        double up = u;
        double vp = v;
        for (std::size_t j = 0; j < n; ++j) {
            out.entries.at(i, j) = (vp - up) / static_cast<double>(j + 1);
            up *= u;
            vp *= v;
        }
    }
    return out;
}

double moment_determinant(const MomentMatrix& m)
{
    const std::size_t n = std::size_t{1} << m.level;
    std::vector<long double> a(n * n);
    const long double lo0 = m.axis.lo;
    const long double hi0 = m.axis.hi;
    const long double center = m.center;
    const long double step = (hi0 - lo0) / static_cast<long double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const long double lo = lo0 + static_cast<long double>(i) * step;
        const long double hi = (i + 1 == n) ? hi0 : lo + step;
        long double up = lo - center;
        long double vp = hi - center;
        long double u = up;
        long double v = vp;
        for (std::size_t j = 0; j < n; ++j) {
            a[i * n + j] = (vp - up) / static_cast<long double>(j + 1);
            up *= u;
            vp *= v;
        }
    }

    long double det = 1.0L;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t piv = k;
        long double best = std::abs(a[k * n + k]);
        for (std::size_t i = k + 1; i < n; ++i) {
            long double mag = std::abs(a[i * n + k]);
            if (mag > best) {
                best = mag;
                piv = i;
            }
        }
        if (best == 0.0L)
            return 0.0;
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(a[k * n + j], a[piv * n + j]);
            det = -det;
        }
        det *= a[k * n + k];
        for (std::size_t i = k + 1; i < n; ++i) {
            const long double l = a[i * n + k] / a[k * n + k];
            for (std::size_t j = k + 1; j < n; ++j)
                a[i * n + j] -= l * a[k * n + j];
        }
    }
    return static_cast<double>(det);
}

MeanTensor mean_tensor(const ImplicitFn& f, const IntervalBox& domain,
                       const Interval& range, int rho, int level,
                       const QuadConfig& cfg)
{
    domain.validate();
    if (rho != 1 && rho != -1)
        fail(Errc::invalid_argument, "rho must be +1 or -1");
    if (level < 0 || level > cfg.max_level)
        fail(Errc::invalid_argument, "level above cap");

    const std::size_t per_axis = std::size_t{1} << level;
    MeanTensor out;
    out.level = level;
    out.rho = rho;
    out.range = range;
    out.shape.assign(domain.dim(), per_axis);

    auto blocks = dyadic_blocks(domain, level);
    out.entries.assign(blocks.size(), 0.0);

    const double selected = rho > 0 ? range.hi : range.lo;
    const double bisect_tol = cfg.bisect_tol_rel * range.length();

    parallel_for(blocks.size(), cfg.threads, [&](std::size_t i) {
        HeavisideVolumeSpec spec{f, blocks[i], range, rho, cfg.gauss_order,
                                 bisect_tol, cfg.track_outside_range};
        double mu;
        try {
            mu = heaviside_volume(spec);
        } catch (const Error& e) {
            if (e.code() == Errc::rho_violated)
                fail(Errc::rho_violated, std::string(e.what()) + " at block " +
                                             block_label(out.shape, i));
            throw;
        }
        out.entries[i] = blocks[i].volume() * selected - rho * mu;
    });
    return out;
}

double PolyTensor::eval(std::span<const double> x) const
{
    if (x.size() != shape.size() || center.size() != shape.size())
        fail(Errc::invalid_argument, "point dimension does not match tensor");
    // Horner over the leading axis of each row-major sub-tensor.
    struct Rec {
        const PolyTensor& t;
        std::span<const double> u;
        double run(std::size_t axis, std::size_t offset, std::size_t span_len) const
        {
            const std::size_t m = t.shape[axis];
            const std::size_t sub = span_len / m;
            if (axis + 1 == t.shape.size()) {
                double acc = t.coeffs[offset + m - 1];
                for (std::size_t j = m - 1; j-- > 0;)
                    acc = acc * u[axis] + t.coeffs[offset + j];
                return acc;
            }
            double acc = run(axis + 1, offset + (m - 1) * sub, sub);
            for (std::size_t j = m - 1; j-- > 0;)
                acc = acc * u[axis] + run(axis + 1, offset + j * sub, sub);
            return acc;
        }
    };
    std::vector<double> u(x.size());
    for (std::size_t k = 0; k < x.size(); ++k)
        u[k] = x[k] - center[k];
    std::size_t total = coeffs.size();
    return Rec{*this, u}.run(0, 0, total);
}

double PolyTensor::average(const IntervalBox& block) const
{
    if (block.dim() != shape.size())
        fail(Errc::invalid_argument, "block dimension does not match tensor");
    // per-axis centered monomial integrals over the block
    std::vector<std::vector<double>> axis_moments(shape.size());
    for (std::size_t k = 0; k < shape.size(); ++k) {
        const Interval& axis = block.axes[k].range;
        axis_moments[k].resize(shape[k]);
        double u = axis.lo - center[k];
        double v = axis.hi - center[k];
        double up = u;
        double vp = v;
        for (std::size_t j = 0; j < shape[k]; ++j) {
            axis_moments[k][j] = (vp - up) / static_cast<double>(j + 1);
            up *= u;
            vp *= v;
        }
    }
    double integral = 0;
    std::vector<std::size_t> idx(shape.size(), 0);
    for (std::size_t flat = 0; flat < coeffs.size(); ++flat) {
        double term = coeffs[flat];
        for (std::size_t k = 0; k < shape.size(); ++k)
            term *= axis_moments[k][idx[k]];
        integral += term;
        for (std::size_t k = shape.size(); k-- > 0;) {
            if (++idx[k] < shape[k])
                break;
            idx[k] = 0;
        }
    }
    return integral / block.volume();
}

std::vector<double> contract_forward(const std::vector<MomentMatrix>& axis_moments,
                                     const PolyTensor& coeffs)
{
    std::vector<double> out = coeffs.coeffs;
    for (std::size_t k = 0; k < axis_moments.size(); ++k)
        mode_apply(out, coeffs.shape, k, nullptr, &axis_moments[k].entries);
    return out;
}

SolvedCoefficients solve_coefficients(const std::vector<MomentMatrix>& axis_moments,
                                      const MeanTensor& rhs)
{
    const std::size_t d = rhs.shape.size();
    if (axis_moments.size() != d)
        fail(Errc::invalid_argument, "one moment matrix required per axis");
    std::size_t total = 1;
    for (std::size_t k = 0; k < d; ++k) {
        if (axis_moments[k].entries.size() != rhs.shape[k])
            fail(Errc::invalid_argument, "moment matrix size does not match tensor");
        total *= rhs.shape[k];
    }
    if (rhs.entries.size() != total)
        fail(Errc::invalid_argument, "mean tensor storage does not match shape");

    SolvedCoefficients out;
    out.condition_estimates.reserve(d);
    std::vector<LuFactor> factors;
    factors.reserve(d);
    for (std::size_t k = 0; k < d; ++k) {
        double cond = condition_1(axis_moments[k].entries);
        out.condition_estimates.push_back(cond);
        if (!(cond <= kConditionCap))
            fail(Errc::ill_conditioned,
                 "ill-conditioned; lower n (axis " + std::to_string(k) +
                     " condition estimate " + std::to_string(cond) + ")");
        factors.push_back(LuFactor::compute(axis_moments[k].entries));
    }

    out.poly.shape = rhs.shape;
    out.poly.coeffs = rhs.entries;
    out.poly.center.reserve(d);
    for (const auto& m : axis_moments)
        out.poly.center.push_back(m.center);
    for (std::size_t k = 0; k < d; ++k)
        mode_apply(out.poly.coeffs, out.poly.shape, k, &factors[k], nullptr);

    // defining-equation residual: contracting back must reproduce B
    std::vector<double> back = contract_forward(axis_moments, out.poly);
    double res = 0;
    for (std::size_t i = 0; i < back.size(); ++i)
        res = std::max(res, std::abs(back[i] - rhs.entries[i]));
    out.residual_norm = res;
    double scale = norm_inf(rhs.entries);
    if (res > kResidualCap * scale)
        fail(Errc::ill_conditioned, "coefficient solve residual " +
                                        std::to_string(res) + " exceeds " +
                                        std::to_string(kResidualCap * scale));
    return out;
}

} // namespace implicitpoly
