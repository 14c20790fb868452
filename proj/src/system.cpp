#include "implicitpoly/system.hpp"

#include "implicitpoly/error.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace implicitpoly {

namespace {

constexpr double kTolJac = 1e-6;

void validate(const SystemProblem& sp)
{
    sp.domain.validate();
    if (!sp.f1 || !sp.f2)
        fail(Errc::invalid_argument, "system needs two equations");
    if (sp.base_x.size() != sp.domain.dim())
        fail(Errc::invalid_argument, "base point dimension does not match domain");
    if (!(sp.range1.lo < sp.range1.hi) || !(sp.range2.lo < sp.range2.hi))
        fail(Errc::invalid_argument, "ranges require lo < hi");
    if (sp.y_names[0].empty() || sp.y_names[1].empty() ||
        sp.y_names[0] == sp.y_names[1])
        fail(Errc::invalid_argument, "dependent variables need two distinct names");
}

const SystemFn& equation(const SystemProblem& sp, int i)
{
    return i == 1 ? sp.f1 : sp.f2;
}

Interval range_of(const SystemProblem& sp, int j)
{
    return j == 1 ? sp.range1 : sp.range2;
}

} // namespace

std::array<std::array<double, 2>, 2> jacobian_partials(const SystemProblem& sp,
                                                       double step)
{
    validate(sp);
    if (!(step > 0))
        fail(Errc::invalid_argument, "step must be positive");
    std::span<const double> a(sp.base_x);
    std::array<std::array<double, 2>, 2> partials{};
    for (int i = 1; i <= 2; ++i) {
        const SystemFn& f = equation(sp, i);
        for (int j = 1; j <= 2; ++j) {
            double h = step * (1.0 + std::abs(sp.base_y[j - 1]));
            double y1p = sp.base_y[0] + (j == 1 ? h : 0.0);
            double y1m = sp.base_y[0] - (j == 1 ? h : 0.0);
            double y2p = sp.base_y[1] + (j == 2 ? h : 0.0);
            double y2m = sp.base_y[1] - (j == 2 ? h : 0.0);
            partials[i - 1][j - 1] = (f(a, y1p, y2p) - f(a, y1m, y2m)) / (2.0 * h);
        }
    }
    return partials;
}

double jacobian_check(const SystemProblem& sp, double step)
{
    auto p = jacobian_partials(sp, step);
    double det = p[0][0] * p[1][1] - p[0][1] * p[1][0];
    double scale = 1.0;
    for (const auto& row : p)
        for (double v : row)
            scale = std::max(scale, std::abs(v));
    if (std::abs(det) <= kTolJac * scale * scale)
        fail(Errc::degenerate_system,
             "degenerate system: |det J| = " + std::to_string(std::abs(det)));
    return det;
}

std::pair<int, int> choose_pivot(const SystemProblem& sp, double step)
{
    auto partials = jacobian_partials(sp, step);
    double scale = 1.0;
    for (const auto& row : partials)
        for (double v : row)
            scale = std::max(scale, std::abs(v));

    if (sp.pivot) {
        auto [i, j] = *sp.pivot;
        if (i < 1 || i > 2 || j < 1 || j > 2)
            fail(Errc::invalid_argument, "pivot indices must be 1 or 2");
        if (std::abs(partials[i - 1][j - 1]) <= kTolJac * scale)
            fail(Errc::invalid_argument,
                 "user-supplied pivot (" + std::to_string(i) + "," +
                     std::to_string(j) + ") has vanishing partial");
        return *sp.pivot;
    }

    // lexicographic tie-break, with a tolerance so finite-difference noise
    // cannot decide a tie
    std::pair<int, int> best{1, 1};
    double best_mag = -1.0;
    for (int i = 1; i <= 2; ++i)
        for (int j = 1; j <= 2; ++j) {
            double mag = std::abs(partials[i - 1][j - 1]);
            if (mag > best_mag * (1.0 + 1e-9) + 1e-300) {
                best_mag = mag;
                best = {i, j};
            }
        }
    if (best_mag <= kTolJac * scale)
        fail(Errc::degenerate_system, "all partials vanish at the base point");
    return best;
}

ImplicitProblem stage_one_problem(const SystemProblem& sp,
                                  std::pair<int, int> pivot)
{
    validate(sp);
    const auto [i, j] = pivot;
    const int jp = 3 - j; // the other dependent variable

    ImplicitProblem p;
    p.domain = sp.domain;
    p.domain.axes.push_back({sp.y_names[jp - 1], range_of(sp, jp)});
    p.domain.validate();
    p.range = range_of(sp, j);
    p.base_x = sp.base_x;
    p.base_x.push_back(sp.base_y[jp - 1]);
    p.base_y = sp.base_y[j - 1];
    p.level = sp.level_p;

    const SystemFn f = equation(sp, i);
    if (j == 1) {
        p.f = [f](std::span<const double> x, double y) {
            return f(x.first(x.size() - 1), y, x.back());
        };
    } else {
        p.f = [f](std::span<const double> x, double y) {
            return f(x.first(x.size() - 1), x.back(), y);
        };
    }
    return p;
}

ImplicitProblem compose_second_stage(const SystemProblem& sp,
                                     const ApproxResult& stage1,
                                     std::pair<int, int> pivot)
{
    validate(sp);
    const auto [i, j] = pivot;
    const int ip = 3 - i;
    const int jp = 3 - j;

    ImplicitProblem p;
    p.domain = sp.domain;
    p.range = range_of(sp, jp);
    p.base_x = sp.base_x;
    p.base_y = sp.base_y[jp - 1];
    p.level = sp.level_q;
    // (a, b_j') sits on the zero set of h only up to the stage-1 error
    p.check_base_residual = false;

    const SystemFn f = equation(sp, ip);
    const PolyTensor sub = stage1.poly;
    if (j == 1) {
        p.f = [f, sub](std::span<const double> x, double y) {
            std::array<double, 4> ext{};
            for (std::size_t k = 0; k < x.size(); ++k)
                ext[k] = x[k];
            ext[x.size()] = y;
            return f(x, sub.eval(std::span<const double>(ext.data(), x.size() + 1)), y);
        };
    } else {
        p.f = [f, sub](std::span<const double> x, double y) {
            std::array<double, 4> ext{};
            for (std::size_t k = 0; k < x.size(); ++k)
                ext[k] = x[k];
            ext[x.size()] = y;
            return f(x, y, sub.eval(std::span<const double>(ext.data(), x.size() + 1)));
        };
    }
    return p;
}

std::array<double, 2> SystemResult::solution_at(std::span<const double> x) const
{
    double q = q_tensor.eval(x);
    std::vector<double> ext(x.begin(), x.end());
    ext.push_back(q);
    double p = p_tensor.eval(ext);
    std::array<double, 2> y{};
    y[static_cast<std::size_t>(pivot.second - 1)] = p;
    y[static_cast<std::size_t>(2 - pivot.second)] = q;
    return y;
}

SystemResult solve_system(const SystemProblem& sp, const QuadConfig& cfg)
{
    validate(sp);
    jacobian_check(sp);
    const auto pivot = choose_pivot(sp);

    SystemResult out;
    out.pivot = pivot;

    ApproxResult stage1;
    try {
        stage1 = approximate(stage_one_problem(sp, pivot), cfg);
    } catch (const Error& e) {
        fail(e.code(), std::string("stage-1: ") + e.what());
    }

    // The substituted equation's step routinely leaves V_j' on part of R
    // (the range was picked for the pivot equation), so stage 2 tracks it
    // outside the slab to keep recovering the true solution there.
    QuadConfig stage2_cfg = cfg;
    stage2_cfg.track_outside_range = true;

    ApproxResult stage2;
    try {
        stage2 = approximate(compose_second_stage(sp, stage1, pivot), stage2_cfg);
    } catch (const Error& e) {
        fail(e.code(), std::string("stage-2: ") + e.what());
    }

    out.p_tensor = std::move(stage1.poly);
    out.q_tensor = std::move(stage2.poly);
    out.rho_stage1 = stage1.rho;
    out.rho_stage2 = stage2.rho;
    out.diag_stage1 = std::move(stage1.diagnostics);
    out.diag_stage2 = std::move(stage2.diagnostics);
    return out;
}

} // namespace implicitpoly
