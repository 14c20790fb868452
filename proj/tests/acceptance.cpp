// Acceptance suite: one line per criterion, PASS/FAIL, nonzero exit when
// anything fails. Tolerances are fixed here, not configurable.

#include "implicitpoly/approx.hpp"
#include "implicitpoly/error.hpp"
#include "implicitpoly/expr.hpp"
#include "implicitpoly/io.hpp"
#include "implicitpoly/oracle.hpp"
#include "implicitpoly/system.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace implicitpoly;
namespace fs = std::filesystem;

namespace {

struct Gate {
    int failures = 0;

    void report(int id, const std::string& name, bool pass,
                const std::string& detail)
    {
        std::printf("%s criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", id,
                    name.c_str(), detail.c_str());
        std::fflush(stdout);
        if (!pass)
            ++failures;
    }
};

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
}

std::string fmt(const char* pattern, double a, double b = 0)
{
    char buf[160];
    std::snprintf(buf, sizeof buf, pattern, a, b);
    return buf;
}

// independent block integral of a centered monomial, used by the analytic
// right-hand sides below
double monomial_block_integral(const Interval& block, double center, int power)
{
    return (std::pow(block.hi - center, power + 1) -
            std::pow(block.lo - center, power + 1)) /
           (power + 1);
}

void criterion_1(Gate& gate)
{
    auto start = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
        auto f2 = Expression::parse("x^3*y1 - y2 - 1");
        auto problem = make_problem(
            f2, "y2", IntervalBox::parse("x=[0.5,1.5);y1=[1.5,2.5)"),
            {-2.0, 8.0}, {1.0, 2.0}, 1.0, 2);
        QuadConfig cfg;
        auto result = approximate(problem, cfg);
        const double expected[4][4] = {
            {1, 1, 0, 0}, {6, 3, 0, 0}, {6, 3, 0, 0}, {2, 1, 0, 0}};
        double worst = 0;
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                worst = std::max(worst, std::abs(result.poly.coeffs[i * 4 + j] -
                                                 expected[i][j]));
        double elapsed = seconds_since(start);
        pass = result.rho == -1 && worst <= 1e-6 && elapsed < 1.0;
        detail = fmt("max abs err %.3e, %.2f s", worst, elapsed);
    } catch (const Error& e) {
        detail = e.what();
    }
    gate.report(1, "stage-one tensor of the cubic pair is exact", pass, detail);
}

void criterion_2(Gate& gate)
{
    auto start = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
        auto f = Expression::parse("x1^2 + x2^2 + y^2 - 1");
        auto problem = make_problem(
            f, "y", IntervalBox::parse("x1=[-0.5,0.5);x2=[-0.5,0.5)"),
            {0.0, 1.5}, {0.0, 0.0}, 1.0, 3);
        QuadConfig cfg;
        cfg.gauss_order = 32;
        auto result = approximate(problem, cfg);

        // reference matrix, rows indexed by the power of x1
        const double published[8][8] = {
            {0.9999, 0, -0.5, 0, -0.1231, 0, -0.08, 0},
            {0, 0, 0, 0, 0, 0, 0, 0},
            {-0.5, 0, -0.2504, 0, -0.1808, 0, -0.2237, 0},
            {0, 0, 0, 0, 0, 0, 0, 0},
            {-0.1231, 0, -0.1808, 0, -0.204, 0, -0.3581, 0},
            {0, 0, 0, 0, 0, 0, 0, 0},
            {-0.08, 0, -0.2237, 0, -0.3581, 0, -1.3519, 0},
            {0, 0, 0, 0, 0, 0, 0, 0},
        };
        double worst_even = 0, worst_odd = 0;
        for (std::size_t i = 0; i < 8; ++i)
            for (std::size_t j = 0; j < 8; ++j) {
                double got = result.poly.coeffs[i * 8 + j];
                if (i % 2 == 0 && j % 2 == 0)
                    worst_even = std::max(worst_even,
                                          std::abs(got - published[i][j]));
                else
                    worst_odd = std::max(worst_odd, std::abs(got));
            }
        double elapsed = seconds_since(start);
        pass = worst_even <= 5e-3 && worst_odd <= 1e-6 && elapsed < 30.0;
        detail = fmt("even err %.3e, odd magnitude %.3e", worst_even, worst_odd) +
                 fmt(", %.1f s", elapsed);
    } catch (const Error& e) {
        detail = e.what();
    }
    gate.report(2, "sphere coefficients match the reference matrix", pass, detail);
}

void criterion_3(Gate& gate)
{
    bool pass = true;
    double worst_formula = 0, worst_center = 0;
    for (int level : {1, 2, 3}) {
        const int n = 1 << level;
        const double step = 1.0 / n;
        long double formula = powl(step, n);
        for (int i = 1; i < n; ++i)
            for (int j = i + 1; j <= n; ++j)
                formula *= (j - i) * static_cast<long double>(step);

        double at_zero = 0;
        for (double center : {0.0, 0.3, -1.7}) {
            double det =
                moment_determinant(moment_matrix({0.0, 1.0}, level, center));
            double rel_formula =
                std::abs(det - static_cast<double>(formula)) /
                static_cast<double>(formula);
            worst_formula = std::max(worst_formula, rel_formula);
            if (center == 0.0)
                at_zero = det;
            else
                worst_center = std::max(worst_center,
                                        std::abs(det - at_zero) / std::abs(at_zero));
        }
    }
    pass = worst_formula <= 1e-10 && worst_center <= 1e-10;
    gate.report(3, "moment determinants match the product formula",
                pass,
                fmt("formula rel %.3e, center rel %.3e", worst_formula,
                    worst_center));
}

void criterion_4(Gate& gate)
{
    std::mt19937_64 rng(20240401);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const std::vector<std::string> names{"x1", "x2"};
    auto box = IntervalBox::parse("x1=[-0.5,0.5);x2=[-0.5,0.5)");
    const Interval v{-2.0, 2.0};
    auto blocks = dyadic_blocks(box, 2);

    bool pass = true;
    double worst = 0;
    for (int trial = 0; trial < 20 && pass; ++trial) {
        // random polynomial with per-axis degree <= 3, scaled so its range
        // stays inside V
        double c[4][4];
        for (auto& row : c)
            for (double& v_ : row)
                v_ = 0.4 * u(rng) / 4.0;
        auto g = [&](double x1, double x2) {
            double acc = 0;
            double p1 = 1;
            for (int i = 0; i < 4; ++i) {
                double p2 = 1;
                for (int j = 0; j < 4; ++j) {
                    acc += c[i][j] * p1 * p2;
                    p2 *= x2;
                }
                p1 *= x1;
            }
            return acc;
        };
        // verify the range on a grid before using the slab identity
        for (int i = 0; i <= 20 && pass; ++i)
            for (int j = 0; j <= 20; ++j)
                if (std::abs(g(-0.5 + i / 20.0, -0.5 + j / 20.0)) >= 1.9) {
                    pass = false;
                    break;
                }
        if (!pass)
            break;

        ImplicitFn f = [&g](std::span<const double> x, double y) {
            return y - g(x[0], x[1]);
        };
        for (const auto& block : blocks) {
            HeavisideVolumeSpec spec{f, block, v, +1, 32, 1e-12 * v.length(),
                                     false};
            double mu = heaviside_volume(spec);
            double analytic = 0;
            double moments1[4], moments2[4];
            for (int p = 0; p < 4; ++p) {
                moments1[p] = monomial_block_integral(block.axes[0].range, 0.0, p);
                moments2[p] = monomial_block_integral(block.axes[1].range, 0.0, p);
            }
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j)
                    analytic += c[i][j] * moments1[i] * moments2[j];
            double err = std::abs(block.volume() * v.hi - mu - analytic);
            worst = std::max(worst, err / block.volume());
            if (err > 1e-8 * block.volume())
                pass = false;
        }
    }
    gate.report(4, "slab identity holds for random polynomial functions", pass,
                fmt("worst err %.3e of 1e-8 per unit volume", worst));
}

void criterion_5(Gate& gate)
{
    std::mt19937_64 rng(77002);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    bool pass = true;
    double worst = 0;
    for (int level : {1, 2}) {
        for (int dim : {1, 2}) {
            const std::size_t m = std::size_t{1} << level;
            std::size_t total = 1;
            for (int k = 0; k < dim; ++k)
                total *= m;

            IntervalBox box;
            box.axes.push_back({"x1", {-0.5, 0.5}});
            if (dim == 2)
                box.axes.push_back({"x2", {-0.3, 0.7}});
            std::vector<double> center{0.1};
            if (dim == 2)
                center.push_back(0.2);

            PolyTensor truth;
            truth.center = center;
            truth.shape.assign(dim, m);
            truth.coeffs.resize(total);
            for (auto& cv : truth.coeffs)
                cv = u(rng) / static_cast<double>(total);

            ImplicitFn f = [&truth](std::span<const double> x, double y) {
                return y - truth.eval(x);
            };
            // range from the coefficient bound: |g| <= sum |c| on these boxes
            double bound = 0;
            for (double cv : truth.coeffs)
                bound += std::abs(cv);
            ImplicitProblem p;
            p.f = f;
            p.domain = box;
            p.range = {-bound - 0.5, bound + 0.5};
            p.base_x = center;
            p.base_y = truth.eval(center);
            p.level = level;

            QuadConfig cfg;
            auto result = approximate(p, cfg);
            for (std::size_t i = 0; i < total; ++i) {
                double err = std::abs(result.poly.coeffs[i] - truth.coeffs[i]);
                worst = std::max(worst, err);
                if (err > 1e-8)
                    pass = false;
            }
        }
    }
    gate.report(5, "polynomial implicit functions below the degree cap are exact",
                pass, fmt("worst coefficient err %.3e of 1e-8", worst));
}

void criterion_6(Gate& gate)
{
    bool pass = false;
    std::string detail;
    try {
        auto f = Expression::parse("x1^2 + x2^2 + y^2 - 1");
        auto box = IntervalBox::parse("x1=[-0.5,0.5);x2=[-0.5,0.5)");
        QuadConfig cfg;
        cfg.gauss_order = 32;
        auto grid_error = [&](int level) {
            auto problem =
                make_problem(f, "y", box, {0.0, 1.5}, {0.0, 0.0}, 1.0, level);
            auto result = approximate(problem, cfg);
            double worst = 0;
            for (int i = 0; i < 21; ++i)
                for (int j = 0; j < 21; ++j) {
                    std::vector<double> x{-0.25 + 0.5 * i / 20.0,
                                          -0.25 + 0.5 * j / 20.0};
                    double truth = std::sqrt(1.0 - x[0] * x[0] - x[1] * x[1]);
                    worst = std::max(worst,
                                     std::abs(cesaro_eval(result, x) - truth));
                }
            return worst;
        };
        double e1 = grid_error(1);
        double e3 = grid_error(3);
        pass = e3 < e1;
        detail = fmt("E1 %.4f, E3 %.4f", e1, e3);
    } catch (const Error& e) {
        detail = e.what();
    }
    gate.report(6, "block-average grid error shrinks with the level", pass, detail);
}

void criterion_7(Gate& gate)
{
    auto start = std::chrono::steady_clock::now();
    bool pass = false;
    std::string detail;
    try {
        const std::vector<std::string> kX{"x"};
        SystemProblem sp;
        sp.f1 = expression_field2(Expression::parse("x + y1^2 + y2^3 - 6"), kX,
                                  "y1", "y2");
        sp.f2 = expression_field2(Expression::parse("x^3*y1 - y2 - 1"), kX,
                                  "y1", "y2");
        sp.domain = IntervalBox::parse("x=[0.5,1.5)");
        sp.y_names = {"y1", "y2"};
        sp.range1 = {1.5, 2.5};
        sp.range2 = {-2.0, 8.0};
        sp.base_x = {1.0};
        sp.base_y = {2.0, 1.0};
        sp.level_p = 2;
        sp.level_q = 4;
        sp.pivot = std::pair<int, int>{2, 2};

        double det = jacobian_check(sp);
        bool det_ok = std::abs(det - (-7.0)) <= 1e-4;

        QuadConfig cfg;
        cfg.gauss_order = 32;
        auto result = solve_system(sp, cfg);

        std::vector<double> base{1.0};
        double q_at_base = result.q_tensor.eval(base);
        bool base_ok = std::abs(q_at_base - 2.0) <= 0.06;

        double worst_resid = 0, worst_oracle = 0;
        for (int i = 0; i <= 40; ++i) {
            double x = 0.75 + 0.5 * i / 40.0;
            std::vector<double> at{x};
            auto y = result.solution_at(at);
            worst_resid = std::max(worst_resid, std::abs(sp.f1(at, y[0], y[1])));
            worst_resid = std::max(worst_resid, std::abs(sp.f2(at, y[0], y[1])));
            auto truth = pointwise_system(sp.f1, sp.f2, at, {2.0, 1.0}, 1e-12);
            worst_oracle = std::max(worst_oracle, std::abs(y[0] - truth[0]));
        }
        double elapsed = seconds_since(start);
        pass = det_ok && base_ok && worst_resid <= 0.05 && worst_oracle <= 0.05 &&
               elapsed < 120.0;
        detail = fmt("det %.5f, q(1) %.4f", det, q_at_base) +
                 fmt(", resid %.3e, oracle dist %.3e", worst_resid, worst_oracle) +
                 fmt(", %.1f s", elapsed);
    } catch (const Error& e) {
        detail = e.what();
    }
    gate.report(7, "two-equation cascade on the cubic pair", pass, detail);
}

void criterion_8(Gate& gate)
{
    bool pass = true;
    std::string detail;
    try {
        auto f = Expression::parse("x1^2 + x2^2 + y^2 - 1");
        auto box = IntervalBox::parse("x1=[-0.5,0.5);x2=[-0.5,0.5)");
        const Interval v{0.0, 1.5};
        const std::vector<std::string> names{"x1", "x2"};
        auto field = expression_field(f, names, "y");

        auto blocks = dyadic_blocks(box, 3);
        McConfig mc{10'000'000, 20240708, 0};
        double worst_sigma = 0;
        for (int k = 0; k < 10; ++k) {
            std::size_t bi = static_cast<std::size_t>(k) * (blocks.size() - 1) / 9;
            HeavisideVolumeSpec spec{field, blocks[bi], v, +1, 32,
                                     1e-12 * v.length(), false};
            double mu = heaviside_volume(spec);
            auto est = mc_volume(field, blocks[bi], v, mc);
            double sigmas = std::abs(mu - est.estimate) / est.std_error;
            worst_sigma = std::max(worst_sigma, sigmas);
            if (sigmas > 3.0)
                pass = false;
        }
        detail = fmt("worst deviation %.2f sigma of 3", worst_sigma);
    } catch (const Error& e) {
        pass = false;
        detail = e.what();
    }
    gate.report(8, "quadrature agrees with Monte Carlo on sphere blocks", pass,
                detail);
}

void criterion_9(Gate& gate)
{
    bool pass = false;
    std::string detail;
    try {
        fs::path dir = fs::temp_directory_path() / "implicitpoly_acceptance";
        fs::remove_all(dir);
        fs::create_directories(dir);

        auto run = [&](int threads, const std::string& tag) {
            std::string cmd =
                std::string(IMPLICITPOLY_CLI_PATH) +
                " approx --f \"x1^2 + x2^2 + y^2 - 1\" --x x1,x2 --y y"
                " --box \"x1=[-0.5,0.5);x2=[-0.5,0.5)\" --range \"[0,1.5)\""
                " --a 0,0 --b 1 --n 2 --gauss 16 --quiet --oracle"
                " --threads " +
                std::to_string(threads) + " --out " +
                (dir / (tag + ".json")).string() + " --grid " +
                (dir / (tag + ".csv")).string();
            return std::system(cmd.c_str());
        };
        auto slurp = [](const fs::path& p) {
            std::ifstream in(p, std::ios::binary);
            std::stringstream ss;
            ss << in.rdbuf();
            return ss.str();
        };
        bool ran = run(1, "one") == 0 && run(4, "four") == 0;
        std::string j1 = slurp(dir / "one.json");
        std::string j4 = slurp(dir / "four.json");
        std::string c1 = slurp(dir / "one.csv");
        std::string c4 = slurp(dir / "four.csv");
        pass = ran && !j1.empty() && j1 == j4 && !c1.empty() && c1 == c4;
        detail = fmt("json bytes %g, identical %g", static_cast<double>(j1.size()),
                     static_cast<double>(pass));
    } catch (const std::exception& e) {
        detail = e.what();
    }
    gate.report(9, "artifacts are byte-identical across thread counts", pass,
                detail);
}

} // namespace

int main()
{
    Gate gate;
    criterion_1(gate);
    criterion_2(gate);
    criterion_3(gate);
    criterion_4(gate);
    criterion_5(gate);
    criterion_6(gate);
    criterion_7(gate);
    criterion_8(gate);
    criterion_9(gate);
    if (gate.failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criteria failed\n", gate.failures);
    return 1;
}
