#include "implicitpoly/approx.hpp"
#include "implicitpoly/error.hpp"
#include "implicitpoly/expr.hpp"
#include "implicitpoly/io.hpp"
#include "implicitpoly/oracle.hpp"
#include "implicitpoly/system.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using json = nlohmann::json;
using namespace implicitpoly;

namespace {

int exit_code_for(Errc code)
{
    switch (code) {
    case Errc::syntax:
    case Errc::unknown_function:
    case Errc::unbound_variable:
    case Errc::domain:
    case Errc::invalid_argument:
    case Errc::io:
        return 2;
    case Errc::no_bracket:
    case Errc::rho_violated:
        return 3;
    case Errc::ill_conditioned:
        return 4;
    case Errc::degenerate_system:
    case Errc::newton_divergence:
        return 5;
    }
    return 2;
}

std::vector<double> parse_reals(const std::string& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(part, &used));
            while (used < part.size() &&
                   std::isspace(static_cast<unsigned char>(part[used])))
                ++used;
            if (used != part.size())
                fail(Errc::syntax, "malformed number '" + part + "'");
        } catch (const Error&) {
            throw;
        } catch (const std::exception&) {
            fail(Errc::syntax, "malformed number list '" + text + "'");
        }
    }
    if (out.empty())
        fail(Errc::syntax, "empty number list");
    return out;
}

std::vector<std::string> parse_names(const std::string& text)
{
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        while (!part.empty() && std::isspace(static_cast<unsigned char>(part.front())))
            part.erase(part.begin());
        while (!part.empty() && std::isspace(static_cast<unsigned char>(part.back())))
            part.pop_back();
        if (part.empty())
            fail(Errc::syntax, "empty name in list '" + text + "'");
        out.push_back(part);
    }
    return out;
}

json load_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        fail(Errc::io, "cannot open '" + path + "'");
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded())
        fail(Errc::io, "malformed JSON in '" + path + "'");
    return j;
}

void write_text_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        fail(Errc::io, "cannot write '" + path + "'");
    out << content;
    if (!out)
        fail(Errc::io, "write failed for '" + path + "'");
}

// CSV with a mandatory header, comma separators, '.' decimals, 17
// significant digits and LF line endings.
std::string render_csv(const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& rows)
{
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i)
            out += ',';
        out += header[i];
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i)
                out += ',';
            out += format_g17(row[i]);
        }
        out += '\n';
    }
    return out;
}

// Evenly spaced closed grid on one axis; the last point lands exactly on hi.
double grid_point(const Interval& axis, int i, int count)
{
    if (i + 1 == count)
        return axis.hi;
    return axis.lo + axis.length() * static_cast<double>(i) /
                         static_cast<double>(count - 1);
}

struct CommonOptions {
    int gauss = 32;
    double bisect_tol = 1e-12; // relative to |V|
    unsigned threads = 0;
    bool quiet = false;
    std::string out_path;
    std::string grid_path;
    std::string config_path;
};

QuadConfig quad_config(const CommonOptions& opts)
{
    QuadConfig cfg;
    cfg.gauss_order = opts.gauss;
    cfg.bisect_tol_rel = opts.bisect_tol;
    cfg.threads = opts.threads;
    return cfg;
}

// config file values fill in flags the user did not pass
template <typename T>
void config_fill(const CLI::App* cmd, const json& cfg, const std::string& flag,
                 const std::string& key, T& var)
{
    if (!cfg.contains(key))
        return;
    if (cmd->count(flag) > 0)
        return;
    try {
        var = cfg.at(key).get<T>();
    } catch (const json::exception& e) {
        fail(Errc::io, "config key '" + key + "': " + e.what());
    }
}

struct ApproxOptions {
    std::string f_text;
    std::string x_names;
    std::string y_name = "y";
    std::string box_text;
    std::string range_text;
    std::string a_text;
    double b = 0;
    int level = 0;
    std::string ref_text;
    bool use_oracle = false;
    CommonOptions common;
};

int run_approx(const ApproxOptions& opts)
{
    auto f = Expression::parse(opts.f_text);
    auto box = IntervalBox::parse(opts.box_text);
    auto range = Interval::parse(opts.range_text);
    auto a = parse_reals(opts.a_text);

    if (!opts.x_names.empty()) {
        auto names = parse_names(opts.x_names);
        if (names != box.axis_names())
            fail(Errc::invalid_argument,
                 "--x names must match the box axes in order");
    }

    auto problem = make_problem(f, opts.y_name, box, range, a, opts.b, opts.level);
    auto result = approximate(problem, quad_config(opts.common));

    if (!opts.common.quiet)
        std::printf("rho=%+d residual=%.3e\n", result.rho,
                    result.diagnostics.residual_norm);

    std::string out_path =
        opts.common.out_path.empty() ? "coeffs.json" : opts.common.out_path;
    write_text_file(out_path, approx_to_json(result).dump(2) + "\n");
    if (!opts.common.quiet)
        std::printf("wrote %s\n", out_path.c_str());

    if (!opts.common.grid_path.empty()) {
        const std::size_t d = box.dim();
        const int count = 21;
        std::optional<Expression> ref;
        if (!opts.ref_text.empty())
            ref = Expression::parse(opts.ref_text);
        const bool with_ref = ref.has_value() || opts.use_oracle;

        std::vector<std::string> header = box.axis_names();
        header.push_back("g_n");
        header.push_back("cesaro");
        if (with_ref) {
            header.push_back("ref");
            header.push_back("abs_err");
        }

        std::vector<std::vector<double>> rows;
        std::vector<int> idx(d, 0);
        std::size_t total = 1;
        for (std::size_t k = 0; k < d; ++k)
            total *= count;
        auto x_names = box.axis_names();
        for (std::size_t flat = 0; flat < total; ++flat) {
            std::vector<double> x(d);
            for (std::size_t k = 0; k < d; ++k)
                x[k] = grid_point(box.axes[k].range, idx[k], count);
            std::vector<double> row = x;
            double gn = result.poly.eval(x);
            row.push_back(gn);
            row.push_back(cesaro_eval(result, x));
            if (with_ref) {
                double rv = std::numeric_limits<double>::quiet_NaN();
                try {
                    if (ref) {
                        std::map<std::string, double> binding;
                        for (std::size_t k = 0; k < d; ++k)
                            binding[x_names[k]] = x[k];
                        rv = ref->eval(binding);
                    } else {
                        rv = pointwise_implicit(problem.f, x, range, result.rho,
                                                1e-12 * range.length());
                    }
                } catch (const Error&) {
                    // reference undefined here; emit NaN so the grid stays
                    // rectangular
                }
                row.push_back(rv);
                row.push_back(std::abs(gn - rv));
            }
            rows.push_back(std::move(row));
            for (std::size_t k = d; k-- > 0;) {
                if (++idx[k] < count)
                    break;
                idx[k] = 0;
            }
        }
        write_text_file(opts.common.grid_path, render_csv(header, rows));
        if (!opts.common.quiet)
            std::printf("wrote %s\n", opts.common.grid_path.c_str());
    }
    return 0;
}

struct SystemOptions {
    std::string f1_text, f2_text;
    std::string x_names;
    std::string y_names = "y1,y2";
    std::string box_text;
    std::string range1_text, range2_text;
    std::string a_text;
    std::string b_text;
    int level_p = 0;
    int level_q = 0;
    std::string pivot_text;
    CommonOptions common;
};

int run_system(const SystemOptions& opts)
{
    SystemProblem sp;
    auto x_axis_names = IntervalBox::parse(opts.box_text).axis_names();
    if (!opts.x_names.empty() && parse_names(opts.x_names) != x_axis_names)
        fail(Errc::invalid_argument, "--x names must match the box axes in order");

    auto y_names = parse_names(opts.y_names);
    if (y_names.size() != 2)
        fail(Errc::invalid_argument, "--y needs exactly two names");

    sp.f1 = expression_field2(Expression::parse(opts.f1_text), x_axis_names,
                              y_names[0], y_names[1]);
    sp.f2 = expression_field2(Expression::parse(opts.f2_text), x_axis_names,
                              y_names[0], y_names[1]);
    sp.domain = IntervalBox::parse(opts.box_text);
    sp.y_names = {y_names[0], y_names[1]};
    sp.range1 = Interval::parse(opts.range1_text);
    sp.range2 = Interval::parse(opts.range2_text);
    sp.base_x = parse_reals(opts.a_text);
    auto b = parse_reals(opts.b_text);
    if (b.size() != 2)
        fail(Errc::invalid_argument, "--b needs exactly two values");
    sp.base_y = {b[0], b[1]};
    sp.level_p = opts.level_p;
    sp.level_q = opts.level_q;
    if (!opts.pivot_text.empty()) {
        auto pv = parse_reals(opts.pivot_text);
        if (pv.size() != 2 || pv[0] != std::floor(pv[0]) || pv[1] != std::floor(pv[1]))
            fail(Errc::invalid_argument, "--pivot needs two integers i,j");
        sp.pivot = std::pair<int, int>{static_cast<int>(pv[0]),
                                       static_cast<int>(pv[1])};
    }

    double det = jacobian_check(sp);
    auto result = solve_system(sp, quad_config(opts.common));

    if (!opts.common.quiet)
        std::printf("det=%.6f pivot=(%d,%d) rho1=%+d rho2=%+d\n", det,
                    result.pivot.first, result.pivot.second, result.rho_stage1,
                    result.rho_stage2);

    std::string out_path =
        opts.common.out_path.empty() ? "system.json" : opts.common.out_path;
    write_text_file(out_path,
                    system_to_json(result, sp.domain, sp.y_names, det).dump(2) + "\n");
    if (!opts.common.quiet)
        std::printf("wrote %s\n", out_path.c_str());

    if (!opts.common.grid_path.empty()) {
        const std::size_t d = sp.domain.dim();
        const int count = 41;
        std::vector<std::string> header = sp.domain.axis_names();
        header.push_back(sp.y_names[0]);
        header.push_back(sp.y_names[1]);
        header.push_back("r1");
        header.push_back("r2");

        std::vector<std::vector<double>> rows;
        std::vector<int> idx(d, 0);
        std::size_t total = 1;
        for (std::size_t k = 0; k < d; ++k)
            total *= count;
        for (std::size_t flat = 0; flat < total; ++flat) {
            std::vector<double> x(d);
            for (std::size_t k = 0; k < d; ++k)
                x[k] = grid_point(sp.domain.axes[k].range, idx[k], count);
            auto y = result.solution_at(x);
            std::vector<double> row = x;
            row.push_back(y[0]);
            row.push_back(y[1]);
            row.push_back(sp.f1(x, y[0], y[1]));
            row.push_back(sp.f2(x, y[0], y[1]));
            rows.push_back(std::move(row));
            for (std::size_t k = d; k-- > 0;) {
                if (++idx[k] < count)
                    break;
                idx[k] = 0;
            }
        }
        write_text_file(opts.common.grid_path, render_csv(header, rows));
        if (!opts.common.quiet)
            std::printf("wrote %s\n", opts.common.grid_path.c_str());
    }
    return 0;
}

struct VerifyOptions {
    std::uint64_t mc_samples = 10'000'000;
    std::uint64_t seed = 20240708;
    CommonOptions common;
};

int run_verify(const VerifyOptions& opts, const json& cfg)
{
    if (!cfg.is_object())
        fail(Errc::io, "verify needs a JSON config object");
    auto need = [&](const char* key) -> const json& {
        if (!cfg.contains(key))
            fail(Errc::io, std::string("verify config missing '") + key + "'");
        return cfg.at(key);
    };

    std::string f_text = need("f").get<std::string>();
    std::string y_name = cfg.value("y", std::string("y"));
    std::string box_text = need("box").get<std::string>();
    std::string range_text = need("range").get<std::string>();
    std::string a_text = need("a").get<std::string>();
    double b = need("b").get<double>();
    int level = need("n").get<int>();

    CommonOptions common = opts.common;
    common.gauss = cfg.value("gauss", common.gauss);
    common.bisect_tol = cfg.value("bisect_tol", common.bisect_tol);

    const std::size_t mc_blocks = cfg.value("mc_blocks", std::size_t{10});
    const double fit_tol = cfg.value("fit_tol", 0.05);
    const double cesaro_tol = cfg.value("cesaro_tol", 0.1);

    auto f = Expression::parse(f_text);
    auto box = IntervalBox::parse(box_text);
    auto range = Interval::parse(range_text);
    auto a = parse_reals(a_text);
    auto problem = make_problem(f, y_name, box, range, a, b, level);

    QuadConfig qcfg = quad_config(common);
    auto result = approximate(problem, qcfg);

    PolyTensor poly = result.poly;
    json checks = json::array();
    bool all_pass = true;
    auto push_check = [&](json check, bool pass) {
        check["pass"] = pass;
        all_pass = all_pass && pass;
        checks.push_back(std::move(check));
    };

    // a previously written artifact can be verified against the recompute
    if (cfg.contains("coeffs")) {
        auto loaded =
            poly_from_json(load_json_file(cfg.at("coeffs").get<std::string>()));
        if (loaded.shape != poly.shape || loaded.center != poly.center)
            fail(Errc::io, "coeffs artifact does not match the configured problem");
        double diff = 0, scale = 0;
        for (std::size_t i = 0; i < poly.coeffs.size(); ++i) {
            diff = std::max(diff, std::abs(loaded.coeffs[i] - poly.coeffs[i]));
            scale = std::max(scale, std::abs(poly.coeffs[i]));
        }
        double bound = 1e-8 * (1.0 + scale);
        push_check({{"name", "artifact_matches_recompute"},
                    {"value", diff},
                    {"bound", bound}},
                   diff <= bound);
        poly = std::move(loaded);
    }

    // quadrature vs Monte Carlo on a spread of blocks
    auto blocks = dyadic_blocks(box, level);
    McConfig mc{opts.mc_samples, opts.seed, common.threads};
    const double slab = blocks.front().volume() * range.length();
    std::size_t n_checks = std::min(mc_blocks, blocks.size());
    for (std::size_t k = 0; k < n_checks; ++k) {
        std::size_t bi =
            n_checks <= 1 ? 0 : k * (blocks.size() - 1) / (n_checks - 1);
        HeavisideVolumeSpec spec{problem.f, blocks[bi], range, result.rho,
                                 qcfg.gauss_order,
                                 qcfg.bisect_tol_rel * range.length(), false};
        double mu = heaviside_volume(spec);
        auto est = mc_volume(problem.f, blocks[bi], range, mc);
        double delta = std::abs(mu - est.estimate);
        double bound = 3 * est.std_error;
        push_check({{"name", "mc_block_" + std::to_string(bi)},
                    {"value", delta},
                    {"bound", bound},
                    {"std_error", est.std_error},
                    {"wide", 3 * est.std_error > 0.005 * slab}},
                   delta <= bound);
    }

    // polynomial and its block averages against the bisection ground truth
    // on the central half of the domain
    double worst_poly = 0, worst_cesaro = 0;
    const int count = 21;
    const std::size_t d = box.dim();
    std::vector<int> idx(d, 0);
    std::size_t total = 1;
    for (std::size_t k = 0; k < d; ++k)
        total *= count;
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::vector<double> x(d);
        for (std::size_t k = 0; k < d; ++k) {
            const Interval& axis = box.axes[k].range;
            double mid = 0.5 * (axis.lo + axis.hi);
            double half = 0.25 * axis.length();
            x[k] = mid - half + 2 * half * static_cast<double>(idx[k]) /
                                    static_cast<double>(count - 1);
        }
        double truth = pointwise_implicit(problem.f, x, range, result.rho,
                                          1e-12 * range.length());
        worst_poly = std::max(worst_poly, std::abs(poly.eval(x) - truth));
        worst_cesaro =
            std::max(worst_cesaro, std::abs(cesaro_eval(result, x) - truth));
        for (std::size_t k = d; k-- > 0;) {
            if (++idx[k] < count)
                break;
            idx[k] = 0;
        }
    }
    push_check({{"name", "poly_vs_oracle_central"},
                {"value", worst_poly},
                {"bound", fit_tol}},
               worst_poly <= fit_tol);
    push_check({{"name", "cesaro_vs_oracle_central"},
                {"value", worst_cesaro},
                {"bound", cesaro_tol}},
               worst_cesaro <= cesaro_tol);

    json report;
    report["seed"] = opts.seed;
    report["mc_samples"] = opts.mc_samples;
    report["rng"] = kMcGenerator;
    report["checks"] = checks;
    report["all_pass"] = all_pass;

    std::string out_path =
        common.out_path.empty() ? "verify_report.json" : common.out_path;
    write_text_file(out_path, report.dump(2) + "\n");
    if (!common.quiet) {
        for (const auto& c : report["checks"])
            std::printf("%-28s value=%.6e bound=%.6e %s\n",
                        c.at("name").get<std::string>().c_str(),
                        c.at("value").get<double>(), c.at("bound").get<double>(),
                        c.at("pass").get<bool>() ? "pass" : "FAIL");
        std::printf("wrote %s\n", out_path.c_str());
    }
    return all_pass ? 0 : 1;
}

void add_common(CLI::App* cmd, CommonOptions& common)
{
    cmd->add_option("--gauss", common.gauss, "Gauss-Legendre nodes per axis");
    cmd->add_option("--bisect-tol", common.bisect_tol,
                    "step bisection tolerance, relative to |V|");
    cmd->add_option("--threads", common.threads,
                    "worker threads (0 = hardware; IMPLICITPOLY_THREADS overrides)");
    cmd->add_option("--out", common.out_path, "output JSON path");
    cmd->add_option("--grid", common.grid_path, "sample grid CSV path");
    cmd->add_option("--config", common.config_path,
                    "JSON config; flags win on conflict");
    cmd->add_flag("--quiet", common.quiet, "suppress progress output");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"polynomial approximation of implicit functions from Heaviside volumes"};
    app.require_subcommand(1);

    ApproxOptions ap;
    auto* capprox = app.add_subcommand(
        "approx", "approximate y = g(x) for one equation f(x, y) = 0");
    capprox->add_option("--f", ap.f_text, "equation f(x, y)");
    capprox->add_option("--x", ap.x_names, "comma-separated domain variables");
    capprox->add_option("--y", ap.y_name, "dependent variable");
    capprox->add_option("--box", ap.box_text,
                        "domain box, e.g. \"x1=[-0.5,0.5);x2=[-0.5,0.5)\"");
    capprox->add_option("--range", ap.range_text, "range interval, e.g. \"[0,1.5)\"");
    capprox->add_option("--a", ap.a_text, "base point, comma-separated");
    capprox->add_option("--b", ap.b, "base value with f(a,b) = 0");
    capprox->add_option("--n", ap.level, "dyadic level (2^n coefficients per axis)");
    capprox->add_option("--ref", ap.ref_text, "reference expression for the grid");
    capprox->add_flag("--oracle", ap.use_oracle,
                      "use the bisection oracle as the grid reference");
    add_common(capprox, ap.common);

    SystemOptions so;
    auto* csystem = app.add_subcommand(
        "system", "solve a two-equation system by the two-stage cascade");
    csystem->add_option("--f1", so.f1_text, "first equation");
    csystem->add_option("--f2", so.f2_text, "second equation");
    csystem->add_option("--x", so.x_names, "comma-separated domain variables");
    csystem->add_option("--y", so.y_names, "the two dependent variables");
    csystem->add_option("--box", so.box_text, "domain box over x");
    csystem->add_option("--range1", so.range1_text,
                        "range of the first dependent variable");
    csystem->add_option("--range2", so.range2_text,
                        "range of the second dependent variable");
    csystem->add_option("--a", so.a_text, "base point, comma-separated");
    csystem->add_option("--b", so.b_text, "base values b1,b2");
    csystem->add_option("--n", so.level_p, "stage-1 dyadic level");
    csystem->add_option("--m", so.level_q, "stage-2 dyadic level");
    csystem->add_option("--pivot", so.pivot_text,
                        "equation,variable override (1-based)");
    add_common(csystem, so.common);

    VerifyOptions vo;
    auto* cverify = app.add_subcommand(
        "verify", "cross-check quadrature vs Monte Carlo and oracle vs polynomial");
    cverify->add_option("--mc-samples", vo.mc_samples, "Monte Carlo samples per block");
    cverify->add_option("--seed", vo.seed, "Monte Carlo seed");
    add_common(cverify, vo.common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (capprox->parsed()) {
            if (!ap.common.config_path.empty()) {
                json cfg = load_json_file(ap.common.config_path);
                config_fill(capprox, cfg, "--f", "f", ap.f_text);
                config_fill(capprox, cfg, "--x", "x", ap.x_names);
                config_fill(capprox, cfg, "--y", "y", ap.y_name);
                config_fill(capprox, cfg, "--box", "box", ap.box_text);
                config_fill(capprox, cfg, "--range", "range", ap.range_text);
                config_fill(capprox, cfg, "--a", "a", ap.a_text);
                config_fill(capprox, cfg, "--b", "b", ap.b);
                config_fill(capprox, cfg, "--n", "n", ap.level);
                config_fill(capprox, cfg, "--ref", "ref", ap.ref_text);
                config_fill(capprox, cfg, "--oracle", "oracle", ap.use_oracle);
                config_fill(capprox, cfg, "--gauss", "gauss", ap.common.gauss);
                config_fill(capprox, cfg, "--bisect-tol", "bisect_tol",
                            ap.common.bisect_tol);
                config_fill(capprox, cfg, "--threads", "threads", ap.common.threads);
                config_fill(capprox, cfg, "--out", "out", ap.common.out_path);
                config_fill(capprox, cfg, "--grid", "grid", ap.common.grid_path);
            }
            if (ap.f_text.empty() || ap.box_text.empty() || ap.range_text.empty() ||
                ap.a_text.empty())
                fail(Errc::invalid_argument,
                     "approx needs --f, --box, --range, --a (flags or config)");
            return run_approx(ap);
        }
        if (csystem->parsed()) {
            if (!so.common.config_path.empty()) {
                json cfg = load_json_file(so.common.config_path);
                config_fill(csystem, cfg, "--f1", "f1", so.f1_text);
                config_fill(csystem, cfg, "--f2", "f2", so.f2_text);
                config_fill(csystem, cfg, "--x", "x", so.x_names);
                config_fill(csystem, cfg, "--y", "y", so.y_names);
                config_fill(csystem, cfg, "--box", "box", so.box_text);
                config_fill(csystem, cfg, "--range1", "range1", so.range1_text);
                config_fill(csystem, cfg, "--range2", "range2", so.range2_text);
                config_fill(csystem, cfg, "--a", "a", so.a_text);
                config_fill(csystem, cfg, "--b", "b", so.b_text);
                config_fill(csystem, cfg, "--n", "n", so.level_p);
                config_fill(csystem, cfg, "--m", "m", so.level_q);
                config_fill(csystem, cfg, "--pivot", "pivot", so.pivot_text);
                config_fill(csystem, cfg, "--gauss", "gauss", so.common.gauss);
                config_fill(csystem, cfg, "--bisect-tol", "bisect_tol",
                            so.common.bisect_tol);
                config_fill(csystem, cfg, "--threads", "threads", so.common.threads);
                config_fill(csystem, cfg, "--out", "out", so.common.out_path);
                config_fill(csystem, cfg, "--grid", "grid", so.common.grid_path);
            }
            if (so.f1_text.empty() || so.f2_text.empty() || so.box_text.empty() ||
                so.range1_text.empty() || so.range2_text.empty() ||
                so.a_text.empty() || so.b_text.empty())
                fail(Errc::invalid_argument,
                     "system needs --f1, --f2, --box, --range1, --range2, --a, --b");
            return run_system(so);
        }
        if (cverify->parsed()) {
            if (vo.common.config_path.empty())
                fail(Errc::invalid_argument, "verify needs --config");
            json cfg = load_json_file(vo.common.config_path);
            config_fill(cverify, cfg, "--mc-samples", "mc_samples", vo.mc_samples);
            config_fill(cverify, cfg, "--seed", "seed", vo.seed);
            config_fill(cverify, cfg, "--threads", "threads", vo.common.threads);
            config_fill(cverify, cfg, "--out", "out", vo.common.out_path);
            return run_verify(vo, cfg);
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
