#include "implicitpoly/geometry.hpp"

#include "implicitpoly/error.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>

namespace implicitpoly {

namespace {

constexpr int kMaxLevel = 24; // keeps 2^{n·d} block counts addressable

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

double parse_real(std::string_view s, const char* what)
{
    s = trim(s);
    double v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        fail(Errc::syntax, std::string("malformed ") + what + ": '" + std::string(s) + "'");
    return v;
}

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Block edge k of 2^n on [lo, hi). The step hi-lo over a power of two is an
// exact binary division, so level-(n+1) edges coincide with level-n edges.
double block_edge(const Interval& axis, int level, std::int64_t k)
{
    std::int64_t count = std::int64_t{1} << level;
    if (k == count)
        return axis.hi;
    double step = axis.length() / static_cast<double>(count);
    return axis.lo + static_cast<double>(k) * step;
}

} // namespace

Interval Interval::parse(std::string_view text)
{
    std::string_view s = trim(text);
    if (s.size() < 5 || s.front() != '[' || s.back() != ')')
        fail(Errc::syntax, "interval literal must look like \"[lo,hi)\": '" +
                               std::string(text) + "'");
    s = s.substr(1, s.size() - 2);
    auto comma = s.find(',');
    if (comma == std::string_view::npos)
        fail(Errc::syntax, "interval literal missing ','");
    Interval out{parse_real(s.substr(0, comma), "interval bound"),
                 parse_real(s.substr(comma + 1), "interval bound")};
    if (!(out.lo < out.hi))
        fail(Errc::invalid_argument, "interval requires lo < hi");
    return out;
}

std::string Interval::to_string() const
{
    return "[" + format_double(lo) + "," + format_double(hi) + ")";
}

double IntervalBox::volume() const
{
    double v = 1;
    for (const auto& a : axes)
        v *= a.range.length();
    return v;
}

bool IntervalBox::contains(std::span<const double> x) const
{
    if (x.size() != axes.size())
        return false;
    for (std::size_t k = 0; k < axes.size(); ++k)
        if (!axes[k].range.contains(x[k]))
            return false;
    return true;
}

std::vector<std::string> IntervalBox::axis_names() const
{
    std::vector<std::string> names;
    names.reserve(axes.size());
    for (const auto& a : axes)
        names.push_back(a.name);
    return names;
}

void IntervalBox::validate() const
{
    if (axes.empty() || axes.size() > 3)
        fail(Errc::invalid_argument, "box dimension must be 1, 2 or 3");
    for (const auto& a : axes) {
        if (a.name.empty())
            fail(Errc::invalid_argument, "box axis needs a name");
        if (!(a.range.lo < a.range.hi))
            fail(Errc::invalid_argument, "axis '" + a.name + "' requires lo < hi");
    }
    for (std::size_t i = 0; i < axes.size(); ++i)
        for (std::size_t j = i + 1; j < axes.size(); ++j)
            if (axes[i].name == axes[j].name)
                fail(Errc::invalid_argument, "duplicate axis name '" + axes[i].name + "'");
}

IntervalBox IntervalBox::parse(std::string_view text)
{
    IntervalBox box;
    std::string_view rest = text;
    while (!rest.empty()) {
        auto semi = rest.find(';');
        std::string_view part = semi == std::string_view::npos ? rest : rest.substr(0, semi);
        rest = semi == std::string_view::npos ? std::string_view{} : rest.substr(semi + 1);
        part = trim(part);
        if (part.empty())
            continue;
        auto eq = part.find('=');
        if (eq == std::string_view::npos)
            fail(Errc::syntax, "box axis must look like \"name=[lo,hi)\": '" +
                                   std::string(part) + "'");
        Axis axis;
        axis.name = std::string(trim(part.substr(0, eq)));
        axis.range = Interval::parse(part.substr(eq + 1));
        box.axes.push_back(std::move(axis));
    }
    box.validate();
    return box;
}

std::string IntervalBox::to_string() const
{
    std::string out;
    for (const auto& a : axes) {
        if (!out.empty())
            out += ';';
        out += a.name;
        out += '=';
        out += a.range.to_string();
    }
    return out;
}

double DyadicGrid::axis_step(std::size_t k) const
{
    return base.axes[k].range.length() / static_cast<double>(blocks_per_axis());
}

std::vector<IntervalBox> dyadic_blocks(const IntervalBox& box, int level)
{
    box.validate();
    if (level < 0 || level > kMaxLevel)
        fail(Errc::invalid_argument, "dyadic level out of range");
    const std::size_t d = box.dim();
    const std::int64_t per_axis = std::int64_t{1} << level;
    std::size_t total = 1;
    for (std::size_t k = 0; k < d; ++k)
        total *= static_cast<std::size_t>(per_axis);

    std::vector<IntervalBox> blocks;
    blocks.reserve(total);
    std::vector<std::int64_t> idx(d, 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        IntervalBox b;
        b.axes.resize(d);
        for (std::size_t k = 0; k < d; ++k) {
            b.axes[k].name = box.axes[k].name;
            b.axes[k].range = {block_edge(box.axes[k].range, level, idx[k]),
                               block_edge(box.axes[k].range, level, idx[k] + 1)};
        }
        blocks.push_back(std::move(b));
        // advance the multi-index, last axis fastest
        for (std::size_t k = d; k-- > 0;) {
            if (++idx[k] < per_axis)
                break;
            idx[k] = 0;
        }
    }
    return blocks;
}

BlockRef shrinking_block(const DyadicGrid& grid, std::span<const double> x)
{
    grid.base.validate();
    if (grid.level < 0 || grid.level > kMaxLevel)
        fail(Errc::invalid_argument, "dyadic level out of range");
    const std::size_t d = grid.base.dim();
    if (x.size() != d)
        fail(Errc::invalid_argument, "point dimension does not match grid");

    const std::int64_t per_axis = grid.blocks_per_axis();
    BlockRef out;
    out.index.resize(d);
    out.box.axes.resize(d);
    out.flat = 0;
    for (std::size_t k = 0; k < d; ++k) {
        const Interval& axis = grid.base.axes[k].range;
        if (x[k] < axis.lo || x[k] > axis.hi)
            fail(Errc::invalid_argument, "point outside base box on axis '" +
                                             grid.base.axes[k].name + "'");
        double step = grid.axis_step(k);
        auto i = static_cast<std::int64_t>(std::floor((x[k] - axis.lo) / step));
        if (i < 0)
            i = 0;
        if (i >= per_axis)
            i = per_axis - 1; // upper edge
        out.index[k] = i;
        out.box.axes[k].name = grid.base.axes[k].name;
        out.box.axes[k].range = {block_edge(axis, grid.level, i),
                                 block_edge(axis, grid.level, i + 1)};
        out.flat = out.flat * static_cast<std::size_t>(per_axis) +
                   static_cast<std::size_t>(i);
    }
    return out;
}

} // namespace implicitpoly
