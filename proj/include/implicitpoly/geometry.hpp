#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace implicitpoly {

// Half-open interval [lo, hi).
struct Interval {
    double lo = 0;
    double hi = 0;

    double length() const { return hi - lo; }
    bool contains(double t) const { return t >= lo && t < hi; }

    // "[0,1.5)" — '[' and ')' required, to keep the half-open convention
    // visible in configs.
    static Interval parse(std::string_view text);
    std::string to_string() const;
};

// Axis-aligned box: product of named half-open intervals, 1 <= dim <= 3.
struct IntervalBox {
    struct Axis {
        std::string name;
        Interval range;
    };
    std::vector<Axis> axes;

    std::size_t dim() const { return axes.size(); }
    double volume() const;
    bool contains(std::span<const double> x) const;
    std::vector<std::string> axis_names() const;
    void validate() const;

    // "x1=[-0.5,0.5);x2=[-0.5,0.5)"
    static IntervalBox parse(std::string_view text);
    std::string to_string() const;
};

// Level-n dyadic partition of a box: 2^n congruent half-open blocks per axis.
struct DyadicGrid {
    IntervalBox base;
    int level = 0;

    std::int64_t blocks_per_axis() const { return std::int64_t{1} << level; }
    double axis_step(std::size_t k) const;
};

// All 2^{n·d} blocks in row-major multi-index order (last axis fastest).
std::vector<IntervalBox> dyadic_blocks(const IntervalBox& box, int level);

struct BlockRef {
    std::vector<std::int64_t> index;
    IntervalBox box;
    std::size_t flat = 0; // row-major position
};

// The unique level-n block containing x (upper edge clamps into the last
// block). Errors when x lies outside the base box.
BlockRef shrinking_block(const DyadicGrid& grid, std::span<const double> x);

} // namespace implicitpoly
