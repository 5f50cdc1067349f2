#pragma once

// Cell-average density fields on the unit torus or on a bounded interval.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "profile.hpp"

namespace fzr {

enum class FieldGeometry { Torus, Interval };

inline std::string to_string(FieldGeometry g) { return g == FieldGeometry::Torus ? "torus" : "interval"; }

struct DensityField {
    FieldGeometry geometry = FieldGeometry::Torus;
    double lo = 0;   // left edge of cell 0
    double dx = 1;
    std::vector<double> cells;

    static DensityField torus(std::size_t n, double value = 0) {
        if (n == 0) throw std::invalid_argument("field needs at least one cell");
        return {FieldGeometry::Torus, 0.0, 1.0 / double(n), std::vector<double>(n, value)};
    }

    static DensityField interval(double a, double b, std::size_t n, double value = 0) {
        if (n == 0 || !(b > a)) throw std::invalid_argument("interval field needs a < b and cells");
        return {FieldGeometry::Interval, a, (b - a) / double(n), std::vector<double>(n, value)};
    }

    // Exact cell averages of a profile.
    static DensityField from_profile(const Profile& p, DensityField shape) {
        for (std::size_t i = 0; i < shape.size(); ++i)
            shape.cells[i] = p.cell_average(shape.edge(i), shape.edge(i + 1));
        return shape;
    }

    std::size_t size() const { return cells.size(); }
    double hi() const { return lo + dx * double(cells.size()); }
    double edge(std::size_t i) const { return lo + dx * double(i); }
    double center(std::size_t i) const { return lo + dx * (double(i) + 0.5); }
    bool is_torus() const { return geometry == FieldGeometry::Torus; }

    // Piecewise-constant value; wraps on the torus, constant extension on
    // an interval.
    double value_at(double x) const {
        double s = (x - lo) / dx;
        const auto n = std::int64_t(cells.size());
        auto i = std::int64_t(std::floor(s));
        if (is_torus()) {
            i %= n;
            if (i < 0) i += n;
        } else {
            i = std::clamp<std::int64_t>(i, 0, n - 1);
        }
        return cells[std::size_t(i)];
    }

    double mass() const {
        double s = 0;
        for (double c : cells) s += c;
        return s * dx;
    }
    double min() const { return *std::min_element(cells.begin(), cells.end()); }
    double max() const { return *std::max_element(cells.begin(), cells.end()); }

    bool same_grid(const DensityField& o) const {
        return geometry == o.geometry && size() == o.size() && std::abs(lo - o.lo) <= 1e-12 &&
               std::abs(dx - o.dx) <= 1e-15 * (1 + dx);
    }
};

namespace detail {
inline void require_same_grid(const DensityField& a, const DensityField& b) {
    if (!a.same_grid(b)) throw std::invalid_argument("fields live on different grids");
}
} // namespace detail

inline double l1_distance(const DensityField& a, const DensityField& b) {
    detail::require_same_grid(a, b);
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a.cells[i] - b.cells[i]);
    return s * a.dx;
}

inline double l2_distance(const DensityField& a, const DensityField& b) {
    detail::require_same_grid(a, b);
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a.cells[i] - b.cells[i]) * (a.cells[i] - b.cells[i]);
    return std::sqrt(s * a.dx);
}

// L1 distance restricted to cells whose centers lie in [x0, x1].
inline double l1_distance_on(const DensityField& a, const DensityField& b, double x0, double x1) {
    detail::require_same_grid(a, b);
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double c = a.center(i);
        if (c >= x0 && c <= x1) s += std::abs(a.cells[i] - b.cells[i]);
    }
    return s * a.dx;
}

// Solver output: frames at requested times plus bookkeeping.
struct FieldTrajectory {
    std::vector<double> times;
    std::vector<DensityField> frames;
    double dt = 0;
    std::uint64_t steps = 0;
    bool boundary_reached = false;

    const DensityField& at(double t) const {
        for (std::size_t i = 0; i < times.size(); ++i)
            if (std::abs(times[i] - t) <= 1e-12 * (1 + std::abs(t))) return frames[i];
        throw std::out_of_range("time not in trajectory");
    }
};

} // namespace fzr
