#pragma once

// Exclusion <-> zero-range transformation of density fields.
//
// Torus:  theta = int (1 - rho),  v(u) = theta^{-1} int_0^u (1 - rho),
//         alpha(v(u)) = rho(u) / (1 - rho(u)),
//         inverse u(v) = chi + theta int_0^v (1 + alpha).
// Line:   the same without theta (v(u) = int_0^u (1 - rho), u(v) = sigma +
//         int_0^v (1 + alpha)).
//
// Fields are cell averages and every map is a conservative remap: the
// particle count int rho du = theta int alpha dv is transported exactly, so
// the maps commute with the mass and are inverse to each other up to one
// cell of smearing at discontinuities.
//
// Diffusive clocks differ by theta^{-2}: exclusion time t corresponds to
// zero-range time t / theta^2.  Only zero_range_time applies it.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "field.hpp"
#include "flux.hpp"
#include "parabolic.hpp"

namespace fzr {

struct MacroTransform {
    double theta = 1;
    bool torus = true;
    double offset = 0;           // chi (torus) or sigma (line)
    std::vector<double> u_edges; // u-grid edges
    std::vector<double> v_edges; // v(u) at those edges, strictly increasing

    double v_of_u(double u) const { return interp(u_edges, v_edges, u); }
    double u_of_v(double v) const { return interp(v_edges, u_edges, v); }

private:
    // Linear interpolation, linear extension with the edge slopes.
    static double interp(const std::vector<double>& x, const std::vector<double>& y, double s) {
        std::size_t j = std::size_t(std::upper_bound(x.begin(), x.end(), s) - x.begin());
        j = std::clamp<std::size_t>(j, 1, x.size() - 1);
        const double w = (s - x[j - 1]) / (x[j] - x[j - 1]);
        return y[j - 1] + w * (y[j] - y[j - 1]);
    }
};

inline double zero_range_time(double t, double theta) { return t / (theta * theta); }

namespace detail {

// Piecewise-linear monotone map sampled at edges, with its cumulative
// companion: x -> (position, cumulative) both linear within each cell.
struct MonotoneCells {
    std::vector<double> x;    // source edges
    std::vector<double> pos;  // strictly increasing image of the edges
    std::vector<double> cum;  // cumulative quantity at the edges

    // Cumulative quantity at image position p (linear extension outside).
    double cum_at(double p) const {
        std::size_t j = std::size_t(std::upper_bound(pos.begin(), pos.end(), p) - pos.begin());
        j = std::clamp<std::size_t>(j, 1, pos.size() - 1);
        const double w = (p - pos[j - 1]) / (pos[j] - pos[j - 1]);
        return cum[j - 1] + w * (cum[j] - cum[j - 1]);
    }
};

// Cell averages of d(cum)/d(pos) on `shape`, scaled by `scale`.
inline DensityField remap(const MonotoneCells& m, DensityField shape, double scale) {
    for (std::size_t i = 0; i < shape.size(); ++i)
        shape.cells[i] = (m.cum_at(shape.edge(i + 1)) - m.cum_at(shape.edge(i))) / (shape.dx * scale);
    return shape;
}

inline void check_subcritical_one(const DensityField& rho) {
    if (rho.min() < 0) throw std::invalid_argument("density must be nonnegative");
    if (rho.max() >= 1 - 1e-12) throw std::invalid_argument("density reaches 1: the mapping is singular");
}

} // namespace detail

// rho -> (alpha, transform).  `cells` sets the resolution of alpha (default:
// that of rho).  On an interval the alpha grid spans [v(lo), v(hi)].
inline std::pair<DensityField, MacroTransform> macro_ex_to_zr(const DensityField& rho, std::size_t cells = 0) {
    detail::check_subcritical_one(rho);
    const std::size_t n = rho.size();
    if (cells == 0) cells = n;
    MacroTransform tr;
    tr.torus = rho.is_torus();
    double holes = 0;
    for (double r : rho.cells) holes += (1 - r) * rho.dx;
    tr.theta = tr.torus ? holes : 1.0;

    detail::MonotoneCells m;
    m.x.resize(n + 1);
    m.pos.resize(n + 1);
    m.cum.resize(n + 1);
    double acc_v = 0, acc_p = 0;
    for (std::size_t i = 0; i <= n; ++i) {
        m.x[i] = rho.edge(i);
        m.pos[i] = acc_v / tr.theta;
        m.cum[i] = acc_p;
        if (i < n) {
            acc_v += (1 - rho.cells[i]) * rho.dx;
            acc_p += rho.cells[i] * rho.dx;
        }
    }
    if (!tr.torus) {
        // Anchor v(0) = 0 with no particles counted left of u = 0.
        tr.u_edges = m.x;
        tr.v_edges = m.pos;
        const double v0 = tr.v_of_u(0.0);
        const double p0 = m.cum_at(v0);
        for (auto& p : m.pos) p -= v0;
        for (auto& c : m.cum) c -= p0;
    }
    tr.u_edges = m.x;
    tr.v_edges = m.pos;
    DensityField shape = tr.torus ? DensityField::torus(cells)
                                  : DensityField::interval(m.pos.front(), m.pos.back(), cells);
    if (tr.torus) m.pos.back() = 1.0;  // exact period
    return {detail::remap(m, shape, tr.theta), tr};
}

// alpha -> rho on the torus with `cells` cells (default: that of alpha).
// theta must match alpha's mass: theta (1 + int alpha) = 1.
inline DensityField macro_zr_to_ex(const DensityField& alpha, double chi, double theta, std::size_t cells = 0) {
    if (!alpha.is_torus()) throw std::invalid_argument("use the interval overload for line fields");
    if (alpha.min() < 0) throw std::invalid_argument("zero-range density must be nonnegative");
    if (!(theta > 0 && theta <= 1)) throw std::invalid_argument("theta must lie in (0, 1]");
    const std::size_t n = alpha.size();
    if (cells == 0) cells = n;
    const double period = theta * (1 + alpha.mass());
    if (std::abs(period - 1) > 1e-6) throw std::invalid_argument("theta inconsistent with the zero-range mass");
    // u(v) over three periods of v, started one period left of [0,1) so every
    // target cell is covered whatever chi is.
    detail::MonotoneCells m;
    const double start = chi - std::floor(chi) - 1;
    double u = start, c = 0;
    m.pos.push_back(u);
    m.cum.push_back(c);
    for (int rep = 0; rep < 3; ++rep)
        for (std::size_t i = 0; i < n; ++i) {
            u += theta * (1 + alpha.cells[i]) * alpha.dx;
            c += theta * alpha.cells[i] * alpha.dx;
            m.pos.push_back(u);
            m.cum.push_back(c);
        }
    m.pos.back() = start + 3 * period;
    return detail::remap(m, DensityField::torus(cells), 1.0);
}

// alpha on an interval -> rho on `shape`, u(v) = sigma + int_0^v (1 + alpha).
inline DensityField macro_zr_to_ex(const DensityField& alpha, double sigma, const DensityField& shape) {
    if (alpha.is_torus()) throw std::invalid_argument("use the torus overload for torus fields");
    const std::size_t n = alpha.size();
    detail::MonotoneCells m;
    m.pos.resize(n + 1);
    m.cum.resize(n + 1);
    double u = 0, c = 0;
    for (std::size_t i = 0; i <= n; ++i) {
        m.pos[i] = u;
        m.cum[i] = c;
        if (i < n) {
            u += (1 + alpha.cells[i]) * alpha.dx;
            c += alpha.cells[i] * alpha.dx;
        }
    }
    // Anchor u(0) = sigma with no particles counted left of v = 0.
    MacroTransform uv;
    for (std::size_t i = 0; i <= n; ++i) uv.v_edges.push_back(alpha.edge(i));
    uv.u_edges = m.pos;
    const double u0 = uv.u_of_v(0.0);
    const double c0 = m.cum_at(u0);
    for (auto& p : m.pos) p += sigma - u0;
    for (auto& q : m.cum) q -= c0;
    // Constant extension beyond the alpha domain.
    const double al = alpha.cells.front(), ar = alpha.cells.back();
    const double far = 1e6;
    m.pos.insert(m.pos.begin(), m.pos.front() - far * (1 + al));
    m.cum.insert(m.cum.begin(), m.cum.front() - far * al);
    m.pos.push_back(m.pos.back() + far * (1 + ar));
    m.cum.push_back(m.cum.back() + far * ar);
    return detail::remap(m, shape, 1.0);
}

// chi from zero-range fields on the torus: theta <v, alpha_t - alpha_ini>.
inline double interface_offset_chi(const DensityField& alpha_ini, const DensityField& alpha_t, double theta) {
    detail::require_same_grid(alpha_ini, alpha_t);
    double s = 0;
    for (std::size_t i = 0; i < alpha_t.size(); ++i)
        s += alpha_t.center(i) * (alpha_t.cells[i] - alpha_ini.cells[i]);
    return theta * s * alpha_t.dx;
}

// chi from exclusion fields on the torus: the root of
//   int_0^chi (1 - rho_t) = <u, rho_t - rho_ini>,
// with rho_t extended periodically.
inline double interface_offset_chi_from_rho(const DensityField& rho_ini, const DensityField& rho_t) {
    detail::require_same_grid(rho_ini, rho_t);
    if (!rho_t.is_torus()) throw std::invalid_argument("chi is defined on the torus");
    if (rho_t.max() >= 1) throw std::invalid_argument("root not bracketed: density reaches 1");
    const std::size_t n = rho_t.size();
    double target = 0, period = 0;
    for (std::size_t i = 0; i < n; ++i) {
        target += rho_t.center(i) * (rho_t.cells[i] - rho_ini.cells[i]);
        period += 1 - rho_t.cells[i];
    }
    target *= rho_t.dx;
    period *= rho_t.dx;
    // Whole periods first, then walk cells (forward or backward).
    const double wraps = std::floor(target / period);
    double rest = target - wraps * period, x = wraps;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = (1 - rho_t.cells[i]) * rho_t.dx;
        if (rest <= w) return x + rest / (1 - rho_t.cells[i]);
        rest -= w;
        x += rho_t.dx;
    }
    return x;
}

// sigma = int_0^inf (alpha_ini - alpha_t) dv over the window.
inline double interface_offset_sigma(const DensityField& alpha_ini, const DensityField& alpha_t) {
    detail::require_same_grid(alpha_ini, alpha_t);
    double s = 0;
    for (std::size_t i = 0; i < alpha_t.size(); ++i) {
        const double a = alpha_t.edge(i), b = alpha_t.edge(i + 1);
        const double len = std::max(0.0, b - std::max(a, 0.0));
        s += len * (alpha_ini.cells[i] - alpha_t.cells[i]);
    }
    return s;
}

struct MacroSolution {
    DensityField rho;    // exclusion field at time t
    DensityField alpha;  // zero-range field at time t / theta^2
    double theta = 1;
    double chi = 0;
};

// Symmetric exclusion solution at time t obtained through the zero-range
// equation d_t alpha = d_v^2 G(alpha): map, solve, locate chi, map back.
inline MacroSolution solve_exclusion_through_zr(const DensityField& rho_ini, double t, double cfl = 0.9,
                                                std::size_t zr_cells = 0) {
    auto [alpha0, tr] = macro_ex_to_zr(rho_ini, zr_cells);
    SolverOptions opt;
    opt.cfl = cfl;
    const auto alpha_t = solve_parabolic(alpha0, Flux::G(), zero_range_time(t, tr.theta), opt).frames.back();
    MacroSolution out;
    out.theta = tr.theta;
    out.chi = interface_offset_chi(alpha0, alpha_t, tr.theta);
    out.alpha = alpha_t;
    out.rho = macro_zr_to_ex(alpha_t, out.chi, tr.theta, rho_ini.size());
    return out;
}

} // namespace fzr
