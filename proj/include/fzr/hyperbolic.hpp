#pragma once

// Conservative monotone scheme for d_t u + (2p-1) d_x F(u) = visc * d_x^2 g(u)
// with the Engquist-Osher numerical flux.  g(a) = a/(1+a) for zero-range
// fluxes and g(r) = r for exclusion fluxes.
//
// Interval fields use ghost cells copying the outermost cell.  Waves must not
// reach the ends: the two outermost cells on each side are watched and the
// run aborts (or flags, on request) as soon as one of them moves.

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "field.hpp"
#include "flux.hpp"
#include "parabolic.hpp"

namespace fzr {

struct HyperbolicOptions : SolverOptions {
    double viscosity = 0;          // 0: inviscid
    bool abort_on_boundary = true; // otherwise only flag it in the trajectory
};

inline double hyperbolic_time_step(double speed_factor, double lip, double dx, double viscosity,
                                   double cfl) {
    const double transport = std::abs(speed_factor) * lip;
    double dt = 1e300;
    if (viscosity > 0) {
        if (transport > 0) dt = std::min(dt, dx / (4 * transport));
        dt = std::min(dt, dx * dx / (4 * viscosity));  // Lip(g) <= 1
    } else if (transport > 0) {
        dt = dx / (2 * transport);
    }
    return cfl * dt;
}

inline FieldTrajectory solve_hyperbolic(const DensityField& u0, const Flux& f, double p, double T,
                                        HyperbolicOptions opt = {}) {
    if (!(p > 0.5 && p <= 1)) throw std::invalid_argument("asymmetry p must lie in (1/2, 1]");
    if (!(opt.cfl > 0 && opt.cfl <= 1)) {
        std::ostringstream msg;
        msg << "CFL violation: requested fraction " << opt.cfl << " of the stability limit exceeds 1";
        throw std::invalid_argument(msg.str());
    }
    if (!(opt.viscosity >= 0)) throw std::invalid_argument("viscosity must be nonnegative");
    const bool zr = f.zero_range();
    if (zr ? u0.min() < 0 : (u0.min() < 0 || u0.max() > 1))
        throw std::invalid_argument("initial field outside the flux domain");
    const double k = 2 * p - 1;
    const double lo = u0.min(), hi = u0.max();
    const double lip = f.lipschitz_on(lo, hi);
    const double dt = hyperbolic_time_step(k, lip, u0.dx, opt.viscosity, opt.cfl);
    const EngquistOsher eo(f, lo, hi);
    const auto times = detail::output_times(opt.times, T);

    FieldTrajectory traj;
    traj.dt = dt;
    DensityField u = u0;
    const std::size_t n = u.size();
    const bool torus = u.is_torus();
    std::vector<double> F(n + 1), g(n + 2);
    const double edge_l0 = u0.cells[0], edge_l1 = u0.cells[std::min<std::size_t>(1, n - 1)];
    const double edge_r0 = u0.cells[n - 1], edge_r1 = u0.cells[n >= 2 ? n - 2 : 0];
    auto moved = [](double now, double init) { return std::abs(now - init) > 1e-9 * (1 + std::abs(init)); };
    const double mass0 = u0.mass();

    detail::march(traj, u, times, dt, opt, [&](double h) {
        const auto& c = u.cells;
        auto cell = [&](std::int64_t i) {
            const auto m = std::int64_t(n);
            if (torus) return c[std::size_t((i % m + m) % m)];
            return c[std::size_t(std::clamp<std::int64_t>(i, 0, m - 1))];
        };
        // F[i] is the flux through the left face of cell i.
        for (std::size_t i = 0; i <= n; ++i) F[i] = k * eo(cell(std::int64_t(i) - 1), cell(std::int64_t(i)));
        if (opt.viscosity > 0)
            for (std::size_t i = 0; i < n + 2; ++i) {
                const double a = cell(std::int64_t(i) - 1);
                g[i] = zr ? a / (1 + a) : a;
            }
        const double r = h / u.dx, s = opt.viscosity * h / (u.dx * u.dx);
        for (std::size_t i = 0; i < n; ++i) {
            double d = -r * (F[i + 1] - F[i]);
            if (opt.viscosity > 0) d += s * (g[i + 2] - 2 * g[i + 1] + g[i]);
            u.cells[i] += d;
        }
        if (opt.check_invariants) {
            const double slack = 8 * 2.220446049250313e-16 * std::max(1.0, std::abs(hi));
            if (u.min() < lo - slack || u.max() > hi + slack) throw std::logic_error("maximum principle violated");
            if (torus && std::abs(u.mass() - mass0) > 1e-12 * std::max(1.0, std::abs(mass0)))
                throw std::logic_error("mass not conserved");
        }
        if (!torus && !traj.boundary_reached &&
            (moved(u.cells[0], edge_l0) || moved(u.cells[std::min<std::size_t>(1, n - 1)], edge_l1) ||
             moved(u.cells[n - 1], edge_r0) || moved(u.cells[n >= 2 ? n - 2 : 0], edge_r1))) {
            traj.boundary_reached = true;
            if (opt.abort_on_boundary)
                throw std::runtime_error("solution reached the interval boundary; enlarge the domain");
        }
    });
    return traj;
}

} // namespace fzr
