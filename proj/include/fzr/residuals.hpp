#pragma once

// Weak-form and entropy residuals of computed trajectories, and the
// regularisation convergence studies.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "field.hpp"
#include "flux.hpp"
#include "hyperbolic.hpp"
#include "parabolic.hpp"

namespace fzr {

// Space-time test function with the derivatives the residuals need.
struct TestFunction {
    std::function<double(double, double)> phi;     // (t, x)
    std::function<double(double, double)> phi_t;
    std::function<double(double, double)> phi_x;
    std::function<double(double, double)> phi_xx;
};

namespace detail {

// Trapezoid rule in time over the trajectory frames of a per-frame quantity.
inline double time_integral(const FieldTrajectory& traj, const std::function<double(std::size_t)>& q) {
    double s = 0;
    for (std::size_t j = 1; j < traj.times.size(); ++j)
        s += 0.5 * (q(j - 1) + q(j)) * (traj.times[j] - traj.times[j - 1]);
    return s;
}

inline double pairing(const DensityField& u, double t, const std::function<double(double, double)>& phi,
                      const std::function<double(double)>& transform = nullptr) {
    double s = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double v = transform ? transform(u.cells[i]) : u.cells[i];
        s += v * phi(t, u.center(i));
    }
    return s * u.dx;
}

} // namespace detail

// |<u_T, phi_T> - <u_0, phi_0> - int <u, d_t phi> - int <F(u), d_x^2 phi>|
// for a diffusive trajectory whose first frame is at t = 0.
inline double weak_residual(const FieldTrajectory& traj, const Flux& f, const TestFunction& test) {
    if (traj.times.empty() || traj.times.front() != 0) throw std::invalid_argument("trajectory must start at t = 0");
    const auto& u0 = traj.frames.front();
    const auto& uT = traj.frames.back();
    const double T = traj.times.back();
    const double boundary = detail::pairing(uT, T, test.phi) - detail::pairing(u0, 0, test.phi);
    const double drift = detail::time_integral(traj, [&](std::size_t j) {
        return detail::pairing(traj.frames[j], traj.times[j], test.phi_t);
    });
    const double diffusion = detail::time_integral(traj, [&](std::size_t j) {
        return detail::pairing(traj.frames[j], traj.times[j], test.phi_xx, [&](double r) { return f(r); });
    });
    return std::abs(boundary - drift - diffusion);
}

// Kruzkov form  int int |u - c| d_t phi + (2p-1) sign(u-c)(F(u) - F(c)) d_x phi
// for a nonnegative test function vanishing at the first and last frame.
// Admissible solutions give a value >= 0 up to discretisation error.
inline double entropy_residual(const FieldTrajectory& traj, const Flux& f, double p, double c,
                               const TestFunction& test) {
    if (!(c >= 0)) throw std::invalid_argument("entropy constant must be nonnegative");
    if (traj.times.size() < 2) throw std::invalid_argument("trajectory needs at least two frames");
    for (std::size_t j = 0; j < traj.times.size(); ++j)
        for (std::size_t i = 0; i < traj.frames[j].size(); ++i)
            if (test.phi(traj.times[j], traj.frames[j].center(i)) < 0)
                throw std::invalid_argument("test function must be nonnegative");
    const double k = 2 * p - 1, fc = f(c);
    return detail::time_integral(traj, [&](std::size_t j) {
        const auto& u = traj.frames[j];
        const double t = traj.times[j];
        double s = 0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double a = u.cells[i], x = u.center(i);
            const double sg = a > c ? 1.0 : (a < c ? -1.0 : 0.0);
            s += std::abs(a - c) * test.phi_t(t, x) + k * sg * (f(a) - fc) * test.phi_x(t, x);
        }
        return s * u.dx;
    });
}

// Entropy constants covered by the admissibility definition: c in [0,1] for
// exclusion fluxes, any c >= 0 for zero-range fluxes.
inline bool entropy_constant_in_range(const Flux& f, double c) {
    return f.zero_range() ? c >= 0 : (c >= 0 && c <= 1);
}

struct SmoothingRow {
    double eps = 0;
    double sup_l2_density = 0;  // sup_t ||u^eps_t - u_t||_2
    double sup_l2_flux = 0;     // sup_t ||H^eps(u^eps_t) - H(u_t)||_2
};

// Solves d_t u = d_x^2 H^eps(u) for each eps and compares with the
// unsmoothed solution at the sample times.
inline std::vector<SmoothingRow> smoothing_convergence_study(const DensityField& u0, const std::vector<double>& eps,
                                                             double T, std::vector<double> sample_times,
                                                             double cfl = 0.9) {
    SolverOptions opt;
    opt.times = std::move(sample_times);
    opt.cfl = cfl;
    const Flux h = Flux::H();
    const auto ref = solve_parabolic(u0, h, T, opt);
    std::vector<SmoothingRow> rows;
    for (double e : eps) {
        const Flux he = build_smoothed_flux(FluxKind::H, e);
        const auto sol = solve_parabolic(u0, he, T, opt);
        SmoothingRow row;
        row.eps = e;
        for (std::size_t j = 0; j < ref.times.size(); ++j) {
            const auto& a = sol.frames[j];
            const auto& b = ref.frames[j];
            row.sup_l2_density = std::max(row.sup_l2_density, l2_distance(a, b));
            DensityField fa = a, fb = b;
            for (std::size_t i = 0; i < a.size(); ++i) {
                fa.cells[i] = he(a.cells[i]);
                fb.cells[i] = h(b.cells[i]);
            }
            row.sup_l2_flux = std::max(row.sup_l2_flux, l2_distance(fa, fb));
        }
        rows.push_back(row);
    }
    return rows;
}

struct ViscousRow {
    double eps_coarse = 0, eps_fine = 0;
    double l1_window = 0;  // ||u^{eps_coarse}_T - u^{eps_fine}_T||_{L1(window)}
};

// Vanishing-viscosity runs with flux and viscosity both regularised by eps
// (G^eps with eps d_v^2 (a/(1+a)) for zero-range data); successive L1
// distances at time T over [x0, x1].
inline std::vector<ViscousRow> viscous_cauchy_study(const DensityField& u0, FluxKind base, const std::vector<double>& eps,
                                                    double p, double T, double x0, double x1, double cfl = 0.9) {
    std::vector<DensityField> finals;
    for (double e : eps) {
        HyperbolicOptions opt;
        opt.cfl = cfl;
        opt.viscosity = e;
        const Flux f = build_hyperbolic_smoothed_flux(base, e);
        finals.push_back(solve_hyperbolic(u0, f, p, T, opt).frames.back());
    }
    std::vector<ViscousRow> rows;
    for (std::size_t i = 1; i < finals.size(); ++i)
        rows.push_back({eps[i - 1], eps[i], l1_distance_on(finals[i - 1], finals[i], x0, x1)});
    return rows;
}

} // namespace fzr
