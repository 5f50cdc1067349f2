#pragma once

// Explicit monotone scheme for d_t u = d_x^2 F(u) on the torus:
//   u_i <- u_i + lambda (F(u_{i+1}) - 2 F(u_i) + F(u_{i-1})),  lambda = dt/dx^2.
// Monotone when lambda * Lip(F) <= 1/2.

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "field.hpp"
#include "flux.hpp"

namespace fzr {

struct SolverOptions {
    std::vector<double> times;  // output times, sorted; T is appended if missing
    double cfl = 0.9;           // fraction of the stability limit
    std::size_t record_every = 0;  // also store every k-th step (0: never)
    bool check_invariants = false; // assert maximum principle and mass per step
    // Called after every step with (time, field).
    std::function<void(double, const DensityField&)> on_step;
};

namespace detail {

inline std::vector<double> output_times(std::vector<double> times, double T) {
    if (!(T >= 0)) throw std::invalid_argument("final time must be nonnegative");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] >= 0 && times[i] <= T)) throw std::invalid_argument("output time outside [0, T]");
        if (i && times[i] < times[i - 1]) throw std::invalid_argument("output times must be sorted");
    }
    if (times.empty() || times.back() < T) times.push_back(T);
    return times;
}

inline void append_frame(FieldTrajectory& traj, double t, const DensityField& f) {
    traj.times.push_back(t);
    traj.frames.push_back(f);
}

// Steps of size <= dt that land exactly on every output time.
template <class Step>
void march(FieldTrajectory& traj, DensityField& u, const std::vector<double>& times, double dt,
           const SolverOptions& opt, Step step) {
    double t = 0;
    std::uint64_t n = 0;
    for (double target : times) {
        while (t < target) {
            const double remaining = target - t;
            const double h = remaining <= dt * (1 + 1e-12) ? remaining : dt;
            step(h);
            t = remaining <= dt * (1 + 1e-12) ? target : t + h;
            ++n;
            if (opt.record_every && n % opt.record_every == 0 && t < target) append_frame(traj, t, u);
            if (opt.on_step) opt.on_step(t, u);
        }
        append_frame(traj, target, u);
    }
    traj.steps = n;
}

} // namespace detail

inline double parabolic_time_step(const Flux& f, double dx, double cfl) {
    return cfl * dx * dx / (2 * f.lipschitz());
}

inline FieldTrajectory solve_parabolic(const DensityField& u0, const Flux& f, double T, SolverOptions opt = {}) {
    if (!u0.is_torus()) throw std::invalid_argument("parabolic solver runs on the torus");
    if (!(opt.cfl > 0 && opt.cfl <= 1)) {
        std::ostringstream msg;
        msg << "CFL violation: lambda * Lip(F) = " << opt.cfl / 2 << " exceeds 1/2";
        throw std::invalid_argument(msg.str());
    }
    if (f.zero_range() ? u0.min() < 0 : (u0.min() < 0 || u0.max() > 1))
        throw std::invalid_argument("initial field outside the flux domain");
    const auto times = detail::output_times(opt.times, T);
    const double dt = parabolic_time_step(f, u0.dx, opt.cfl);
    FieldTrajectory traj;
    traj.dt = dt;
    DensityField u = u0;
    const std::size_t n = u.size();
    std::vector<double> F(n);
    const double lo = u0.min(), hi = u0.max(), mass0 = u0.mass();
    detail::march(traj, u, times, dt, opt, [&](double h) {
        const double lambda = h / (u.dx * u.dx);
        for (std::size_t i = 0; i < n; ++i) F[i] = f(u.cells[i]);
        if (n == 1) return;
        u.cells[0] += lambda * (F[1] - 2 * F[0] + F[n - 1]);
        for (std::size_t i = 1; i + 1 < n; ++i) u.cells[i] += lambda * (F[i + 1] - 2 * F[i] + F[i - 1]);
        u.cells[n - 1] += lambda * (F[0] - 2 * F[n - 1] + F[n - 2]);
        if (opt.check_invariants) {
            const double slack = 8 * 2.220446049250313e-16 * std::max(1.0, std::abs(hi));
            if (u.min() < lo - slack || u.max() > hi + slack)
                throw std::logic_error("maximum principle violated");
            if (std::abs(u.mass() - mass0) > 1e-12 * std::max(1.0, std::abs(mass0)))
                throw std::logic_error("mass not conserved");
        }
    });
    return traj;
}

} // namespace fzr
