#pragma once

// Named end-to-end checks run by `fzr verify`.  Each produces rows of
// (check, parameters, value, threshold, pass) and optional plot series.

#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dynamics.hpp"
#include "flux.hpp"
#include "harness.hpp"
#include "io.hpp"
#include "mapping.hpp"
#include "measures.hpp"
#include "parabolic.hpp"
#include "riemann.hpp"

namespace fzr {

struct CheckRow {
    std::string check;
    std::string params;
    double value = 0;
    double threshold = 0;
    bool pass = false;
};

struct ScenarioReport {
    std::string name;
    std::vector<CheckRow> rows;
    std::vector<PlotSeries> plot;
    std::string plot_title;
    bool passed() const {
        for (const auto& r : rows)
            if (!r.pass) return false;
        return !rows.empty();
    }
};

struct ScenarioOptions {
    std::int64_t n = 0;         // 0: scenario default
    std::size_t replicas = 0;   // 0: scenario default
    double t = 0;               // 0: scenario default
    std::size_t grid = 0;       // 0: scenario default
    std::uint64_t seed = 1;
    unsigned threads = 0;
};

namespace detail {

inline std::string kv(std::initializer_list<std::pair<const char*, std::string>> items) {
    std::string s;
    for (const auto& [k, v] : items) s += (s.empty() ? "" : " ") + std::string(k) + "=" + v;
    return s;
}

template <class T>
std::string str(T v) {
    std::ostringstream o;
    o << v;
    return o.str();
}

inline ScenarioReport mapping_commutation(const ScenarioOptions& o) {
    ScenarioReport rep;
    const std::int64_t n = o.n ? o.n : 10;
    const std::uint64_t events = 10000;
    struct Mode {
        const char* name;
        double p;
        bool symmetric;
    };
    for (const Mode m : {Mode{"symmetric", 1.0, true}, Mode{"asymmetric", 1.0, false}, Mode{"asymmetric", 0.75, false}}) {
        std::int64_t discrepancies = 0;
        std::uint64_t replayed = 0;
        // More particles than holes: the dynamics cannot freeze, so every
        // replay runs the full event budget.
        std::size_t runs = 0;
        for (std::uint64_t s = 0; runs < 8; ++s) {
            const auto eta0 = sample_bernoulli_profile(Profile::constant(0.7), n, o.seed + s);
            if (2 * particle_count(eta0) <= n) continue;
            ++runs;
            auto params = m.symmetric ? SimParams::symmetric(1e12, {}, o.seed + s)
                                      : SimParams::asymmetric(m.p, 1e12, {}, o.seed + s);
            const auto r = trajectory_commutation_check(eta0, params, events);
            discrepancies += r.ok ? 0 : 1;
            replayed += r.events;
        }
        const std::string name = std::string("commutation-") + m.name + (m.symmetric ? "" : "-p" + str(m.p));
        rep.rows.push_back({name, kv({{"N", str(n)}, {"runs", str(runs)}, {"events", str(replayed)}}),
                            double(discrepancies), 0, discrepancies == 0});
    }
    return rep;
}

inline ScenarioReport flux_relation(const ScenarioOptions& o) {
    ScenarioReport rep;
    const std::size_t samples = 100000;
    std::mt19937_64 gen(o.seed);
    std::uniform_real_distribution<long double> uni(0.0L, 20.0L);
    long double worst_h = 0, worst_frak = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        const long double r = uni(gen);
        const long double x = r / (1 + r);
        const long double g = flux_G(r);
        const long double scale = std::max(std::abs(g), 1e-300L);
        worst_h = std::max(worst_h, std::abs(flux_H(x) - g) / scale);
        worst_frak = std::max(worst_frak, std::abs((1 + r) * flux_frakH(x) - g) / scale);
    }
    const std::string params = kv({{"samples", str(samples)}, {"range", "[0,20]"}});
    rep.rows.push_back({"G=H(r/(1+r))", params, double(worst_h), 1e-12, worst_h <= 1e-12L});
    rep.rows.push_back({"G=(1+r)frakH(r/(1+r))", params, double(worst_frak), 1e-12, worst_frak <= 1e-12L});
    return rep;
}

inline ScenarioReport hydro_symmetric_step(const ScenarioOptions& o) {
    ScenarioReport rep;
    const std::int64_t n = o.n ? o.n : 4096;
    const std::size_t replicas = o.replicas ? o.replicas : 8;
    const double t = o.t > 0 ? o.t : 0.02;
    const std::size_t grid = o.grid ? o.grid : 1024;
    const auto profile = Profile::step(0.8, 0.3);
    const auto params = SimParams::symmetric(t, {t}, o.seed);
    const auto ens = run_exclusion_ensemble(profile, LatticeGeometry::torus(n), double(n), params, replicas, o.threads);
    SolverOptions sopt;
    sopt.times = {t};
    const auto pde = solve_parabolic(DensityField::from_profile(profile, DensityField::torus(grid)), Flux::H(), 2 * t,
                                     sopt);
    const auto block = empirical_block_field(ens, t);
    const double err = field_distance(block, LatticeGeometry::torus(n), double(n), pde.at(t));
    const double control = field_distance(block, LatticeGeometry::torus(n), double(n), pde.at(2 * t));
    const std::string params_s =
        kv({{"N", str(n)}, {"replicas", str(replicas)}, {"t", str(t)}, {"grid", str(grid)}});
    rep.rows.push_back({"hydro-l1", params_s, err, 0.05, err <= 0.05});
    rep.rows.push_back({"hydro-time-control", params_s + " compare=pde(2t)", control, err, control > err});
    PlotSeries sim{"block density", {}, {}, "#1f77b4", false}, sol{"parabolic solution", {}, {}, "#d62728", true};
    const std::size_t stride = std::max<std::size_t>(1, std::size_t(n) / 1024);
    for (std::size_t i = 0; i < block.size(); i += stride) {
        sim.x.push_back(double(i) / double(n));
        sim.y.push_back(block[i]);
    }
    for (std::size_t i = 0; i < grid; ++i) {
        sol.x.push_back(pde.at(t).center(i));
        sol.y.push_back(pde.at(t).cells[i]);
    }
    rep.plot = {sim, sol};
    rep.plot_title = "exclusion block density vs parabolic solution, t=" + str(t);
    return rep;
}

// Zero-range Riemann data 1.5 on [0,1/2), 3 on [1/2,1) on the torus: a
// shock from 1/2 and a rarefaction fan from 0, not interacting before t=1/2.
inline ScenarioReport riemann_asymmetric(const ScenarioOptions& o) {
    ScenarioReport rep;
    const std::int64_t m = o.n ? o.n : 4096;
    const std::size_t replicas = o.replicas ? o.replicas : 8;
    const double t = o.t > 0 ? o.t : 0.5, p = 1.0;
    const auto profile = Profile::step(1.5, 3.0);
    auto params = SimParams::asymmetric(p, t, {t}, o.seed);
    params.record_currents = false;
    const auto ens = run_zero_range_ensemble(profile, LatticeGeometry::torus(m), double(m), params, replicas, o.threads);
    const auto block = empirical_block_field(ens, t);
    const RiemannSolution shock(1.5, 3.0, p), fan(3.0, 1.5, p);
    const double speed = shock.waves().front().xi_lo;
    const std::size_t l = default_block_radius(m);
    const double cell = double(l) / double(m);
    // Shock front: the last crossing of the mid level right of 1/2.
    const double mid = 2.25;
    double front = 0.5;
    for (std::int64_t i = m / 2; i < m; ++i)
        if (block[std::size_t(i)] > mid) {
            front = (double(i) + 0.5) / double(m);
            break;
        }
    const double predicted = 0.5 + speed * t;
    rep.rows.push_back({"shock-front", kv({{"M", str(m)}, {"t", str(t)}, {"cell", str(cell)}}),
                        std::abs(front - predicted), 2 * cell, std::abs(front - predicted) <= 2 * cell});
    double l1 = 0;
    for (std::int64_t i = 0; i < m / 2; ++i) l1 += std::abs(block[std::size_t(i)] - fan.at(double(i) / double(m), t));
    l1 /= double(m);
    rep.rows.push_back({"rarefaction-l1", kv({{"M", str(m)}, {"t", str(t)}, {"window", "[0,1/2)"}}), l1, 0.05,
                        l1 <= 0.05});
    PlotSeries sim{"block density", {}, {}, "#1f77b4", false}, ex{"entropy solution", {}, {}, "#d62728", true};
    for (std::int64_t i = 0; i < m; i += std::max<std::int64_t>(1, m / 1024)) {
        const double u = double(i) / double(m);
        sim.x.push_back(u);
        sim.y.push_back(block[std::size_t(i)]);
        ex.x.push_back(u);
        ex.y.push_back(u < 0.5 ? fan.at(u, t) : shock.at(u - 0.5, t));
    }
    rep.plot = {sim, ex};
    rep.plot_title = "zero-range Riemann data, t=" + str(t);
    return rep;
}

inline ScenarioReport equilibration(const ScenarioOptions& o) {
    ScenarioReport rep;
    const std::int64_t m = o.n ? o.n : 1024;
    const std::size_t replicas = o.replicas ? o.replicas : 64;
    const double alpha = 2.0;
    const std::vector<double> times{0, 10, 100, 1000, 3000};
    const auto rows = equilibration_check(alpha, m, times, replicas, o.seed, o.threads);
    const double closed = initial_equilibrium_tv(alpha);
    rep.rows.push_back({"tv-initial", kv({{"M", str(m)}, {"closed_form", str(closed)}}),
                        std::abs(rows.front().tv - closed), 0.01, std::abs(rows.front().tv - closed) <= 0.01});
    rep.rows.push_back({"tv-final", kv({{"M", str(m)}, {"t", str(times.back())}}), rows.back().tv, 0.02,
                        rows.back().tv <= 0.02});
    PlotSeries s{"TV to equilibrium", {}, {}, "#1f77b4", false};
    for (const auto& r : rows) {
        s.x.push_back(std::log10(1 + r.t));
        s.y.push_back(r.tv);
    }
    rep.plot = {s};
    rep.plot_title = "single-site total variation, alpha=2";
    return rep;
}

} // namespace detail

inline const std::map<std::string, std::function<ScenarioReport(const ScenarioOptions&)>>& scenarios() {
    static const std::map<std::string, std::function<ScenarioReport(const ScenarioOptions&)>> table{
        {"mapping-commutation", detail::mapping_commutation},
        {"flux-relation", detail::flux_relation},
        {"hydro-symmetric-step", detail::hydro_symmetric_step},
        {"riemann-asymmetric", detail::riemann_asymmetric},
        {"equilibration", detail::equilibration},
    };
    return table;
}

inline ScenarioReport run_scenario(const std::string& name, const ScenarioOptions& o) {
    const auto& table = scenarios();
    const auto it = table.find(name);
    if (it == table.end()) {
        std::string known;
        for (const auto& [k, v] : table) known += (known.empty() ? "" : ", ") + k;
        throw std::invalid_argument("unknown scenario '" + name + "' (known: " + known + ")");
    }
    auto rep = it->second(o);
    rep.name = name;
    return rep;
}

inline void write_report(const std::filesystem::path& dir, const ScenarioReport& rep, bool plots) {
    CsvWriter csv(dir / "report.csv", {"check", "params", "value", "threshold", "result"});
    for (const auto& r : rep.rows) csv.row(r.check, r.params, r.value, r.threshold, r.pass ? "pass" : "fail");
    if (plots && !rep.plot.empty()) write_svg_plot(dir / (rep.name + ".svg"), rep.plot_title, rep.plot);
}

} // namespace fzr
