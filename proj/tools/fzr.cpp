// Command-line driver: simulate, solve, map, verify, sweep, riemann.
//
// Every subcommand validates its whole configuration before it creates the
// output directory, so a rejected run leaves nothing behind.  A stage that
// fails after that point writes ABORTED with the reason.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "fzr/config.hpp"
#include "fzr/dynamics.hpp"
#include "fzr/field.hpp"
#include "fzr/flux.hpp"
#include "fzr/harness.hpp"
#include "fzr/hyperbolic.hpp"
#include "fzr/io.hpp"
#include "fzr/macro_mapping.hpp"
#include "fzr/mapping.hpp"
#include "fzr/measures.hpp"
#include "fzr/parabolic.hpp"
#include "fzr/riemann.hpp"
#include "fzr/scenarios.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace fzr;

namespace {

struct Global {
    std::string config_path;
    std::string out = "out";
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
    bool plots = false;
};

// Failures the user can fix; reported without a stage tag.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

RunConfig load_config(const Global& g) {
    return g.config_path.empty() ? RunConfig::parse("") : RunConfig::load(g.config_path);
}

Profile profile_of(const RunConfig& c, const std::string& fallback = "") {
    const auto text = fallback.empty() ? c.str("profile") : c.str("profile", fallback);
    try {
        return Profile::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError("key 'profile': " + std::string(e.what()));
    }
}

std::uint64_t seed_of(const Global& g, const RunConfig& c) {
    const auto from_config = std::uint64_t(c.integer("seed", 0));
    return g.seed ? *g.seed : from_config;
}

// Creates the output directory and archives the configuration verbatim.
fs::path open_output(const Global& g, const RunConfig& cfg) {
    const fs::path dir(g.out);
    fs::create_directories(dir);
    fs::remove(dir / "ABORTED");
    std::ofstream(dir / "run.cfg") << cfg.text();
    return dir;
}

void mark_aborted(const fs::path& dir, const std::string& stage, const std::string& why) {
    std::error_code ec;
    if (fs::exists(dir, ec)) std::ofstream(dir / "ABORTED") << stage << ": " << why << "\n";
}

std::string index_name(const char* prefix, std::size_t i, const char* ext) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%04zu%s", prefix, i, ext);
    return buf;
}

void append_jsonl(const fs::path& path, const json& record) {
    std::ofstream f(path, std::ios::app);
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
    f << record.dump() << "\n";
}

std::vector<double> obs_times(const RunConfig& c, double T) {
    auto t = c.reals("obs_times");
    if (t.empty()) t = {T};
    for (double v : t)
        if (!(v >= 0 && v <= T)) throw ConfigError("obs_times must lie in [0, T]");
    for (std::size_t i = 1; i < t.size(); ++i)
        if (t[i] < t[i - 1]) throw ConfigError("obs_times must be sorted");
    return t;
}

// ---------------------------------------------------------------- simulate

int cmd_simulate(const Global& g) {
    const auto cfg = load_config(g);
    const std::string process = cfg.str("process", "fep");
    const std::string mode = cfg.str("mode", "symmetric");
    const std::string geometry = cfg.str("geometry", "torus");
    const std::string backend = cfg.str("backend", "mapped");
    const double T = cfg.real("T");
    const auto times = obs_times(cfg, T);
    const auto seed = seed_of(g, cfg);
    const auto replicas = std::size_t(cfg.integer("replicas", 1));
    const auto profile = profile_of(cfg, process == "fep" ? "constant:0.5" : "constant:1.5");
    if (process != "fep" && process != "fzrp" && process != "coupled")
        throw ConfigError("process must be fep, fzrp or coupled");
    if (mode != "symmetric" && mode != "asymmetric") throw ConfigError("mode must be symmetric or asymmetric");
    if (backend != "mapped" && backend != "direct") throw ConfigError("backend must be mapped or direct");
    if (replicas == 0) throw ConfigError("replicas must be positive");
    const std::int64_t n = process == "fep" ? cfg.integer("N") : cfg.integer("M");
    if (n < 1) throw ConfigError("system size must be positive");

    SimParams params = mode == "symmetric" ? SimParams::symmetric(T, times, seed)
                                           : SimParams::asymmetric(cfg.real("p", 1.0), T, times, seed);
    params.scale = double(n);
    params.max_events = std::uint64_t(cfg.integer("max_events", 0));
    try {
        params.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }

    LatticeGeometry lattice = LatticeGeometry::torus(n);
    if (geometry == "line") {
        const auto w = cfg.reals("window");
        if (w.size() != 2 || !(w[0] < w[1])) throw ConfigError("line geometry needs window = a,b with a < b");
        const auto pad = cfg.integer("padding", n);
        lattice = LatticeGeometry::line(std::int64_t(std::floor(w[0] * double(n))),
                                        std::int64_t(std::ceil(w[1] * double(n))), pad);
    } else if (geometry != "torus") {
        throw ConfigError("geometry must be torus or line");
    }
    if (process == "fep") {
        if (profile.sup() >= 1) throw ConfigError("exclusion profile must stay below 1");
    } else if (profile.inf() < 0) {
        throw ConfigError("zero-range profile must be nonnegative");
    }
    const double alpha_bar = cfg.real("alpha_bar", profile.sup() + 1);
    for (const auto& k : cfg.unused()) std::cerr << "warning: unused config key '" << k << "'\n";

    const auto dir = open_output(g, cfg);
    try {
        const auto ens = run_replicas(replicas, g.threads, [&](std::uint64_t r) {
            SimParams p = params;
            p.replica = r;
            if (process == "fep") {
                const auto eta0 = sample_bernoulli_profile(profile, lattice, double(n), seed, r);
                return backend == "mapped" ? run_fep_mapped(eta0, p) : run_fep(eta0, p);
            }
            if (process == "fzrp") return run_fzrp(sample_geometric_profile(profile, lattice, double(n), seed, r), p);
            const auto [w, z] = sample_monotone_coupling(profile, alpha_bar, lattice, double(n), seed, r);
            return run_coupled_fzrp(w, z, p);
        });

        CsvWriter meta(dir / "metadata.csv", {"replica", "seed", "events", "degenerate", "boundary_reached",
                                              "budget_exhausted"});
        for (const auto& run : ens)
            meta.row(run.replica, seed, run.total_events, int(run.degenerate), int(run.boundary_reached),
                     int(run.budget_exhausted));

        for (const auto& run : ens)
            if (run.frames.size() < times.size())
                throw std::runtime_error("replica " + std::to_string(run.replica) +
                                         " exhausted max_events before the last observation time");
        const std::string kind = process == "fep" ? "fep" : "fzrp";
        std::unique_ptr<CsvWriter> tags;
        if (process == "fep")
            tags = std::make_unique<CsvWriter>(dir / "tag.csv", std::vector<std::string>{
                                                                    "replica", "time", "tag_coordinate", "displacement"});
        for (std::size_t j = 0; j < times.size(); ++j) {
            std::vector<std::string> cols{"site"};
            for (std::size_t r = 0; r < replicas; ++r) cols.push_back("r" + std::to_string(r));
            CsvWriter occ(dir / index_name("occupation_", j, ".csv"), cols);
            for (std::int64_t i = 0; i < lattice.sites(); ++i) {
                std::vector<std::string> row{std::to_string(lattice.coordinate(i))};
                for (const auto& run : ens) row.push_back(std::to_string(run.frames[j].state[std::size_t(i)]));
                occ.row_strings(row);
            }
            for (const auto& run : ens) {
                const auto& f = run.frames[j];
                Snapshot s{kind, lattice, f.time, run.replica, run.degenerate ? -1 : f.tag_site,
                           f.tag_displacement, f.state};
                write_snapshot(dir / "snapshots" / ("r" + std::to_string(run.replica) + "_" +
                                                    index_name("t", j, ".tsv")),
                               s);
                if (process == "coupled") {
                    Snapshot z{kind, lattice, f.time, run.replica, -1, 0, f.partner};
                    write_snapshot(dir / "snapshots" / ("r" + std::to_string(run.replica) + "_partner_" +
                                                        index_name("t", j, ".tsv")),
                                   z);
                }
                if (tags && !run.degenerate)
                    tags->row(run.replica, f.time, tag_coordinate(run, f), f.tag_displacement);
            }
        }
        if (g.plots) {
            std::vector<PlotSeries> series;
            const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};
            for (std::size_t j = 0; j < times.size(); ++j) {
                const auto b = empirical_block_field(ens, times[j], 0, double(n));
                PlotSeries s{"t=" + format_real(times[j]), {}, {}, colors[j % 6], false};
                const auto stride = std::max<std::int64_t>(1, lattice.sites() / 1024);
                for (std::int64_t i = 0; i < lattice.sites(); i += stride) {
                    s.x.push_back(double(lattice.coordinate(i)) / double(n));
                    s.y.push_back(b[std::size_t(i)]);
                }
                series.push_back(s);
            }
            write_svg_plot(dir / "density.svg", process + " replica-averaged block density", series);
        }
    } catch (const std::exception& e) {
        mark_aborted(dir, "simulate", e.what());
        throw;
    }
    return 0;
}

// ---------------------------------------------------------------- solve

struct SolveFlags {
    std::string equation, flux;
    double eps = -1, cfl = -1, T = -1, p = -1, dt = -1;
    long grid = -1;
};

int cmd_solve(const Global& g, const SolveFlags& f) {
    const auto cfg = load_config(g);
    // Config values are read even when a flag overrides them, so they count as used.
    const std::string cfg_equation = cfg.str("equation", "parabolic");
    const std::string equation = f.equation.empty() ? cfg_equation : f.equation;
    if (equation != "parabolic" && equation != "hyperbolic")
        throw ConfigError("equation must be parabolic or hyperbolic");
    const bool hyper = equation == "hyperbolic";
    const std::string cfg_flux = cfg.str("flux", hyper ? "frakH" : "H");
    const std::string flux_name = f.flux.empty() ? cfg_flux : f.flux;
    const double cfg_eps = cfg.real("eps", 0.0), cfg_p = cfg.real("p", 1.0);
    const double eps = f.eps >= 0 ? f.eps : cfg_eps;
    const double cfg_T = f.T >= 0 ? cfg.real("T", f.T) : cfg.real("T");
    const double T = f.T >= 0 ? f.T : cfg_T;
    const double p = f.p >= 0 ? f.p : cfg_p;
    const auto cfg_grid = cfg.integer("grid", 256);
    const auto grid = std::size_t(f.grid > 0 ? f.grid : cfg_grid);
    const double cfg_cfl = cfg.real("cfl", 0.9);
    const double viscosity = cfg.real("viscosity", 0.0);
    const auto profile = profile_of(cfg);
    const auto domain = cfg.reals("domain");
    const auto times = obs_times(cfg, T);
    for (const auto& k : cfg.unused()) std::cerr << "warning: unused config key '" << k << "'\n";

    const Flux flux = flux_from_name(flux_name, eps, hyper);
    DensityField shape = DensityField::torus(grid);
    if (!domain.empty()) {
        if (domain.size() != 2) throw ConfigError("domain must be a,b");
        if (!hyper) throw ConfigError("the parabolic solver runs on the torus; drop 'domain'");
        shape = DensityField::interval(domain[0], domain[1], grid);
    }
    const auto u0 = DensityField::from_profile(profile, shape);

    // Step size: explicit --dt is converted to a fraction of the stability limit.
    double cfl = f.cfl > 0 ? f.cfl : cfg_cfl;
    if (f.dt > 0) {
        const double limit = hyper ? hyperbolic_time_step(2 * p - 1, flux.lipschitz_on(u0.min(), u0.max()), u0.dx,
                                                          viscosity, 1.0)
                                   : parabolic_time_step(flux, u0.dx, 1.0);
        cfl = f.dt / limit;
    }
    if (!(cfl > 0 && cfl <= 1))
        throw UsageError("CFL violation: time step is " + format_real(cfl) +
                         " times the stability limit; reduce --dt or --cfl below 1");
    if (flux.zero_range() ? u0.min() < 0 : (u0.min() < 0 || u0.max() > 1))
        throw UsageError("initial profile outside the domain of flux " + flux_name);
    if (hyper && !(p > 0.5 && p <= 1)) throw UsageError("asymmetry p must lie in (1/2, 1]");

    const auto dir = open_output(g, cfg);
    try {
        std::vector<double> out_times{0.0};
        for (double t : times)
            if (t > 0) out_times.push_back(t);
        FieldTrajectory traj;
        if (hyper) {
            HyperbolicOptions opt;
            opt.times = out_times;
            opt.cfl = cfl;
            opt.viscosity = viscosity;
            traj = solve_hyperbolic(u0, flux, p, T, opt);
        } else {
            SolverOptions opt;
            opt.times = out_times;
            opt.cfl = cfl;
            traj = solve_parabolic(u0, flux, T, opt);
        }
        CsvWriter index(dir / "fields.csv", {"file", "time", "mass", "min", "max"});
        for (std::size_t j = 0; j < traj.times.size(); ++j) {
            const auto name = index_name("field_", j, ".txt");
            write_field(dir / name, traj.frames[j], traj.times[j]);
            index.row(name, traj.times[j], traj.frames[j].mass(), traj.frames[j].min(), traj.frames[j].max());
        }
        if (g.plots) {
            std::vector<PlotSeries> series;
            const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};
            for (std::size_t j = 0; j < traj.times.size(); ++j) {
                PlotSeries s{"t=" + format_real(traj.times[j]), {}, {}, colors[j % 6], j == 0};
                for (std::size_t i = 0; i < traj.frames[j].size(); ++i) {
                    s.x.push_back(traj.frames[j].center(i));
                    s.y.push_back(traj.frames[j].cells[i]);
                }
                series.push_back(s);
            }
            write_svg_plot(dir / "fields.svg", equation + " solution, flux " + flux.name(), series);
        }
    } catch (const std::exception& e) {
        mark_aborted(dir, "solve", e.what());
        throw;
    }
    return 0;
}

// ---------------------------------------------------------------- map

struct MapFlags {
    std::string input;
    std::optional<std::int64_t> tag;
    double time = 0;
    double p = 1.0;
    long cells = 0;
};

bool is_snapshot(const fs::path& path) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot read '" + path.string() + "'");
    std::string line;
    while (std::getline(f, line))
        if (!line.empty() && line[0] == '#') {
            if (line.rfind("# process", 0) == 0) return true;
        } else if (!line.empty()) {
            break;
        }
    return false;
}

int cmd_map(const Global& g, const MapFlags& f) {
    const auto cfg = load_config(g);
    if (f.input.empty()) throw UsageError("map needs --input FILE (snapshot or field file)");
    if (is_snapshot(f.input)) {
        const auto snap = read_snapshot(f.input);
        const auto dir = open_output(g, cfg);
        json rec{{"kind", "micro"}, {"input", f.input}};
        if (snap.process == "fep") {
            ExclusionConfig eta(snap.geometry, std::vector<std::uint8_t>(snap.state.begin(), snap.state.end()));
            const auto [omega, tag] =
                f.tag ? map_exclusion_to_zr(eta, snap.geometry.index_of(*f.tag)) : map_exclusion_to_zr(eta);
            write_snapshot(dir / "mapped.tsv", Snapshot{"fzrp", omega.geometry, snap.time, snap.replica, -1, 0,
                                                        omega.heights});
            rec["direction"] = "fep->fzrp";
            rec["holes"] = tag.holes;
            rec["tag"] = tag.x1;
            rec["tag_edge"] = tag.tag_edge();
            rec["degenerate"] = tag.degenerate;
            rec["particles"] = particle_count(eta);
        } else {
            if (!f.tag) throw UsageError("mapping zero-range to exclusion needs --tag X");
            if (!snap.geometry.is_torus()) throw UsageError("zero-range to exclusion from a file is torus-only");
            ZeroRangeConfig omega(snap.geometry, snap.state);
            TagState tag;
            tag.x1 = *f.tag;
            tag.holes = omega.size();
            const std::int64_t n = omega.size() + total_mass(omega);
            const auto eta = map_zr_to_exclusion(omega, tag, n);
            write_snapshot(dir / "mapped.tsv",
                           Snapshot{"fep", eta.geometry, snap.time, snap.replica, eta.geometry.index_of(tag.x1), 0,
                                    std::vector<std::int32_t>(eta.occupancy.begin(), eta.occupancy.end())});
            rec["direction"] = "fzrp->fep";
            rec["sites"] = n;
            rec["tag"] = tag.x1;
        }
        append_jsonl(dir / "map.jsonl", rec);
        return 0;
    }
    const auto in = read_field(f.input);
    const auto& rho0 = in.field;
    const auto [alpha0, tr] = macro_ex_to_zr(rho0, std::size_t(f.cells));
    const auto dir = open_output(g, cfg);
    try {
        json rec{{"kind", "macro"}, {"input", f.input}, {"theta", tr.theta}, {"time", f.time}};
        write_field(dir / "alpha.txt", alpha0, 0.0);
        if (f.time > 0 && rho0.is_torus()) {
            const auto sol = solve_exclusion_through_zr(rho0, f.time);
            write_field(dir / "alpha_t.txt", sol.alpha, zero_range_time(f.time, sol.theta));
            write_field(dir / "rho_t.txt", sol.rho, f.time);
            rec["chi"] = sol.chi;
            rec["zero_range_time"] = zero_range_time(f.time, sol.theta);
        } else if (f.time > 0) {
            HyperbolicOptions opt;
            const auto at = solve_hyperbolic(alpha0, Flux::G(), f.p, f.time, opt).frames.back();
            const double sigma = interface_offset_sigma(alpha0, at);
            write_field(dir / "alpha_t.txt", at, f.time);
            write_field(dir / "rho_t.txt", macro_zr_to_ex(at, sigma, rho0), f.time);
            rec["sigma"] = sigma;
            rec["p"] = f.p;
        } else {
            rec[rho0.is_torus() ? "chi" : "sigma"] = 0.0;
        }
        append_jsonl(dir / "map.jsonl", rec);
    } catch (const std::exception& e) {
        mark_aborted(dir, "map", e.what());
        throw;
    }
    return 0;
}

// ---------------------------------------------------------------- verify / sweep

ScenarioOptions scenario_options(const Global& g, const RunConfig& cfg) {
    ScenarioOptions o;
    o.n = cfg.has("N") ? cfg.integer("N") : cfg.integer("M", 0);
    o.replicas = std::size_t(cfg.integer("replicas", 0));
    o.t = cfg.real("T", 0.0);
    o.grid = std::size_t(cfg.integer("grid", 0));
    const auto config_seed = std::uint64_t(cfg.integer("seed", 1));
    o.seed = g.seed ? *g.seed : config_seed;
    o.threads = g.threads;
    return o;
}

void require_scenario(const std::string& name) {
    if (scenarios().count(name)) return;
    std::string known;
    for (const auto& [k, v] : scenarios()) known += (known.empty() ? "" : ", ") + k;
    throw UsageError("unknown scenario '" + name + "' (known: " + known + ")");
}

int cmd_verify(const Global& g, std::string scenario) {
    const auto cfg = load_config(g);
    if (scenario.empty()) scenario = cfg.str("scenario", "");
    if (scenario.empty()) throw UsageError("verify needs --scenario NAME");
    require_scenario(scenario);
    const auto opt = scenario_options(g, cfg);
    const auto dir = open_output(g, cfg);
    ScenarioReport rep;
    try {
        rep = run_scenario(scenario, opt);
        write_report(dir, rep, g.plots);
    } catch (const std::exception& e) {
        mark_aborted(dir, "verify:" + scenario, e.what());
        throw;
    }
    for (const auto& r : rep.rows)
        std::cout << (r.pass ? "PASS " : "FAIL ") << scenario << " " << r.check << " value=" << r.value
                  << " threshold=" << r.threshold << "\n";
    return rep.passed() ? 0 : 1;
}

int cmd_sweep(const Global& g, std::string scenario) {
    const auto cfg = load_config(g);
    if (scenario.empty()) scenario = cfg.str("scenario", "hydro-symmetric-step");
    require_scenario(scenario);
    const auto sizes = cfg.reals("sweep.N");
    if (sizes.empty()) throw ConfigError("sweep needs [sweep] N = n1,n2,...");
    const auto base = scenario_options(g, cfg);
    const auto dir = open_output(g, cfg);
    bool ok = true;
    try {
        CsvWriter csv(dir / "sweep.csv", {"N", "check", "value", "threshold", "result"});
        std::map<std::string, std::vector<double>> values;
        for (double n : sizes) {
            auto o = base;
            o.n = std::int64_t(n);
            const auto rep = run_scenario(scenario, o);
            for (const auto& r : rep.rows) {
                csv.row(std::int64_t(n), r.check, r.value, r.threshold, r.pass ? "pass" : "fail");
                values[r.check].push_back(r.value);
                ok = ok && r.pass;
            }
        }
        // Distances to the limit should shrink as N grows.
        CsvWriter trend(dir / "trend.csv", {"check", "decreasing"});
        for (const auto& [check, v] : values) {
            bool dec = true;
            for (std::size_t i = 1; i < v.size(); ++i) dec = dec && v[i] < v[i - 1];
            trend.row(check, dec ? "yes" : "no");
        }
    } catch (const std::exception& e) {
        mark_aborted(dir, "sweep:" + scenario, e.what());
        throw;
    }
    return ok ? 0 : 1;
}

// ---------------------------------------------------------------- riemann

struct RiemannFlags {
    double left = 1.5, right = 3.0, p = 1.0, T = 0.5;
    long grid = 1024;
    std::vector<double> domain{-1, 1};
};

int cmd_riemann(const Global& g, const RiemannFlags& f) {
    const auto cfg = load_config(g);
    if (f.domain.size() != 2 || !(f.domain[0] < f.domain[1])) throw UsageError("--domain needs a < b");
    if (f.grid < 1) throw UsageError("--grid must be positive");
    const RiemannSolution sol(f.left, f.right, f.p);
    const auto dir = open_output(g, cfg);
    const auto shape = DensityField::interval(f.domain[0], f.domain[1], std::size_t(f.grid));
    write_field(dir / "initial.txt", sol.sample(shape, 0.0), 0.0);
    write_field(dir / "exact.txt", sol.sample(shape, f.T), f.T);
    for (const auto& w : sol.waves())
        append_jsonl(dir / "waves.jsonl", json{{"kind", to_string(w.kind)},
                                               {"xi_lo", w.xi_lo},
                                               {"xi_hi", w.xi_hi},
                                               {"left", w.left},
                                               {"right", w.right}});
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Facilitated exclusion and zero-range processes: simulation, Stefan solvers, mappings"};
    app.require_subcommand(1);
    app.fallthrough();
    Global g;
    app.add_option("--config", g.config_path, "run configuration (key = value, [sections])");
    app.add_option("--out", g.out, "output directory");
    app.add_option("--seed", g.seed, "master seed (overrides the config)");
    app.add_option("--threads", g.threads, "worker threads (0: all cores)");
    app.add_flag("--emit-plots", g.plots, "also write SVG plots");

    auto* simulate = app.add_subcommand("simulate", "run replicas of a lattice process");

    SolveFlags sf;
    auto* solve = app.add_subcommand("solve", "solve a Stefan-type equation");
    solve->add_option("--equation", sf.equation, "parabolic | hyperbolic");
    solve->add_option("--flux", sf.flux, "H | G | frakH");
    solve->add_option("--eps", sf.eps, "flux regularisation (0: none)");
    solve->add_option("--grid", sf.grid, "number of cells");
    solve->add_option("--cfl", sf.cfl, "time step as a fraction of the stability limit");
    solve->add_option("--dt", sf.dt, "explicit time step");
    solve->add_option("--T", sf.T, "final time");
    solve->add_option("--p", sf.p, "asymmetry (hyperbolic)");

    MapFlags mf;
    auto* map = app.add_subcommand("map", "apply the exclusion <-> zero-range mapping");
    map->add_option("--input", mf.input, "snapshot or field file")->required();
    map->add_option("--tag", mf.tag, "coordinate of the tagged empty site");
    map->add_option("--time", mf.time, "also evolve to this time and locate the tag");
    map->add_option("--p", mf.p, "asymmetry for line fields");
    map->add_option("--cells", mf.cells, "zero-range grid size (default: input size)");

    std::string scenario;
    auto* verify = app.add_subcommand("verify", "run a named check");
    verify->add_option("--scenario", scenario, "mapping-commutation | flux-relation | hydro-symmetric-step | "
                                               "riemann-asymmetric | equilibration");
    auto* sweep = app.add_subcommand("sweep", "run a scenario over several system sizes");
    sweep->add_option("--scenario", scenario, "scenario to repeat");

    RiemannFlags rf;
    auto* riemann = app.add_subcommand("riemann", "exact zero-range Riemann solution");
    riemann->add_option("--left", rf.left, "left state");
    riemann->add_option("--right", rf.right, "right state");
    riemann->add_option("--p", rf.p, "asymmetry");
    riemann->add_option("--T", rf.T, "time");
    riemann->add_option("--grid", rf.grid, "cells");
    riemann->add_option("--domain", rf.domain, "a b")->expected(2);

    CLI11_PARSE(app, argc, argv);
    try {
        if (*simulate) return cmd_simulate(g);
        if (*solve) return cmd_solve(g, sf);
        if (*map) return cmd_map(g, mf);
        if (*verify) return cmd_verify(g, scenario);
        if (*sweep) return cmd_sweep(g, scenario);
        if (*riemann) return cmd_riemann(g, rf);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
