#pragma once

// Reductions of completed runs: empirical density fields, distances to PDE
// solutions, tagged-hole deviations, block-estimate diagnostics and the
// equilibration test.  Ensembles run one replica per job on a worker pool.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <vector>

#include "dynamics.hpp"
#include "field.hpp"
#include "flux.hpp"
#include "mapping.hpp"
#include "measures.hpp"

namespace fzr {

// Runs job(i) for i in [0, n) on `threads` workers (0: hardware count).
// The first exception is rethrown after all workers stop.
template <class Job>
void parallel_for(std::size_t n, unsigned threads, Job job) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = unsigned(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i) job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) {
            try {
                job(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next = n;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

using Ensemble = std::vector<ObservationSet>;

// Replica r samples its initial state and its dynamics from (seed, r).
inline Ensemble run_replicas(std::size_t replicas, unsigned threads,
                             const std::function<ObservationSet(std::uint64_t)>& job) {
    Ensemble out(replicas);
    parallel_for(replicas, threads, [&](std::size_t r) { out[r] = job(r); });
    return out;
}

// Exclusion ensemble from product Bernoulli data; `mapped` selects the
// zero-range realisation, which has the same law and is faster.
inline Ensemble run_exclusion_ensemble(const Profile& rho, const LatticeGeometry& g, double scale,
                                       SimParams params, std::size_t replicas, unsigned threads, bool mapped = true) {
    return run_replicas(replicas, threads, [&](std::uint64_t r) {
        SimParams p = params;
        p.replica = r;
        p.scale = scale;
        const auto eta0 = sample_bernoulli_profile(rho, g, scale, p.seed, r);
        return mapped ? run_fep_mapped(eta0, p) : run_fep(eta0, p);
    });
}

inline Ensemble run_zero_range_ensemble(const Profile& alpha, const LatticeGeometry& g, double scale,
                                        SimParams params, std::size_t replicas, unsigned threads) {
    return run_replicas(replicas, threads, [&](std::uint64_t r) {
        SimParams p = params;
        p.replica = r;
        p.scale = scale;
        return run_fzrp(sample_geometric_profile(alpha, g, scale, p.seed, r), p);
    });
}

inline std::size_t default_block_radius(std::int64_t n) {
    return std::size_t(std::ceil(std::sqrt(double(n))));
}

// Centered averages over 2l+1 sites; periodic on the torus, truncated
// windows near the ends of a line.
template <class T>
std::vector<double> block_average(const std::vector<T>& x, std::size_t l, bool torus) {
    const std::size_t n = x.size();
    std::vector<double> out(n);
    if (n == 0) return out;
    if (torus) {
        if (2 * l + 1 > n) throw std::invalid_argument("block wider than the torus");
        double s = 0;
        for (std::size_t j = 0; j <= 2 * l; ++j) s += double(x[(j + n - l) % n]);
        const double w = 1.0 / double(2 * l + 1);
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = s * w;
            s += double(x[(i + l + 1) % n]) - double(x[(i + n - l) % n]);
        }
        return out;
    }
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + double(x[i]);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t a = i >= l ? i - l : 0, b = std::min(n, i + l + 1);
        out[i] = (prefix[b] - prefix[a]) / double(b - a);
    }
    return out;
}

// (1/scale) sum_x state_x phi(x / scale), x the site coordinate.
inline double empirical_pairing(const std::vector<std::int32_t>& state, const LatticeGeometry& g, double scale,
                                const std::function<double(double)>& phi) {
    if (std::int64_t(state.size()) != g.sites()) throw std::invalid_argument("state does not match geometry");
    double s = 0;
    for (std::int64_t i = 0; i < g.sites(); ++i)
        if (state[std::size_t(i)]) s += state[std::size_t(i)] * phi(double(g.coordinate(i)) / scale);
    return s / scale;
}

inline double empirical_pairing(const ExclusionConfig& eta, const std::function<double(double)>& phi,
                                double scale = 0) {
    const std::vector<std::int32_t> s(eta.occupancy.begin(), eta.occupancy.end());
    return empirical_pairing(s, eta.geometry, scale > 0 ? scale : double(eta.size()), phi);
}

// Replica average of the configuration at time t.
inline std::vector<double> ensemble_mean_state(const Ensemble& ens, double t) {
    if (ens.empty()) throw std::invalid_argument("empty ensemble");
    std::vector<double> mean(ens.front().at(t).state.size(), 0.0);
    for (const auto& run : ens) {
        const auto& s = run.at(t).state;
        if (s.size() != mean.size()) throw std::invalid_argument("replicas differ in size");
        for (std::size_t i = 0; i < s.size(); ++i) mean[i] += s[i];
    }
    for (auto& m : mean) m /= double(ens.size());
    return mean;
}

// Block-averaged replica mean at time t.  l = 0 picks ceil(sqrt(scale)).
inline std::vector<double> empirical_block_field(const Ensemble& ens, double t, std::size_t l = 0, double scale = 0) {
    const auto& g = ens.front().geometry;
    if (scale <= 0) scale = double(g.sites());
    if (l == 0) l = default_block_radius(std::int64_t(scale));
    return block_average(ensemble_mean_state(ens, t), l, g.is_torus());
}

// (1/scale) sum_x |b_x - rho(x/scale)| with b the block field, over the
// observed sites.
inline double field_distance(const std::vector<double>& block, const LatticeGeometry& g, double scale,
                             const DensityField& pde) {
    double s = 0;
    for (std::int64_t i = g.observed_first(); i < g.observed_last(); ++i)
        s += std::abs(block[std::size_t(i)] - pde.value_at(double(g.coordinate(i)) / scale));
    return s / scale;
}

inline double hydro_error(const Ensemble& ens, const DensityField& pde, double t, std::size_t l = 0,
                          double scale = 0) {
    const auto& g = ens.front().geometry;
    if (scale <= 0) scale = double(g.sites());
    return field_distance(empirical_block_field(ens, t, l, scale), g, scale, pde);
}

// Unwrapped tag coordinate X(t) = X(0) + displacement.
inline double tag_coordinate(const ObservationSet& run, const Observation& f) {
    const auto& g = run.geometry;
    const std::int64_t here = g.coordinate(f.tag_site);
    if (!g.is_torus()) return double(here);
    const std::int64_t n = g.sites();
    const std::int64_t x0 = ((here - f.tag_displacement) % n + n) % n;
    return double(x0 + f.tag_displacement);
}

struct TaggedHoleReport {
    std::vector<double> deviations;  // |X/scale - target| per usable replica
    double mean = 0;
    std::size_t degenerate = 0;      // replicas without a tag, excluded
};

inline TaggedHoleReport tagged_hole_check(const Ensemble& ens, double target, double t, double scale = 0) {
    TaggedHoleReport rep;
    for (const auto& run : ens) {
        if (run.degenerate) {
            ++rep.degenerate;
            continue;
        }
        const double s = scale > 0 ? scale : double(run.geometry.sites());
        rep.deviations.push_back(std::abs(tag_coordinate(run, run.at(t)) / s - target));
    }
    if (rep.deviations.empty()) throw std::runtime_error("every replica is degenerate");
    for (double d : rep.deviations) rep.mean += d;
    rep.mean /= double(rep.deviations.size());
    return rep;
}

namespace detail {
inline double facilitation(std::int32_t k) { return k >= 2 ? 1.0 : 0.0; }

template <class Visit>
void for_each_frame(const Ensemble& ens, Visit visit) {
    for (const auto& run : ens)
        for (const auto& f : run.frames) {
            if (f.state.empty()) throw std::invalid_argument("diagnostic needs recorded states");
            visit(run, f);
        }
}
} // namespace detail

// Space-time average of |(2l+1)^{-1} sum g(omega) - G(omega^l)| over every
// site and recorded frame.
inline double one_block_diagnostic(const Ensemble& ens, std::size_t l) {
    double s = 0;
    std::size_t count = 0;
    detail::for_each_frame(ens, [&](const ObservationSet& run, const Observation& f) {
        std::vector<double> g(f.state.size());
        for (std::size_t i = 0; i < g.size(); ++i) g[i] = detail::facilitation(f.state[i]);
        const bool torus = run.geometry.is_torus();
        const auto gl = block_average(g, l, torus);
        const auto wl = block_average(f.state, l, torus);
        for (std::size_t i = 0; i < g.size(); ++i) s += std::abs(gl[i] - flux_G(wl[i]));
        count += g.size();
    });
    return count ? s / double(count) : 0.0;
}

struct TwoBlockReport {
    double unrestricted = 0;       // average over all sites
    double restricted = 0;         // over sites where both blocks exceed 1 + delta
    double restricted_fraction = 0;
};

// |G(omega^l) - G(omega^{eps M})| averaged over sites and frames; the large
// radius is floor(eps M) with M the number of sites.
inline TwoBlockReport two_block_diagnostic(const Ensemble& ens, std::size_t l, double eps, double delta = 0.1) {
    TwoBlockReport rep;
    double s_all = 0, s_res = 0;
    std::size_t n_all = 0, n_res = 0;
    detail::for_each_frame(ens, [&](const ObservationSet& run, const Observation& f) {
        const auto big = std::size_t(std::floor(eps * double(f.state.size())));
        if (big <= l) throw std::invalid_argument("macroscopic block eps*M must exceed the small block radius");
        const bool torus = run.geometry.is_torus();
        const auto a = block_average(f.state, l, torus);
        const auto b = block_average(f.state, big, torus);
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double d = std::abs(flux_G(a[i]) - flux_G(b[i]));
            s_all += d;
            if (a[i] > 1 + delta && b[i] > 1 + delta) {
                s_res += d;
                ++n_res;
            }
        }
        n_all += a.size();
    });
    if (n_all) {
        rep.unrestricted = s_all / double(n_all);
        rep.restricted_fraction = double(n_res) / double(n_all);
    }
    if (n_res) rep.restricted = s_res / double(n_res);
    return rep;
}

// Total variation between the geometric law of mean alpha and the
// equilibrium law of mean alpha, by direct summation.
inline double initial_equilibrium_tv(double alpha) {
    double s = 0;
    for (std::int64_t k = 0; k < 100000; ++k) {
        const double a = geometric_pmf(alpha, k), b = equilibrium_pmf(alpha, k);
        s += std::abs(a - b);
        if (k > 10 && a < 1e-300 && b < 1e-300) break;
    }
    return s / 2;
}

inline constexpr std::int32_t kTvTruncation = 50;

// TV between the pooled single-site histogram (add-one smoothing, bins
// 0..49 and a last bin for k >= 50) and the equilibrium law of mean alpha.
inline double marginal_tv(const std::vector<std::uint64_t>& counts, double alpha) {
    const std::size_t bins = std::size_t(kTvTruncation) + 1;
    if (counts.size() != bins) throw std::invalid_argument("histogram has the wrong number of bins");
    std::uint64_t n = 0;
    for (auto c : counts) n += c;
    double tail = 1, s = 0;
    for (std::size_t k = 0; k < bins; ++k) {
        const double emp = (double(counts[k]) + 1) / (double(n) + double(bins));
        const double ref = k + 1 < bins ? equilibrium_pmf(alpha, std::int64_t(k)) : tail;
        tail -= ref;
        s += std::abs(emp - ref);
    }
    return s / 2;
}

inline std::vector<std::uint64_t> height_histogram(const Ensemble& ens, double t) {
    std::vector<std::uint64_t> h(std::size_t(kTvTruncation) + 1, 0);
    for (const auto& run : ens)
        for (auto k : run.at(t).state) ++h[std::size_t(std::min(k, kTvTruncation))];
    return h;
}

struct EquilibrationRow {
    double t = 0;
    double tv = 0;
};

// Zero-range runs from the geometric product law of mean alpha > 1 on the
// M-torus.  `accelerated` uses the diffusive clock (t in units of M^2);
// otherwise t is microscopic time.
inline std::vector<EquilibrationRow> equilibration_check(double alpha, std::int64_t m, std::vector<double> t_list,
                                                         std::size_t replicas, std::uint64_t seed, unsigned threads,
                                                         bool accelerated = false) {
    if (!(alpha > 1)) throw std::invalid_argument("equilibration needs alpha > 1");
    if (t_list.empty()) throw std::invalid_argument("no observation times");
    std::sort(t_list.begin(), t_list.end());
    auto params = SimParams::symmetric(t_list.back(), t_list, seed);
    params.record_currents = false;
    const double scale = accelerated ? double(m) : 1.0;
    const auto ens =
        run_zero_range_ensemble(Profile::constant(alpha), LatticeGeometry::torus(m), scale, params, replicas, threads);
    std::vector<EquilibrationRow> rows;
    for (double t : t_list) rows.push_back({t, marginal_tv(height_histogram(ens, t), alpha)});
    return rows;
}

struct MaxHeightReport {
    std::int32_t max = 0;
    double threshold = 0;  // log^2 M
    bool flagged = false;
};

inline MaxHeightReport max_height_report(const Ensemble& ens) {
    MaxHeightReport rep;
    std::int64_t m = 0;
    detail::for_each_frame(ens, [&](const ObservationSet&, const Observation& f) {
        m = std::int64_t(f.state.size());
        for (auto k : f.state) rep.max = std::max(rep.max, k);
    });
    const double lm = std::log(double(std::max<std::int64_t>(m, 1)));
    rep.threshold = lm * lm;
    rep.flagged = double(rep.max) >= rep.threshold;
    return rep;
}

} // namespace fzr
