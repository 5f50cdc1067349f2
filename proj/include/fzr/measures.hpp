#pragma once

// Product initial measures and the monotone coupling of initial data.
// Every site draws one uniform from its own stream (see rng.hpp), so a
// configuration depends only on (profile, geometry, scale, seed, replica).

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>

#include "core.hpp"
#include "profile.hpp"
#include "rng.hpp"

namespace fzr {

namespace detail {

inline double site_uniform(std::uint64_t seed, std::uint64_t replica, std::int64_t index) {
    return stream_uniform(seed, stream_id(StreamDomain::Initial, replica, std::uint64_t(index)));
}

// Geometric law on {0,1,...} with mean a, by inversion of the survival
// function P(k >= j) = q^j, q = a/(1+a).  v is uniform on (0,1].
inline std::int32_t geometric_from_uniform(double a, double v) {
    if (a <= 0) return 0;
    const double lq = std::log(a / (1.0 + a));
    const double k = std::floor(std::log(v) / lq);
    return std::int32_t(std::min(k, double(std::numeric_limits<std::int32_t>::max() / 2)));
}

// Law on {1,2,...} with mean a >= 1: P(k >= j) = (1 - 1/a)^(j-1).
inline std::int32_t equilibrium_from_uniform(double a, double v) {
    if (a <= 1) return 1;
    const double lq = std::log(1.0 - 1.0 / a);
    const double k = std::floor(std::log(v) / lq);
    return 1 + std::int32_t(std::min(k, double(std::numeric_limits<std::int32_t>::max() / 2)));
}

inline void check_range(const Profile& p, double lo, double hi, bool hi_open, const char* what) {
    const double a = p.inf(), b = p.sup();
    if (!(a >= lo) || !(hi_open ? b < hi : b <= hi))
        throw std::invalid_argument(std::string(what) + " profile values out of range");
}

} // namespace detail

// Site at coordinate x is occupied with probability rho(x / scale).
inline ExclusionConfig sample_bernoulli_profile(const Profile& rho, const LatticeGeometry& g, double scale,
                                                std::uint64_t seed, std::uint64_t replica = 0) {
    detail::check_range(rho, 0.0, 1.0, true, "exclusion");
    std::vector<std::uint8_t> eta(std::size_t(g.sites()));
    for (std::int64_t i = 0; i < g.sites(); ++i) {
        const double r = rho(double(g.coordinate(i)) / scale);
        eta[std::size_t(i)] = detail::site_uniform(seed, replica, i) < r ? 1 : 0;
    }
    return ExclusionConfig(g, std::move(eta));
}

inline ExclusionConfig sample_bernoulli_profile(const Profile& rho, std::int64_t n, std::uint64_t seed,
                                                std::uint64_t replica = 0) {
    return sample_bernoulli_profile(rho, LatticeGeometry::torus(n), double(n), seed, replica);
}

// Heights in {0,1} with P(1) = c(y/scale); a frozen reference law for
// subcritical densities.
inline ZeroRangeConfig sample_bernoulli_heights(const Profile& c, const LatticeGeometry& g, double scale,
                                                std::uint64_t seed, std::uint64_t replica = 0) {
    detail::check_range(c, 0.0, 1.0, false, "height");
    std::vector<std::int32_t> h(std::size_t(g.sites()));
    for (std::int64_t i = 0; i < g.sites(); ++i)
        h[std::size_t(i)] = detail::site_uniform(seed, replica, i) < c(double(g.coordinate(i)) / scale) ? 1 : 0;
    return ZeroRangeConfig(g, std::move(h));
}

// Independent geometric heights with mean alpha(y/scale).
inline ZeroRangeConfig sample_geometric_profile(const Profile& alpha, const LatticeGeometry& g, double scale,
                                                std::uint64_t seed, std::uint64_t replica = 0) {
    if (!(alpha.inf() >= 0)) throw std::invalid_argument("zero-range profile must be nonnegative");
    std::vector<std::int32_t> h(std::size_t(g.sites()));
    for (std::int64_t i = 0; i < g.sites(); ++i) {
        const double v = 1.0 - detail::site_uniform(seed, replica, i);
        h[std::size_t(i)] = detail::geometric_from_uniform(alpha(double(g.coordinate(i)) / scale), v);
    }
    return ZeroRangeConfig(g, std::move(h));
}

inline ZeroRangeConfig sample_geometric_profile(const Profile& alpha, std::int64_t m, std::uint64_t seed,
                                                std::uint64_t replica = 0) {
    return sample_geometric_profile(alpha, LatticeGeometry::torus(m), double(m), seed, replica);
}

// Equilibrium law on {1,2,...} with mean alpha >= 1 at every site.
inline ZeroRangeConfig sample_equilibrium_zr(double alpha, const LatticeGeometry& g, std::uint64_t seed,
                                             std::uint64_t replica = 0) {
    if (!(alpha >= 1)) throw std::invalid_argument("equilibrium measure needs alpha >= 1");
    std::vector<std::int32_t> h(std::size_t(g.sites()));
    for (std::int64_t i = 0; i < g.sites(); ++i)
        h[std::size_t(i)] = detail::equilibrium_from_uniform(alpha, 1.0 - detail::site_uniform(seed, replica, i));
    return ZeroRangeConfig(g, std::move(h));
}

inline ZeroRangeConfig sample_equilibrium_zr(double alpha, std::int64_t m, std::uint64_t seed,
                                             std::uint64_t replica = 0) {
    return sample_equilibrium_zr(alpha, LatticeGeometry::torus(m), seed, replica);
}

// (omega, zeta) with omega ~ geometric(alpha), zeta ~ equilibrium(alpha_bar)
// and omega <= zeta sitewise; both read the same uniform.  The first
// component coincides with sample_geometric_profile for the same seed.
inline std::pair<ZeroRangeConfig, ZeroRangeConfig>
sample_monotone_coupling(const Profile& alpha, double alpha_bar, const LatticeGeometry& g, double scale,
                         std::uint64_t seed, std::uint64_t replica = 0) {
    if (!(alpha.inf() >= 0)) throw std::invalid_argument("zero-range profile must be nonnegative");
    if (!(alpha_bar >= alpha.sup() + 1))
        throw std::invalid_argument("coupling needs alpha_bar >= sup alpha + 1");
    std::vector<std::int32_t> w(std::size_t(g.sites())), z(std::size_t(g.sites()));
    for (std::int64_t i = 0; i < g.sites(); ++i) {
        const double v = 1.0 - detail::site_uniform(seed, replica, i);
        w[std::size_t(i)] = detail::geometric_from_uniform(alpha(double(g.coordinate(i)) / scale), v);
        z[std::size_t(i)] = detail::equilibrium_from_uniform(alpha_bar, v);
    }
    return {ZeroRangeConfig(g, std::move(w)), ZeroRangeConfig(g, std::move(z))};
}

inline std::pair<ZeroRangeConfig, ZeroRangeConfig>
sample_monotone_coupling(const Profile& alpha, double alpha_bar, std::int64_t m, std::uint64_t seed,
                         std::uint64_t replica = 0) {
    return sample_monotone_coupling(alpha, alpha_bar, LatticeGeometry::torus(m), double(m), seed, replica);
}

// Closed-form marginals.
inline double geometric_pmf(double a, std::int64_t k) {
    if (k < 0) return 0;
    if (a <= 0) return k == 0 ? 1.0 : 0.0;
    return std::pow(a / (1 + a), double(k)) / (1 + a);
}

inline double equilibrium_pmf(double a, std::int64_t k) {
    if (k < 1) return 0;
    if (a <= 1) return k == 1 ? 1.0 : 0.0;
    return std::pow(1 - 1 / a, double(k - 1)) / a;
}

} // namespace fzr
