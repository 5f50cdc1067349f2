#pragma once

// Lattice geometries and configurations of the facilitated exclusion
// process (occupancies eta) and the facilitated zero-range process
// (pile heights omega), with phase classification.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace fzr {

enum class GeometryKind { Torus, LineWindow };

// Torus: sites 0..n-1 with periodic neighbours.
// LineWindow: observed coordinates lo..hi-1, with `padding` simulated cells
// on each side.  Array index i holds coordinate lo - padding + i.  Sites
// beyond the simulated range are treated as empty walls.
struct LatticeGeometry {
    GeometryKind kind = GeometryKind::Torus;
    std::int64_t n = 0;
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    std::int64_t padding = 0;

    static LatticeGeometry torus(std::int64_t sites) {
        if (sites < 1) throw std::invalid_argument("torus needs at least one site");
        LatticeGeometry g;
        g.kind = GeometryKind::Torus;
        g.n = sites;
        g.lo = 0;
        g.hi = sites;
        return g;
    }

    static LatticeGeometry line(std::int64_t lo, std::int64_t hi, std::int64_t padding) {
        if (!(lo < hi)) throw std::invalid_argument("line window needs lo < hi");
        if (padding < 0) throw std::invalid_argument("padding must be nonnegative");
        LatticeGeometry g;
        g.kind = GeometryKind::LineWindow;
        g.lo = lo;
        g.hi = hi;
        g.padding = padding;
        g.n = (hi - lo) + 2 * padding;
        return g;
    }

    bool is_torus() const { return kind == GeometryKind::Torus; }
    std::int64_t sites() const { return n; }

    std::int64_t coordinate(std::int64_t index) const {
        return is_torus() ? index : lo - padding + index;
    }
    std::int64_t index_of(std::int64_t coord) const {
        return is_torus() ? coord : coord - lo + padding;
    }

    // Observed index range [first, last).
    std::int64_t observed_first() const { return is_torus() ? 0 : padding; }
    std::int64_t observed_last() const { return is_torus() ? n : padding + (hi - lo); }

    // Number of edges (x, x+1) between simulated sites.
    std::int64_t edges() const {
        if (is_torus()) return n >= 2 ? n : 0;
        return n - 1;
    }

    bool operator==(const LatticeGeometry&) const = default;
};

struct ExclusionConfig {
    LatticeGeometry geometry;
    std::vector<std::uint8_t> occupancy;

    ExclusionConfig() = default;
    ExclusionConfig(LatticeGeometry g, std::vector<std::uint8_t> eta)
        : geometry(g), occupancy(std::move(eta)) {
        if (std::int64_t(occupancy.size()) != geometry.sites())
            throw std::invalid_argument("occupancy size does not match geometry");
        for (auto v : occupancy)
            if (v > 1) throw std::invalid_argument("occupancy entries must be 0 or 1");
    }

    static ExclusionConfig from_particles(LatticeGeometry g, const std::vector<std::int64_t>& coords) {
        std::vector<std::uint8_t> eta(std::size_t(g.sites()), 0);
        for (auto c : coords) {
            const auto i = g.index_of(c);
            if (i < 0 || i >= g.sites()) throw std::out_of_range("particle outside lattice");
            eta[std::size_t(i)] = 1;
        }
        return ExclusionConfig(g, std::move(eta));
    }

    std::int64_t size() const { return geometry.sites(); }
    bool operator==(const ExclusionConfig&) const = default;
};

struct ZeroRangeConfig {
    LatticeGeometry geometry;
    std::vector<std::int32_t> heights;

    ZeroRangeConfig() = default;
    ZeroRangeConfig(LatticeGeometry g, std::vector<std::int32_t> omega)
        : geometry(g), heights(std::move(omega)) {
        if (std::int64_t(heights.size()) != geometry.sites())
            throw std::invalid_argument("heights size does not match geometry");
        for (auto v : heights)
            if (v < 0) throw std::invalid_argument("heights must be nonnegative");
    }

    static ZeroRangeConfig on_torus(std::vector<std::int32_t> omega) {
        const auto m = std::int64_t(omega.size());
        return ZeroRangeConfig(LatticeGeometry::torus(m), std::move(omega));
    }

    std::int64_t size() const { return geometry.sites(); }
    bool operator==(const ZeroRangeConfig&) const = default;
};

enum class Phase { Ergodic, Frozen, Transient };

inline const char* to_string(Phase p) {
    switch (p) {
    case Phase::Ergodic: return "ergodic";
    case Phase::Frozen: return "frozen";
    case Phase::Transient: return "transient";
    }
    return "?";
}

inline std::int64_t particle_count(const ExclusionConfig& eta) {
    return std::accumulate(eta.occupancy.begin(), eta.occupancy.end(), std::int64_t(0));
}

inline std::int64_t hole_count(const ExclusionConfig& eta) {
    return eta.size() - particle_count(eta);
}

inline std::int64_t total_mass(const ZeroRangeConfig& omega) {
    return std::accumulate(omega.heights.begin(), omega.heights.end(), std::int64_t(0));
}

// On a line window only edges with both ends in the observed window count.
inline Phase classify_exclusion(const ExclusionConfig& eta) {
    const auto& g = eta.geometry;
    const auto& o = eta.occupancy;
    bool all_ge1 = true, all_le1 = true;
    auto visit = [&](std::int64_t a, std::int64_t b) {
        const int s = o[std::size_t(a)] + o[std::size_t(b)];
        all_ge1 = all_ge1 && s >= 1;
        all_le1 = all_le1 && s <= 1;
    };
    if (g.is_torus()) {
        const auto n = g.sites();
        if (n == 1) {
            visit(0, 0);
        } else {
            for (std::int64_t x = 0; x < n; ++x) visit(x, (x + 1) % n);
        }
    } else {
        for (std::int64_t x = g.observed_first(); x + 1 < g.observed_last(); ++x) visit(x, x + 1);
    }
    if (all_ge1) return Phase::Ergodic;
    if (all_le1) return Phase::Frozen;
    return Phase::Transient;
}

// Ergodic checked first, so the all-ones configuration is reported ergodic.
inline Phase classify_zero_range(const ZeroRangeConfig& omega) {
    const auto& g = omega.geometry;
    const auto first = g.observed_first(), last = g.observed_last();
    std::int32_t lo = omega.heights[std::size_t(first)], hi = lo;
    for (auto y = first; y < last; ++y) {
        lo = std::min(lo, omega.heights[std::size_t(y)]);
        hi = std::max(hi, omega.heights[std::size_t(y)]);
    }
    if (lo >= 1) return Phase::Ergodic;
    if (hi <= 1) return Phase::Frozen;
    return Phase::Transient;
}

} // namespace fzr
