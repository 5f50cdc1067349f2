#pragma once

// Exclusion <-> zero-range transformation on configurations and
// trajectories.
//
// Torus: with empty sites X_1 < ... < X_M ordered cyclically from the tagged
// one, omega_i = X_{i+1} - X_i - 1 (mod N), array index i-1 <-> label i.
// The array edge (M-1, 0) crosses the tagged hole.
//
// Line window: the M holes split the window into M+1 gaps, including the
// clusters touching the walls.  Gap j (array index j) lies between holes j-1
// and j.  With k0 holes strictly left of the tag, gap j has coordinate
// j - k0 - 1, so the tag sits between zero-range sites -1 and 0 and the
// array edge k0 crosses it.

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "dynamics.hpp"

namespace fzr {

struct TagState {
    std::int64_t x1 = 0;         // coordinate of the tagged hole
    std::int64_t holes = 0;      // M
    std::int64_t tag_index = 0;  // holes strictly left of the tag (line); 0 on the torus
    bool degenerate = false;     // no empty site (torus) or none at/right of the origin (line)
    bool line = false;

    // Array index of the zero-range edge crossing the tag.
    std::int64_t tag_edge() const { return line ? tag_index : holes - 1; }
};

namespace detail {

inline std::vector<std::int64_t> hole_indices(const ExclusionConfig& eta) {
    std::vector<std::int64_t> h;
    for (std::int64_t i = 0; i < eta.size(); ++i)
        if (eta.occupancy[std::size_t(i)] == 0) h.push_back(i);
    return h;
}

inline std::int64_t first_hole_from_origin(const ExclusionConfig& eta) {
    const auto& g = eta.geometry;
    const std::int64_t start = g.is_torus() ? 0 : std::max<std::int64_t>(0, g.index_of(0));
    for (std::int64_t i = start; i < eta.size(); ++i)
        if (eta.occupancy[std::size_t(i)] == 0) return i;
    return -1;
}

} // namespace detail

// Maps eta with the hole at array index `tag_site` as tagged hole.
inline std::pair<ZeroRangeConfig, TagState> map_exclusion_to_zr(const ExclusionConfig& eta, std::int64_t tag_site) {
    const auto& g = eta.geometry;
    const auto holes = detail::hole_indices(eta);
    const std::int64_t m = std::int64_t(holes.size());
    TagState tag;
    tag.holes = m;
    if (g.is_torus()) {
        const std::int64_t n = eta.size();
        if (m == 0) {
            // No empty site: one zero-range site carrying all particles, X_1 = 1.
            tag.degenerate = true;
            tag.holes = 1;
            tag.x1 = 1 % n;
            return {ZeroRangeConfig::on_torus({std::int32_t(n)}), tag};
        }
        if (tag_site < 0 || tag_site >= n || eta.occupancy[std::size_t(tag_site)] != 0)
            throw std::invalid_argument("tag must be an empty site");
        std::size_t start = 0;
        while (holes[start] != tag_site) ++start;
        std::vector<std::int32_t> omega(static_cast<std::size_t>(m));
        for (std::int64_t i = 0; i < m; ++i) {
            const auto a = holes[(start + std::size_t(i)) % std::size_t(m)];
            const auto b = holes[(start + std::size_t(i) + 1) % std::size_t(m)];
            omega[std::size_t(i)] = std::int32_t(((b - a - 1) % n + n) % n);
        }
        if (m == 1) omega[0] = std::int32_t(n - 1);
        tag.x1 = tag_site;
        return {ZeroRangeConfig::on_torus(std::move(omega)), tag};
    }
    tag.line = true;
    std::vector<std::int32_t> omega(std::size_t(m + 1));
    std::int64_t prev = -1;
    for (std::int64_t j = 0; j < m; ++j) {
        omega[std::size_t(j)] = std::int32_t(holes[std::size_t(j)] - prev - 1);
        prev = holes[std::size_t(j)];
    }
    omega[std::size_t(m)] = std::int32_t(eta.size() - prev - 1);
    std::int64_t k0 = 0;
    while (k0 < m && holes[std::size_t(k0)] != tag_site) ++k0;
    tag.degenerate = tag_site < 0 || k0 == m;
    tag.tag_index = k0;
    tag.x1 = tag_site >= 0 ? g.coordinate(tag_site) : g.coordinate(eta.size());
    const auto zg = LatticeGeometry::line(-k0 - 1, m - k0, 0);
    return {ZeroRangeConfig(zg, std::move(omega)), tag};
}

// Tags the first empty site at or right of the origin.
inline std::pair<ZeroRangeConfig, TagState> map_exclusion_to_zr(const ExclusionConfig& eta) {
    return map_exclusion_to_zr(eta, detail::first_hole_from_origin(eta));
}

inline ExclusionConfig map_zr_to_exclusion(const ZeroRangeConfig& omega, const TagState& tag, std::int64_t n) {
    if (!omega.geometry.is_torus()) throw std::invalid_argument("torus inverse map needs a torus configuration");
    const std::int64_t m = omega.size();
    if (total_mass(omega) + m != n) {
        std::ostringstream msg;
        msg << "inconsistent size: mass " << total_mass(omega) << " + sites " << m << " != N = " << n;
        throw std::invalid_argument(msg.str());
    }
    std::vector<std::uint8_t> eta(std::size_t(n), 1);
    const std::int64_t x1 = ((tag.x1 % n) + n) % n;
    std::int64_t x = x1;
    for (std::int64_t i = 0; i < m; ++i) {
        eta[std::size_t(x)] = 0;
        x = (x + 1 + omega.heights[std::size_t(i)]) % n;
    }
    return ExclusionConfig(LatticeGeometry::torus(n), std::move(eta));
}

// Line window inverse: gaps fill the exclusion window from its left wall.
inline ExclusionConfig map_zr_to_exclusion(const ZeroRangeConfig& omega, const TagState& tag,
                                           const LatticeGeometry& g) {
    if (g.is_torus()) return map_zr_to_exclusion(omega, tag, g.sites());
    const std::int64_t m = omega.size() - 1;
    if (total_mass(omega) + m != g.sites()) throw std::invalid_argument("inconsistent window size");
    std::vector<std::uint8_t> eta(std::size_t(g.sites()), 1);
    std::int64_t x = 0;
    for (std::int64_t j = 0; j < m; ++j) {
        x += omega.heights[std::size_t(j)];
        eta[std::size_t(x)] = 0;
        if (j == tag.tag_index && g.coordinate(x) != tag.x1)
            throw std::invalid_argument("tag position inconsistent with configuration");
        ++x;
    }
    return ExclusionConfig(g, std::move(eta));
}

struct CommutationReport {
    bool ok = true;
    std::uint64_t events = 0;
    std::int64_t first_discrepancy = -1;  // event number, -1 if none
    std::string message;
};

// Replays an exclusion trajectory: every swap moves one hole, which moves one
// particle between the two gaps adjacent to that hole.  After each event the
// induced zero-range state must equal the image of the exclusion state, and
// the tag displacement must equal minus the current through the tag edge.
inline CommutationReport trajectory_commutation_check(const ExclusionConfig& eta0, const SimParams& params,
                                                      std::uint64_t max_events = 0) {
    params.validate();
    CommutationReport rep;
    FepEngine engine(eta0, params);
    if (!engine.has_tag()) {
        rep.message = "no tagged hole; nothing to replay";
        return rep;
    }
    const auto& g = eta0.geometry;
    const bool torus = g.is_torus();
    auto [omega, tag] = map_exclusion_to_zr(eta0, engine.tag_site());
    const std::int64_t m = tag.holes;
    std::vector<std::int64_t> label(std::size_t(eta0.size()), -1);
    {
        const auto holes = detail::hole_indices(eta0);
        std::size_t start = 0;
        if (torus)
            while (holes[start] != engine.tag_site()) ++start;
        for (std::size_t j = 0; j < holes.size(); ++j) {
            const std::size_t k = torus ? (j + holes.size() - start) % holes.size() : j;
            label[std::size_t(holes[j])] = std::int64_t(k);
        }
    }
    std::vector<std::int64_t> zr_current(std::size_t(omega.size()), 0);
    const std::int64_t tag_edge = tag.tag_edge();
    const double horizon = params.horizon * params.clock_factor(eta0.size());
    auto fail = [&](const std::string& why) {
        rep.ok = false;
        rep.first_discrepancy = std::int64_t(engine.events());
        rep.message = why;
    };
    while (!max_events || engine.events() < max_events) {
        const auto ev = engine.advance(horizon);
        if (!ev) break;
        // The hole sat at ev->to and is now at ev->from.
        const std::int64_t k = label[std::size_t(ev->to)];
        label[std::size_t(ev->from)] = k;
        label[std::size_t(ev->to)] = -1;
        std::int64_t src, dst, edge;
        if (torus) {
            const std::int64_t left_gap = (k - 1 + m) % m;
            src = ev->direction > 0 ? left_gap : k;
            dst = ev->direction > 0 ? k : left_gap;
            edge = left_gap;
        } else {
            src = ev->direction > 0 ? k : k + 1;
            dst = ev->direction > 0 ? k + 1 : k;
            edge = k;
        }
        if (omega.heights[std::size_t(src)] < 2) {
            fail("induced pile move leaves a site with fewer than two particles");
            break;
        }
        --omega.heights[std::size_t(src)];
        ++omega.heights[std::size_t(dst)];
        zr_current[std::size_t(edge)] += ev->direction;
        const auto mapped = map_exclusion_to_zr(engine.config(), engine.tag_site()).first;
        if (!(mapped.heights == omega.heights)) {
            fail("mapped exclusion state differs from induced zero-range state");
            break;
        }
        if (engine.tag_displacement() != -zr_current[std::size_t(tag_edge)]) {
            fail("tag displacement differs from minus the tag-edge current");
            break;
        }
    }
    rep.events = engine.events();
    if (rep.ok) rep.message = "no discrepancy";
    return rep;
}

// Exclusion dynamics realised through the mapped zero-range process, which
// has the same law; eta and the tag are rebuilt at observation times from
// omega and the current through the tag edge.  Frames carry no exclusion
// edge currents.
inline ObservationSet run_fep_mapped(const ExclusionConfig& eta0, const SimParams& params) {
    params.validate();
    const auto& g = eta0.geometry;
    const std::int64_t first = detail::first_hole_from_origin(eta0);
    ObservationSet out;
    out.process = "fep";
    out.geometry = g;
    out.replica = params.replica;
    if (first < 0) {
        // Nothing can move without a hole.
        out.degenerate = true;
        for (double t : params.observation_times) {
            Observation f;
            f.time = t;
            if (params.record_states) f.state.assign(eta0.occupancy.begin(), eta0.occupancy.end());
            out.frames.push_back(std::move(f));
        }
        return out;
    }
    const auto [omega0, tag0] = map_exclusion_to_zr(eta0, first);
    SimParams zp = params;
    zp.scale = params.scale > 0 ? params.scale : double(eta0.size());
    zp.record_states = true;
    zp.record_currents = true;
    zp.observation_times = params.observation_times;
    ZeroRangeEngine engine({&omega0}, zp);
    const double factor = zp.clock_factor(eta0.size());
    const std::int64_t edge = tag0.tag_edge();
    detail::drive(engine, zp, factor, out, [&](double t) {
        Observation f;
        f.time = t;
        const std::int64_t disp = -engine.currents()[std::size_t(edge)];
        TagState tag = tag0;
        if (g.is_torus()) {
            tag.x1 = ((tag0.x1 + disp) % g.sites() + g.sites()) % g.sites();
        } else {
            tag.x1 = tag0.x1 + disp;
        }
        const auto eta = map_zr_to_exclusion(engine.config(), tag, g);
        if (params.record_states) f.state.assign(eta.occupancy.begin(), eta.occupancy.end());
        f.tag_site = g.index_of(tag.x1);
        f.tag_displacement = disp;
        f.events = engine.events();
        out.frames.push_back(std::move(f));
    });
    detail::check_walls(out, g, params, factor, 2);
    return out;
}

} // namespace fzr
