#pragma once

// Rejection-free continuous-time simulation of the facilitated exclusion
// process, the facilitated zero-range process and the basic coupling of two
// zero-range processes.
//
// Enabled moves are kept in two indexed sets (rightward moves of rate p,
// leftward moves of rate p'), so selecting and updating a move is O(1).
// Macroscopic time t corresponds to microscopic time t * scale^kappa.

#include <array>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "core.hpp"
#include "rng.hpp"

namespace fzr {

struct SimParams {
    double p = 1.0;
    double p_prime = 1.0;
    int kappa = 2;
    double horizon = 0.0;          // macroscopic
    double scale = 0.0;            // N or M; 0 means the number of simulated sites
    std::uint64_t seed = 0;
    std::uint64_t replica = 0;
    std::vector<double> observation_times;
    std::uint64_t max_events = 0;  // 0: unlimited
    bool record_states = true;
    bool record_currents = true;

    static SimParams symmetric(double horizon, std::vector<double> obs = {}, std::uint64_t seed = 0) {
        SimParams s;
        s.p = s.p_prime = 1.0;
        s.kappa = 2;
        s.horizon = horizon;
        s.observation_times = std::move(obs);
        s.seed = seed;
        return s;
    }

    static SimParams asymmetric(double p, double horizon, std::vector<double> obs = {}, std::uint64_t seed = 0) {
        SimParams s;
        s.p = p;
        s.p_prime = 1.0 - p;
        s.kappa = 1;
        s.horizon = horizon;
        s.observation_times = std::move(obs);
        s.seed = seed;
        return s;
    }

    bool is_symmetric() const { return p == p_prime && kappa == 2; }
    bool is_asymmetric() const { return kappa == 1 && p > 0.5 && p <= 1.0 && std::abs(p_prime - (1.0 - p)) < 1e-15; }

    void validate() const {
        if (!(p >= 0 && p <= 1 && p_prime >= 0 && p_prime <= 1))
            throw std::invalid_argument("rates p, p' must lie in [0,1]");
        if (!is_symmetric() && !is_asymmetric())
            throw std::invalid_argument("need p = p' with kappa = 2 (symmetric) or p' = 1-p, p in (1/2,1], kappa = 1");
        if (!(horizon >= 0)) throw std::invalid_argument("horizon must be nonnegative");
        if (scale < 0) throw std::invalid_argument("scale must be nonnegative");
        for (std::size_t i = 0; i < observation_times.size(); ++i) {
            const double t = observation_times[i];
            if (!(t >= 0 && t <= horizon)) throw std::invalid_argument("observation time outside [0, horizon]");
            if (i > 0 && !(t >= observation_times[i - 1]))
                throw std::invalid_argument("observation times must be sorted");
        }
    }

    double clock_factor(std::int64_t sites) const {
        const double s = scale > 0 ? scale : double(sites);
        return std::pow(s, kappa);
    }
};

struct Observation {
    double time = 0;                     // macroscopic
    std::vector<std::int32_t> state;     // eta (0/1) or omega
    std::vector<std::int32_t> partner;   // zeta for coupled runs
    std::vector<std::int64_t> current;   // net current across edge (y, y+1), index y
    std::int64_t tag_site = -1;          // array index of the tagged hole (exclusion)
    std::int64_t tag_displacement = 0;   // unwrapped X(t) - X(0)
    std::uint64_t events = 0;
};

struct ObservationSet {
    std::string process;
    LatticeGeometry geometry;
    std::uint64_t replica = 0;
    std::vector<Observation> frames;
    std::uint64_t total_events = 0;
    bool degenerate = false;        // exclusion run without any empty site
    bool boundary_reached = false;  // wall influence reached the observed window
    bool budget_exhausted = false;
    std::int64_t light_cone_left = 0;
    std::int64_t light_cone_right = 0;

    const Observation& at(double t) const {
        for (const auto& f : frames)
            if (std::abs(f.time - t) <= 1e-12 * (1 + std::abs(t))) return f;
        throw std::out_of_range("time not in observation schedule");
    }
};

// Set of small integers with O(1) insert, erase and uniform pick.
class IndexedSet {
public:
    explicit IndexedSet(std::size_t capacity = 0) : pos_(capacity, -1) { items_.reserve(capacity); }

    bool contains(std::int64_t v) const { return pos_[std::size_t(v)] >= 0; }
    std::size_t size() const { return items_.size(); }
    std::int64_t operator[](std::size_t i) const { return items_[i]; }

    void insert(std::int64_t v) {
        if (pos_[std::size_t(v)] >= 0) return;
        pos_[std::size_t(v)] = std::int32_t(items_.size());
        items_.push_back(std::int32_t(v));
    }

    void erase(std::int64_t v) {
        const auto at = pos_[std::size_t(v)];
        if (at < 0) return;
        const auto last = items_.back();
        items_[std::size_t(at)] = last;
        pos_[std::size_t(last)] = at;
        items_.pop_back();
        pos_[std::size_t(v)] = -1;
    }

    void set(std::int64_t v, bool on) {
        if (on) insert(v);
        else erase(v);
    }

private:
    std::vector<std::int32_t> items_;
    std::vector<std::int32_t> pos_;
};

struct MoveEvent {
    double time = 0;       // microscopic
    std::int64_t from = 0; // array index the particle leaves
    std::int64_t to = 0;   // array index it enters
    std::int64_t edge = 0; // edge index y of (y, y+1)
    int direction = 0;     // +1 rightward, -1 leftward
};

// Picks bucket and member from one draw; integer arithmetic when both
// buckets have the same rate or one bucket is switched off.
namespace detail {
inline std::pair<bool, std::size_t> pick_move(Philox& rng, double p, std::size_t nr, double q, std::size_t nl) {
    if (p == q || q == 0 || p == 0) {
        const std::size_t k = std::size_t(rng.below(std::uint64_t((p > 0 ? nr : 0) + (q > 0 ? nl : 0))));
        if (p > 0 && k < nr) return {true, k};
        return {false, p > 0 ? k - nr : k};
    }
    const double wr = p * double(nr), total = wr + q * double(nl);
    const double u = rng.uniform() * total;
    if (u < wr) {
        auto i = std::size_t(u / p);
        return {true, i < nr ? i : nr - 1};
    }
    auto i = std::size_t((u - wr) / q);
    return {false, i < nl ? i : nl - 1};
}
} // namespace detail

class FepEngine {
public:
    FepEngine(const ExclusionConfig& eta0, const SimParams& params)
        : g_(eta0.geometry), n_(eta0.size()), torus_(g_.is_torus()), p_(params.p), q_(params.p_prime),
          rng_(params.seed, stream_id(StreamDomain::Dynamics, params.replica, 0)),
          cells_(std::size_t(n_ + 2 * kGhost + 8), 0), rstat_(std::size_t(n_ + 8), 0), lstat_(std::size_t(n_ + 8), 0),
          right_(std::size_t(n_)), left_(std::size_t(n_)), current_(std::size_t(n_), 0) {
        for (std::int64_t x = 0; x < n_; ++x) put(x, eta0.occupancy[std::size_t(x)]);
        for (std::int64_t x = 0; x < g_.edges(); ++x) refresh(x);
        locate_tag();
        unit_exp_ = rng_.exponential();
    }

    double time() const { return time_; }
    std::uint64_t events() const { return events_; }
    std::vector<std::uint8_t> occupancy() const {
        return {cells_.begin() + kGhost, cells_.begin() + kGhost + n_};
    }
    const std::uint8_t* data() const { return cells_.data() + kGhost; }
    const std::vector<std::int64_t>& currents() const { return current_; }
    std::int64_t tag_site() const { return tag_; }
    std::int64_t tag_displacement() const { return tag_disp_; }
    bool has_tag() const { return tag_ >= 0; }
    double total_rate() const { return p_ * double(right_.size()) + q_ * double(left_.size()); }
    ExclusionConfig config() const { return ExclusionConfig(g_, occupancy()); }

    // Next event if it occurs before micro time `limit`; otherwise the clock
    // is moved to `limit` and nothing happens.
    std::optional<MoveEvent> advance(double limit) {
        // A pending event time stays valid while the state is unchanged:
        // the residual of an exponential clock is again exponential.
        if (next_ < 0) {
            const double rate = total_rate();
            if (rate <= 0) {
                time_ = std::max(time_, limit);
                return std::nullopt;
            }
            next_ = time_ + unit_exp_ / rate;
            unit_exp_ = -1;
        }
        if (next_ > limit) {
            time_ = limit;
            return std::nullopt;
        }
        const double t = next_;
        assert(t > time_);
        time_ = t;
        next_ = -1;
        const auto [rightward, i] = detail::pick_move(rng_, p_, right_.size(), q_, left_.size());
        unit_exp_ = rng_.exponential();
        const std::int64_t x = rightward ? right_[i] : left_[i];
        const std::int64_t y = x + 1 == n_ ? 0 : x + 1;
        put(x, rightward ? 0 : 1);
        put(y, rightward ? 1 : 0);
        current_[std::size_t(x)] += rightward ? 1 : -1;
        if (tag_ >= 0) {
            if (rightward && tag_ == y) {
                tag_ = x;
                --tag_disp_;
            } else if (!rightward && tag_ == x) {
                tag_ = y;
                ++tag_disp_;
            }
        }
        if (x >= 3 && x + 5 <= n_) {
            refresh_window(x);
        } else if (torus_ && n_ < 8) {
            for (std::int64_t z = 0; z < n_; ++z) refresh(z);
        } else {
            for (std::int64_t d = -2; d <= 2; ++d) {
                std::int64_t z = x + d;
                if (torus_) z = z < 0 ? z + n_ : (z >= n_ ? z - n_ : z);
                else if (z < 0 || z >= n_ - 1) continue;
                refresh(z);
            }
        }
        ++events_;
        MoveEvent ev;
        ev.time = t;
        ev.edge = x;
        ev.direction = rightward ? 1 : -1;
        ev.from = rightward ? x : y;
        ev.to = rightward ? y : x;
        return ev;
    }

private:
    static constexpr std::int64_t kGhost = 3;

    // Writes site x and, on the torus, its periodic ghost copies.
    void put(std::int64_t x, std::uint8_t v) {
        cells_[std::size_t(x + kGhost)] = v;
        if (!torus_) return;
        if (n_ >= kGhost) {
            if (x < kGhost) cells_[std::size_t(x + n_ + kGhost)] = v;
            if (x >= n_ - kGhost) cells_[std::size_t(x - n_ + kGhost)] = v;
        } else {
            for (std::int64_t j = -kGhost; j < n_ + kGhost; ++j)
                cells_[std::size_t(j + kGhost)] = cells_[std::size_t(((j % n_) + n_) % n_ + kGhost)];
        }
    }

    std::uint8_t cell(std::int64_t z) const {
        if (torus_ && n_ < kGhost) return cells_[std::size_t(((z % n_) + n_) % n_ + kGhost)];
        return cells_[std::size_t(z + kGhost)];
    }

    void refresh(std::int64_t x) {
        const std::uint8_t a = cell(x), b = cell(x + 1);
        const std::uint8_t r = (p_ > 0) & a & (b ^ 1) & cell(x - 1);
        const std::uint8_t l = (q_ > 0) & (a ^ 1) & b & cell(x + 2);
        if (r != rstat_[std::size_t(x)]) {
            rstat_[std::size_t(x)] = r;
            right_.set(x, r);
        }
        if (l != lstat_[std::size_t(x)]) {
            lstat_[std::size_t(x)] = l;
            left_.set(x, l);
        }
    }

    // Edges x-2..x+2 from one 8-byte window of sites x-3..x+4, away from
    // the seam and the walls.  Byte k of `right` is the rightward status of
    // edge x-2+k, byte k of `left` that of edge x-3+k.
    void refresh_window(std::int64_t x) {
        std::uint64_t w, old_r, old_l;
        std::memcpy(&w, cells_.data() + kGhost + x - 3, 8);
        std::memcpy(&old_r, rstat_.data() + x - 2, 8);
        std::memcpy(&old_l, lstat_.data() + x - 2, 8);
        constexpr std::uint64_t ones = 0x0101010101010101ull;
        const std::uint64_t five = 0x000000FFFFFFFFFFull;
        const std::uint64_t r = (p_ > 0 ? (w & (w >> 8) & ~(w >> 16) & ones) : 0) & five;
        const std::uint64_t l = (q_ > 0 ? (~w & (w >> 8) & (w >> 16) & ones) >> 8 : 0) & five;
        std::uint64_t dr = (r ^ old_r) & five, dl = (l ^ old_l) & five;
        while (dr) {
            const int k = __builtin_ctzll(dr) >> 3;
            const std::int64_t z = x - 2 + k;
            const std::uint8_t v = std::uint8_t(r >> (8 * k)) & 1;
            rstat_[std::size_t(z)] = v;
            right_.set(z, v);
            dr &= ~(0xFFull << (8 * k));
        }
        while (dl) {
            const int k = __builtin_ctzll(dl) >> 3;
            const std::int64_t z = x - 2 + k;
            const std::uint8_t v = std::uint8_t(l >> (8 * k)) & 1;
            lstat_[std::size_t(z)] = v;
            left_.set(z, v);
            dl &= ~(0xFFull << (8 * k));
        }
    }

    void locate_tag() {
        // First empty site at or right of coordinate 0.
        tag_ = -1;
        const std::int64_t start = torus_ ? 0 : std::max<std::int64_t>(0, g_.index_of(0));
        for (std::int64_t i = start; i < n_; ++i)
            if (cell(i) == 0) {
                tag_ = i;
                return;
            }
    }

    LatticeGeometry g_;
    std::int64_t n_;
    bool torus_;
    double p_, q_;
    Philox rng_;
    std::vector<std::uint8_t> cells_;  // kGhost ghost cells on each side
    std::vector<std::uint8_t> rstat_, lstat_;
    IndexedSet right_, left_;
    std::vector<std::int64_t> current_;
    double time_ = 0;
    double next_ = -1;
    double unit_exp_ = -1;
    std::uint64_t events_ = 0;
    std::int64_t tag_ = -1;
    std::int64_t tag_disp_ = 0;
};

// K = 1: the facilitated zero-range process.  K = 2: basic coupling; a site
// is active when either component has height >= 2 there, and each component
// with height >= 2 follows the move.
//
// Every active site carries a rightward clock of rate p and a leftward clock
// of rate p'.  On a line window a clock pointing into a wall is thinned:
// it rings without effect, which leaves the law unchanged.
template <int K>
class ZeroRangeEngineT {
public:
    ZeroRangeEngineT(const std::array<const ZeroRangeConfig*, K>& init, const SimParams& params)
        : g_(init[0]->geometry), n_(init[0]->size()), torus_(g_.is_torus()), p_(params.p), q_(params.p_prime),
          rng_(params.seed, stream_id(StreamDomain::Dynamics, params.replica, 0)), active_(std::size_t(n_)) {
        for (int k = 0; k < K; ++k) {
            if (!(init[std::size_t(k)]->geometry == g_))
                throw std::invalid_argument("coupled configurations need the same geometry");
            h_[std::size_t(k)] = init[std::size_t(k)]->heights;
            current_[std::size_t(k)].assign(std::size_t(n_), 0);
        }
        if (torus_ && n_ < 2) {
            frozen_ = true;  // a single site has nowhere to send particles
        } else {
            for (std::int64_t y = 0; y < n_; ++y)
                if (is_active(y)) active_.insert(y);
        }
        unit_exp_ = rng_.exponential();
    }

    double time() const { return time_; }
    std::uint64_t events() const { return events_; }
    std::uint64_t null_rings() const { return null_rings_; }
    const std::vector<std::int32_t>& heights(int k = 0) const { return h_[std::size_t(k)]; }
    const std::vector<std::int64_t>& currents(int k = 0) const { return current_[std::size_t(k)]; }
    double total_rate() const { return frozen_ ? 0.0 : (p_ + q_) * double(active_.size()); }
    ZeroRangeConfig config(int k = 0) const { return ZeroRangeConfig(g_, h_[std::size_t(k)]); }

    std::optional<MoveEvent> advance(double limit) {
        while (true) {
            if (next_ < 0) {
                const double rate = total_rate();
                if (rate <= 0) {
                    time_ = std::max(time_, limit);
                    return std::nullopt;
                }
                next_ = time_ + unit_exp_ / rate;
                unit_exp_ = -1;
            }
            if (next_ > limit) {
                time_ = limit;
                return std::nullopt;
            }
            assert(next_ >= time_);
            time_ = next_;
            next_ = -1;
            std::int64_t y;
            bool rightward;
            if (p_ == q_) {
                const std::uint64_t k = rng_.below(2 * std::uint64_t(active_.size()));
                y = active_[std::size_t(k >> 1)];
                rightward = (k & 1) != 0;
            } else {
                y = active_[std::size_t(rng_.below(active_.size()))];
                rightward = q_ == 0 || (p_ > 0 && rng_.uniform() * (p_ + q_) < p_);
            }
            unit_exp_ = rng_.exponential();
            if (!torus_ && (rightward ? y + 1 >= n_ : y == 0)) {
                ++null_rings_;
                continue;
            }
            const std::int64_t dj = rightward ? 1 : -1;
            std::int64_t z = y + dj;
            z += (z < 0) * n_ - (z >= n_) * n_;
            const std::int64_t edge = rightward ? y : z;
            for (int k = 0; k < K; ++k) {
                auto& h = h_[std::size_t(k)];
                const std::int32_t moves = h[std::size_t(y)] >= 2;
                h[std::size_t(y)] -= moves;
                h[std::size_t(z)] += moves;
                current_[std::size_t(k)][std::size_t(edge)] += moves * dj;
            }
            if (!is_active(y)) active_.erase(y);
            if (is_active(z)) active_.insert(z);
            ++events_;
            MoveEvent ev;
            ev.time = time_;
            ev.from = y;
            ev.to = z;
            ev.edge = edge;
            ev.direction = int(dj);
            return ev;
        }
    }

private:
    bool is_active(std::int64_t y) const {
        bool a = false;
        for (int k = 0; k < K; ++k) a = a || h_[std::size_t(k)][std::size_t(y)] >= 2;
        return a;
    }

    LatticeGeometry g_;
    std::int64_t n_;
    bool torus_;
    bool frozen_ = false;
    double p_, q_;
    Philox rng_;
    std::array<std::vector<std::int32_t>, K> h_;
    std::array<std::vector<std::int64_t>, K> current_;
    IndexedSet active_;
    double time_ = 0;
    double next_ = -1;
    double unit_exp_ = -1;
    std::uint64_t events_ = 0;
    std::uint64_t null_rings_ = 0;
};

using ZeroRangeEngine = ZeroRangeEngineT<1>;
using CoupledZeroRangeEngine = ZeroRangeEngineT<2>;

namespace detail {

// Distance travelled by the influence of a wall: in the graphical
// construction it advances by at most `jump` sites at each ring of the
// frontier edge clocks (total rate `rate`).
inline std::int64_t light_cone(std::uint64_t seed, std::uint64_t replica, std::uint64_t side, double rate,
                               double micro_time, int jump) {
    if (rate * micro_time <= 0) return 0;
    Philox g(seed, stream_id(StreamDomain::Auxiliary, replica, side));
    std::poisson_distribution<std::int64_t> pois(rate * micro_time);
    return jump * pois(g);
}

template <class Engine, class Record>
void drive(Engine& engine, const SimParams& params, double factor, ObservationSet& out, Record record) {
    auto run_to = [&](double micro) {
        while (true) {
            if (params.max_events && engine.events() >= params.max_events) {
                out.budget_exhausted = true;
                return false;
            }
            if (!engine.advance(micro)) return true;
        }
    };
    for (double t : params.observation_times) {
        if (!run_to(t * factor)) break;
        record(t);
    }
    if (!out.budget_exhausted) run_to(params.horizon * factor);
    out.total_events = engine.events();
}

inline void check_walls(ObservationSet& out, const LatticeGeometry& g, const SimParams& params, double factor,
                        int jump) {
    if (g.is_torus()) return;
    const double rate = params.p + params.p_prime;
    out.light_cone_left = light_cone(params.seed, params.replica, 0, rate, params.horizon * factor, jump);
    out.light_cone_right = light_cone(params.seed, params.replica, 1, rate, params.horizon * factor, jump);
    out.boundary_reached = out.light_cone_left >= g.padding || out.light_cone_right >= g.padding;
}

} // namespace detail

// Exclusion dynamics; the first empty site at or right of the origin is
// tagged and followed.  A configuration without empty sites is flagged.
inline ObservationSet run_fep(const ExclusionConfig& eta0, const SimParams& params) {
    params.validate();
    FepEngine engine(eta0, params);
    const double factor = params.clock_factor(eta0.size());
    ObservationSet out;
    out.process = "fep";
    out.geometry = eta0.geometry;
    out.replica = params.replica;
    out.degenerate = !engine.has_tag();
    detail::drive(engine, params, factor, out, [&](double t) {
        Observation f;
        f.time = t;
        if (params.record_states) f.state.assign(engine.data(), engine.data() + eta0.size());
        if (params.record_currents) f.current = engine.currents();
        f.tag_site = engine.tag_site();
        f.tag_displacement = engine.tag_displacement();
        f.events = engine.events();
        out.frames.push_back(std::move(f));
    });
    detail::check_walls(out, eta0.geometry, params, factor, 2);
    return out;
}

inline ObservationSet run_fep_with_tagged_hole(const ExclusionConfig& eta0, const SimParams& params) {
    return run_fep(eta0, params);
}

inline ObservationSet run_fzrp(const ZeroRangeConfig& omega0, const SimParams& params) {
    params.validate();
    ZeroRangeEngine engine({&omega0}, params);
    const double factor = params.clock_factor(omega0.size());
    ObservationSet out;
    out.process = "fzrp";
    out.geometry = omega0.geometry;
    out.replica = params.replica;
    detail::drive(engine, params, factor, out, [&](double t) {
        Observation f;
        f.time = t;
        if (params.record_states) f.state = engine.heights();
        if (params.record_currents) f.current = engine.currents();
        f.events = engine.events();
        out.frames.push_back(std::move(f));
    });
    detail::check_walls(out, omega0.geometry, params, factor, 1);
    return out;
}

// Frames carry omega in `state` and zeta in `partner`; `current` is omega's.
inline ObservationSet run_coupled_fzrp(const ZeroRangeConfig& omega0, const ZeroRangeConfig& zeta0,
                                       const SimParams& params) {
    params.validate();
    CoupledZeroRangeEngine engine({&omega0, &zeta0}, params);
    const double factor = params.clock_factor(omega0.size());
    ObservationSet out;
    out.process = "coupled";
    out.geometry = omega0.geometry;
    out.replica = params.replica;
    detail::drive(engine, params, factor, out, [&](double t) {
        Observation f;
        f.time = t;
        if (params.record_states) {
            f.state = engine.heights(0);
            f.partner = engine.heights(1);
        }
        if (params.record_currents) f.current = engine.currents(0);
        f.events = engine.events();
        out.frames.push_back(std::move(f));
    });
    detail::check_walls(out, omega0.geometry, params, factor, 1);
    return out;
}

// Number of strict sign changes of omega - zeta, zeros skipped; counted
// cyclically on the torus.
inline std::int64_t sign_changes(const std::vector<std::int32_t>& a, const std::vector<std::int32_t>& b,
                                 bool cyclic) {
    std::vector<int> signs;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const auto d = std::int64_t(a[i]) - b[i];
        if (d != 0) signs.push_back(d > 0 ? 1 : -1);
    }
    std::int64_t count = 0;
    for (std::size_t i = 1; i < signs.size(); ++i) count += signs[i] != signs[i - 1];
    if (cyclic && signs.size() > 1) count += signs.back() != signs.front();
    return count;
}

} // namespace fzr
