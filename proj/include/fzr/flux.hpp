#pragma once

// Flux functions of the Stefan problems and their regularisations.
//
//   H(r)     = (2r-1)/r        for r > 1/2, else 0     (exclusion, diffusive)
//   G(r)     = (r-1)/r         for r > 1,   else 0     (zero-range)
//   frakH(r) = (1-r)(2r-1)/r   for r > 1/2, else 0     (exclusion, hyperbolic)
//
// G(r) = H(r/(1+r)) = (1+r) frakH(r/(1+r)).
//
// Smoothed fluxes are tabulated once on a fine uniform grid from the exact
// convolution (Gauss-Legendre per smooth piece) and read back by linear
// interpolation, which keeps monotonicity and slope bounds exact.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace fzr {

template <class T>
T flux_H(T r) {
    return r > T(0.5) ? (2 * r - 1) / r : T(0);
}

template <class T>
T flux_G(T r) {
    return r > T(1) ? (r - 1) / r : T(0);
}

template <class T>
T flux_frakH(T r) {
    return r > T(0.5) ? (1 - r) * (2 * r - 1) / r : T(0);
}

enum class FluxKind {
    H,
    G,
    FrakH,
    HEps,       // eps + (1-2eps) (phi_{eps/4} * H)
    GEps,       // HEps(r/(1+r)), diffusive zero-range
    FrakHEps,   // phi_eps * frakH
    GEpsHyp,    // (1+r) FrakHEps(r/(1+r)), hyperbolic zero-range
};

inline std::string to_string(FluxKind k) {
    switch (k) {
    case FluxKind::H: return "H";
    case FluxKind::G: return "G";
    case FluxKind::FrakH: return "frakH";
    case FluxKind::HEps: return "H_eps";
    case FluxKind::GEps: return "G_eps";
    case FluxKind::FrakHEps: return "frakH_eps";
    case FluxKind::GEpsHyp: return "G_eps_hyp";
    }
    return "?";
}

namespace detail {

// Gauss-Legendre rule on [-1,1], nodes by Newton iteration on P_n.
template <int N>
struct GaussLegendre {
    std::array<double, N> x{}, w{};
    GaussLegendre() {
        for (int i = 0; i < N; ++i) {
            double z = std::cos(std::numbers::pi * (i + 0.75) / (N + 0.5));
            double dp = 0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1, p1 = z;
                for (int k = 2; k <= N; ++k) {
                    const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = N * (z * p1 - p0) / (z * z - 1);
                const double dz = p1 / dp;
                z -= dz;
                if (std::abs(dz) < 1e-16) break;
            }
            x[std::size_t(i)] = z;
            w[std::size_t(i)] = 2 / ((1 - z * z) * dp * dp);
        }
    }
};

inline const GaussLegendre<16>& gauss16() {
    static const GaussLegendre<16> rule;
    return rule;
}

// Symmetric polynomial bump on [-1,1] with unit mass.
inline double bump(double x) {
    const double s = 1 - x * x;
    return x <= -1 || x >= 1 ? 0.0 : 35.0 / 32.0 * s * s * s;
}

// (f * phi_w)(r) with phi_w(s) = bump(s/w)/w; `kinks` are points where f is
// not smooth, used to split the integral.
inline double mollify(const std::function<double(double)>& f, double r, double w, const std::vector<double>& kinks) {
    std::vector<double> cuts{-w, w};
    for (double k : kinks) {
        const double s = r - k;
        if (s > -w && s < w) cuts.push_back(s);
    }
    std::sort(cuts.begin(), cuts.end());
    const auto& gl = gauss16();
    double total = 0;
    for (std::size_t i = 1; i < cuts.size(); ++i) {
        const double a = cuts[i - 1], b = cuts[i];
        if (b <= a) continue;
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (std::size_t j = 0; j < gl.x.size(); ++j) {
            const double s = mid + half * gl.x[j];
            total += gl.w[j] * half * f(r - s) * bump(s / w) / w;
        }
    }
    return total;
}

// Values on a uniform grid of [lo, hi], linear interpolation between nodes
// and constant extension outside.
struct Table {
    double lo = 0, hi = 1, h = 1;
    std::vector<double> v;

    Table(double a, double b, std::size_t intervals, const std::function<double(double)>& f)
        : lo(a), hi(b), h((b - a) / double(intervals)), v(intervals + 1) {
        for (std::size_t i = 0; i <= intervals; ++i) v[i] = f(a + h * double(i));
    }

    double operator()(double r) const {
        if (r <= lo) return v.front();
        if (r >= hi) return v.back();
        const double s = (r - lo) / h;
        auto i = std::size_t(s);
        if (i >= v.size() - 1) i = v.size() - 2;
        const double w = s - double(i);
        return v[i] + w * (v[i + 1] - v[i]);
    }

    double slope(std::size_t i) const { return (v[i + 1] - v[i]) / h; }
    double node(std::size_t i) const { return lo + h * double(i); }
};

inline constexpr std::size_t kTableIntervals = std::size_t(1) << 16;

} // namespace detail

class Flux {
public:
    static Flux H() { return Flux(FluxKind::H, 0, 4.0); }
    static Flux G() { return Flux(FluxKind::G, 0, 1.0); }
    static Flux frakH() { return Flux(FluxKind::FrakH, 0, 2.0); }

    FluxKind kind() const { return kind_; }
    double eps() const { return eps_; }
    std::string name() const { return to_string(kind_); }

    // Global Lipschitz bound on the flux's natural domain.
    double lipschitz() const { return lip_; }

    // Zero-range fluxes live on [0, inf), exclusion fluxes on [0, 1].
    bool zero_range() const {
        return kind_ == FluxKind::G || kind_ == FluxKind::GEps || kind_ == FluxKind::GEpsHyp;
    }

    // Unchecked evaluation for inner loops.
    double operator()(double r) const {
        switch (kind_) {
        case FluxKind::H: return flux_H(r);
        case FluxKind::G: return flux_G(r);
        case FluxKind::FrakH: return flux_frakH(r);
        case FluxKind::HEps:
        case FluxKind::FrakHEps: return (*table_)(r);
        case FluxKind::GEps: return (*table_)(r / (1 + r));
        case FluxKind::GEpsHyp: return (1 + r) * (*table_)(r / (1 + r));
        }
        return 0;
    }

    // Largest slope magnitude on [lo, hi] (chord scan; exact bound for the
    // piecewise-linear tables, a fine scan otherwise).
    double lipschitz_on(double lo, double hi) const {
        if (kind_ == FluxKind::H || kind_ == FluxKind::G || kind_ == FluxKind::FrakH || kind_ == FluxKind::HEps ||
            kind_ == FluxKind::FrakHEps)
            return lip_;
        const int n = 200000;
        double best = 0, prev = (*this)(lo);
        for (int i = 1; i <= n; ++i) {
            const double r = lo + (hi - lo) * i / n, f = (*this)(r);
            best = std::max(best, std::abs(f - prev) / ((hi - lo) / n));
            prev = f;
        }
        return best * 1.01;
    }

    // Tabulated smoothed fluxes; see FluxKind.
    static Flux smoothed(FluxKind target, double eps) {
        if (!(eps > 0 && eps <= 0.25)) throw std::invalid_argument("smoothing parameter must lie in (0, 1/4]");
        switch (target) {
        case FluxKind::HEps:
        case FluxKind::GEps: {
            const double delta = eps / 4;
            // H continued by 1 beyond r = 1 so the convolution stays below 1.
            auto ext = [](double r) { return r >= 1 ? 1.0 : flux_H(r); };
            auto table = std::make_shared<detail::Table>(0.0, 1.0, detail::kTableIntervals, [&](double r) {
                return eps + (1 - 2 * eps) * detail::mollify(ext, r, delta, {0.5, 1.0});
            });
            double lip = 0;
            for (std::size_t i = 0; i + 1 < table->v.size(); ++i) {
                const double s = table->slope(i);
                if (target == FluxKind::HEps) {
                    lip = std::max(lip, s);
                } else {
                    // d/dr H^eps(r/(1+r)) = (H^eps)'(x) (1-x)^2, x = r/(1+r).
                    const double x = table->node(i);
                    lip = std::max(lip, s * (1 - x) * (1 - x));
                }
            }
            Flux f(target, eps, lip);
            f.table_ = std::move(table);
            return f;
        }
        case FluxKind::FrakHEps:
        case FluxKind::GEpsHyp: {
            auto table = std::make_shared<detail::Table>(0.0, 1.0, detail::kTableIntervals, [&](double r) {
                return detail::mollify([](double s) { return flux_frakH(s); }, r, eps, {0.5});
            });
            double lip = 0;
            for (std::size_t i = 0; i + 1 < table->v.size(); ++i) lip = std::max(lip, std::abs(table->slope(i)));
            Flux f(target, eps, lip);
            f.table_ = std::move(table);
            if (target == FluxKind::GEpsHyp) f.lip_ = f.lipschitz_on(0, 50);
            return f;
        }
        default: throw std::invalid_argument("not a smoothed flux kind");
        }
    }

private:
    Flux(FluxKind k, double eps, double lip) : kind_(k), eps_(eps), lip_(lip) {}

    FluxKind kind_;
    double eps_;
    double lip_;
    std::shared_ptr<const detail::Table> table_;
};

// Checked evaluation: zero-range fluxes reject negative arguments.
inline double flux_eval(const Flux& f, double r) {
    if (!std::isfinite(r)) throw std::invalid_argument("flux argument must be finite");
    if (f.zero_range() && r < 0) throw std::invalid_argument("zero-range flux needs r >= 0");
    return f(r);
}

// Report of the numerical verification of a smoothed diffusive flux.
struct SmoothedFluxCheck {
    bool ok = true;
    double min_value = 0, max_value = 0;
    double min_slope = 0, max_slope = 0;
    double sup_distance = 0;  // sup |H^eps - H|
    std::string failure;
};

inline SmoothedFluxCheck verify_smoothed_H(const Flux& f, std::size_t points = 10000) {
    SmoothedFluxCheck c;
    const double eps = f.eps();
    c.min_value = c.min_slope = 1e300;
    c.max_value = c.max_slope = -1e300;
    double prev = f(0);
    for (std::size_t i = 0; i <= points; ++i) {
        const double r = double(i) / double(points);
        const double v = f(r);
        c.min_value = std::min(c.min_value, v);
        c.max_value = std::max(c.max_value, v);
        c.sup_distance = std::max(c.sup_distance, std::abs(v - flux_H(r)));
        if (i > 0) {
            const double s = (v - prev) * double(points);
            c.min_slope = std::min(c.min_slope, s);
            c.max_slope = std::max(c.max_slope, s);
        }
        prev = v;
    }
    const double tol = 1e-12;
    if (c.min_value < eps - tol || c.max_value > 1 + tol) c.failure = "value outside [eps, 1]";
    else if (c.min_slope < -tol || c.max_slope > 4 + tol) c.failure = "slope outside [0, 4]";
    else if (c.sup_distance > 3 * eps + tol) c.failure = "sup distance above 3 eps";
    c.ok = c.failure.empty();
    return c;
}

// Smoothed flux for the diffusive equations.  `base` is H or G; the result
// is H^eps or G^eps(r) = H^eps(r/(1+r)).  The construction is verified and a
// failure throws std::logic_error.
inline Flux build_smoothed_flux(FluxKind base, double eps) {
    if (base != FluxKind::H && base != FluxKind::G) throw std::invalid_argument("diffusive smoothing needs H or G");
    const Flux h = Flux::smoothed(FluxKind::HEps, eps);
    const auto check = verify_smoothed_H(h);
    if (!check.ok) throw std::logic_error("smoothed flux verification failed: " + check.failure);
    return base == FluxKind::H ? h : Flux::smoothed(FluxKind::GEps, eps);
}

// Smoothed flux for the hyperbolic equations: frakH^eps = phi_eps * frakH,
// or G^eps(r) = (1+r) frakH^eps(r/(1+r)) when `base` is G.
inline Flux build_hyperbolic_smoothed_flux(FluxKind base, double eps) {
    if (base == FluxKind::FrakH) return Flux::smoothed(FluxKind::FrakHEps, eps);
    if (base == FluxKind::G) return Flux::smoothed(FluxKind::GEpsHyp, eps);
    throw std::invalid_argument("hyperbolic smoothing needs frakH or G");
}

inline Flux flux_from_name(const std::string& name, double eps = 0, bool hyperbolic = false) {
    if (eps > 0) {
        if (name == "H") return build_smoothed_flux(FluxKind::H, eps);
        if (name == "G") return hyperbolic ? build_hyperbolic_smoothed_flux(FluxKind::G, eps)
                                           : build_smoothed_flux(FluxKind::G, eps);
        if (name == "frakH") return build_hyperbolic_smoothed_flux(FluxKind::FrakH, eps);
    } else {
        if (name == "H") return Flux::H();
        if (name == "G") return Flux::G();
        if (name == "frakH") return Flux::frakH();
    }
    throw std::invalid_argument("unknown flux '" + name + "' (expected H, G or frakH)");
}

// Engquist-Osher splitting f = f+ + f- with f+ nondecreasing, f- nonincreasing.
class EngquistOsher {
public:
    // `lo`, `hi` bound the values the scheme will see (maximum principle).
    EngquistOsher(const Flux& f, double lo, double hi) : f_(f) {
        switch (f.kind()) {
        case FluxKind::H:
        case FluxKind::G:
        case FluxKind::HEps:
        case FluxKind::GEps: mode_ = Mode::Increasing; break;
        case FluxKind::FrakH: mode_ = Mode::FrakH; break;
        default: {
            mode_ = Mode::Table;
            lo_ = lo;
            const std::size_t n = detail::kTableIntervals;
            h_ = (hi - lo) / double(n);
            if (!(h_ > 0)) h_ = 1e-9;
            plus_.resize(n + 1);
            minus_.resize(n + 1);
            double prev = f(lo);
            plus_[0] = prev;
            minus_[0] = 0;
            for (std::size_t i = 1; i <= n; ++i) {
                const double v = f(lo + h_ * double(i));
                const double d = v - prev;
                plus_[i] = plus_[i - 1] + std::max(d, 0.0);
                minus_[i] = minus_[i - 1] + std::min(d, 0.0);
                prev = v;
            }
        }
        }
    }

    double plus(double r) const {
        switch (mode_) {
        case Mode::Increasing: return f_(r);
        case Mode::FrakH: return flux_frakH(std::min(r, kPeak));
        case Mode::Table: return interp(plus_, r);
        }
        return 0;
    }

    double minus(double r) const {
        switch (mode_) {
        case Mode::Increasing: return 0;
        case Mode::FrakH: return flux_frakH(std::max(r, kPeak)) - flux_frakH(kPeak);
        case Mode::Table: return interp(minus_, r);
        }
        return 0;
    }

    // Numerical flux between left state a and right state b.
    double operator()(double a, double b) const { return plus(a) + minus(b); }

private:
    enum class Mode { Increasing, FrakH, Table };
    static constexpr double kPeak = 0.70710678118654752440;  // argmax of frakH

    double interp(const std::vector<double>& t, double r) const {
        double s = (r - lo_) / h_;
        if (s <= 0) return t.front();
        if (s >= double(t.size() - 1)) return t.back();
        const auto i = std::size_t(s);
        const double w = s - double(i);
        return t[i] + w * (t[i + 1] - t[i]);
    }

    Flux f_;
    Mode mode_ = Mode::Increasing;
    double lo_ = 0, h_ = 1;
    std::vector<double> plus_, minus_;
};

} // namespace fzr
