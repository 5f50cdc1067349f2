#pragma once

// Exact entropy solution of the Riemann problem
//   d_t a + k d_v G(a) = 0,  a(v,0) = a_l (v < 0), a_r (v > 0),  k = 2p - 1 > 0,
// for the zero-range flux G: flat on [0,1], concave increasing on [1, inf),
// with a convex kink at 1.
//
// a_l < a_r uses the lower convex envelope of G on [a_l, a_r]: a stationary
// contact a_l -> 1 when a_l < 1, then the chord from max(a_l,1) to a_r (shock).
// a_l > a_r uses the upper concave envelope on [a_r, a_l]: G itself on the
// concave part (rarefaction, a = (k/xi)^{1/2}), and for a_r < 1 the tangent
// from (a_r, 0), touching G at c = 1 + sqrt(1 - a_r).

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "field.hpp"
#include "flux.hpp"

namespace fzr {

struct Wave {
    enum class Kind { Contact, Shock, Rarefaction } kind;
    double xi_lo, xi_hi;  // equal for discontinuities
    double left, right;   // states on either side
};

inline std::string to_string(Wave::Kind k) {
    switch (k) {
    case Wave::Kind::Contact: return "contact";
    case Wave::Kind::Shock: return "shock";
    case Wave::Kind::Rarefaction: return "rarefaction";
    }
    return "?";
}

class RiemannSolution {
public:
    RiemannSolution(double al, double ar, double p) : al_(al), ar_(ar), k_(2 * p - 1) {
        if (!(al >= 0 && ar >= 0)) throw std::invalid_argument("Riemann states must be nonnegative");
        if (!(p > 0.5 && p <= 1)) throw std::invalid_argument("asymmetry p must lie in (1/2, 1]");
        build();
    }

    double left() const { return al_; }
    double right() const { return ar_; }
    const std::vector<Wave>& waves() const { return waves_; }

    // Solution at similarity variable xi = v/t (right-continuous at jumps).
    double operator()(double xi) const {
        double a = al_;
        for (const auto& w : waves_) {
            if (xi < w.xi_lo) return a;
            if (w.kind == Wave::Kind::Rarefaction && xi < w.xi_hi) return std::sqrt(k_ / xi);
            a = w.right;
        }
        return a;
    }

    double at(double v, double t) const {
        if (t <= 0) return v < 0 ? al_ : ar_;
        return (*this)(v / t);
    }

    // State seen at v = 0+ for t > 0.
    double state_at_origin() const { return (*this)(0.0); }

    // Exact cell averages on a field's grid at time t, discontinuity at v0.
    DensityField sample(DensityField shape, double t, double v0 = 0) const {
        const int sub = 64;
        for (std::size_t i = 0; i < shape.size(); ++i) {
            double s = 0;
            for (int j = 0; j < sub; ++j)
                s += at(shape.edge(i) + shape.dx * (j + 0.5) / sub - v0, t);
            shape.cells[i] = s / sub;
        }
        return shape;
    }

private:
    double speed(double a, double b) const { return k_ * (flux_G(b) - flux_G(a)) / (b - a); }

    void build() {
        const double al = al_, ar = ar_;
        if (al == ar) return;
        if (al < ar) {
            if (ar <= 1) {
                waves_.push_back({Wave::Kind::Contact, 0, 0, al, ar});
            } else if (al >= 1) {
                const double s = speed(al, ar);
                waves_.push_back({Wave::Kind::Shock, s, s, al, ar});
            } else {
                const double s = speed(1, ar);
                waves_.push_back({Wave::Kind::Contact, 0, 0, al, 1});
                waves_.push_back({Wave::Kind::Shock, s, s, 1, ar});
            }
            return;
        }
        // al > ar
        if (al <= 1) {
            waves_.push_back({Wave::Kind::Contact, 0, 0, al, ar});
        } else if (ar >= 1) {
            waves_.push_back({Wave::Kind::Rarefaction, k_ / (al * al), k_ / (ar * ar), al, ar});
        } else {
            const double c = 1 + std::sqrt(1 - ar);
            if (c >= al) {
                const double s = speed(ar, al);
                waves_.push_back({Wave::Kind::Shock, s, s, al, ar});
            } else {
                const double s = k_ / (c * c);
                waves_.push_back({Wave::Kind::Rarefaction, k_ / (al * al), s, al, c});
                waves_.push_back({Wave::Kind::Shock, s, s, c, ar});
            }
        }
    }

    double al_, ar_, k_;
    std::vector<Wave> waves_;
};

inline RiemannSolution riemann_exact(double alpha_l, double alpha_r, double p) {
    return RiemannSolution(alpha_l, alpha_r, p);
}

} // namespace fzr
