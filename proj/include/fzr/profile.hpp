#pragma once

// Macroscopic initial profiles u -> value (rho_ini or alpha_ini).

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fzr {

class Profile {
public:
    enum class Kind { Constant, Steps, PiecewiseLinear, Grid };

    static Profile constant(double c) {
        Profile p;
        p.kind_ = Kind::Constant;
        p.values_ = {c};
        return p;
    }

    // values[0] on (-inf, breaks[0]), values[i] on [breaks[i-1], breaks[i]),
    // values.back() on [breaks.back(), inf).
    static Profile steps(std::vector<double> breaks, std::vector<double> values) {
        if (values.size() != breaks.size() + 1)
            throw std::invalid_argument("steps profile needs one more value than breaks");
        if (!std::is_sorted(breaks.begin(), breaks.end()))
            throw std::invalid_argument("step breaks must be sorted");
        Profile p;
        p.kind_ = Kind::Steps;
        p.knots_ = std::move(breaks);
        p.values_ = std::move(values);
        return p;
    }

    // a on [0, split), b on [split, 1) when evaluated on the torus.
    static Profile step(double a, double b, double split = 0.5) {
        return steps({split}, {a, b});
    }

    // Linear interpolation between knots, constant outside.
    static Profile piecewise_linear(std::vector<double> knots, std::vector<double> values) {
        if (knots.size() != values.size() || knots.empty())
            throw std::invalid_argument("piecewise profile needs matching knots and values");
        for (std::size_t i = 1; i < knots.size(); ++i)
            if (!(knots[i] > knots[i - 1])) throw std::invalid_argument("knots must increase");
        Profile p;
        p.kind_ = Kind::PiecewiseLinear;
        p.knots_ = std::move(knots);
        p.values_ = std::move(values);
        return p;
    }

    // Cell values on [lo + i*dx, lo + (i+1)*dx); constant extension outside.
    static Profile grid(double lo, double dx, std::vector<double> cells) {
        if (cells.empty() || !(dx > 0)) throw std::invalid_argument("grid profile needs cells and dx > 0");
        Profile p;
        p.kind_ = Kind::Grid;
        p.knots_ = {lo, dx};
        p.values_ = std::move(cells);
        return p;
    }

    Kind kind() const { return kind_; }
    const std::vector<double>& values() const { return values_; }
    const std::vector<double>& knots() const { return knots_; }

    double operator()(double u) const {
        switch (kind_) {
        case Kind::Constant: return values_[0];
        case Kind::Steps: {
            const auto it = std::upper_bound(knots_.begin(), knots_.end(), u);
            return values_[std::size_t(it - knots_.begin())];
        }
        case Kind::PiecewiseLinear: {
            if (u <= knots_.front()) return values_.front();
            if (u >= knots_.back()) return values_.back();
            const auto i = std::size_t(std::upper_bound(knots_.begin(), knots_.end(), u) - knots_.begin());
            const double w = (u - knots_[i - 1]) / (knots_[i] - knots_[i - 1]);
            return values_[i - 1] + w * (values_[i] - values_[i - 1]);
        }
        case Kind::Grid: {
            const auto n = std::int64_t(values_.size());
            auto i = std::int64_t(std::floor((u - knots_[0]) / knots_[1]));
            i = std::clamp<std::int64_t>(i, 0, n - 1);
            return values_[std::size_t(i)];
        }
        }
        return 0.0;
    }

    // Exact integral over [a, b].
    double integral(double a, double b) const {
        if (b < a) return -integral(b, a);
        switch (kind_) {
        case Kind::Constant: return values_[0] * (b - a);
        case Kind::Steps: {
            double sum = 0, x = a;
            for (std::size_t i = 0; i <= knots_.size() && x < b; ++i) {
                const double right = i < knots_.size() ? std::min(b, knots_[i]) : b;
                if (right > x) {
                    sum += values_[i] * (right - x);
                    x = right;
                }
            }
            return sum;
        }
        case Kind::PiecewiseLinear: {
            std::vector<double> pts{a};
            for (double k : knots_)
                if (k > a && k < b) pts.push_back(k);
            pts.push_back(b);
            double sum = 0;
            for (std::size_t i = 1; i < pts.size(); ++i)
                sum += 0.5 * ((*this)(pts[i - 1]) + (*this)(pts[i])) * (pts[i] - pts[i - 1]);
            return sum;
        }
        case Kind::Grid: {
            const double lo = knots_[0], dx = knots_[1];
            const auto n = std::int64_t(values_.size());
            auto prim = [&](double x) {
                const double s = (x - lo) / dx;
                if (s <= 0) return values_.front() * (x - lo);
                if (s >= double(n)) {
                    double total = 0;
                    for (double v : values_) total += v * dx;
                    return total + values_.back() * (x - lo - double(n) * dx);
                }
                const auto i = std::int64_t(std::floor(s));
                double total = 0;
                for (std::int64_t j = 0; j < i; ++j) total += values_[std::size_t(j)] * dx;
                return total + values_[std::size_t(i)] * (x - lo - double(i) * dx);
            };
            return prim(b) - prim(a);
        }
        }
        return 0.0;
    }

    double cell_average(double a, double b) const { return integral(a, b) / (b - a); }

    double sup() const { return *std::max_element(values_.begin(), values_.end()); }
    double inf() const { return *std::min_element(values_.begin(), values_.end()); }

    // Parses "constant:0.5", "step:0.8,0.3[,split]", "steps:b1,b2;v0,v1,v2",
    // "piecewise:u0,u1,...;v0,v1,...".
    static Profile parse(const std::string& text) {
        const auto colon = text.find(':');
        const std::string kind = text.substr(0, colon);
        const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
        auto numbers = [](const std::string& s) {
            std::vector<double> out;
            std::stringstream ss(s);
            std::string item;
            while (std::getline(ss, item, ','))
                if (!item.empty()) out.push_back(std::stod(item));
            return out;
        };
        auto halves = [&](const std::string& s) {
            const auto semi = s.find(';');
            if (semi == std::string::npos) throw std::invalid_argument("profile '" + kind + "' needs 'a,b;c,d' form");
            return std::pair{numbers(s.substr(0, semi)), numbers(s.substr(semi + 1))};
        };
        if (kind == "constant") {
            const auto v = numbers(rest);
            if (v.size() != 1) throw std::invalid_argument("constant profile takes one value");
            return constant(v[0]);
        }
        if (kind == "step") {
            const auto v = numbers(rest);
            if (v.size() == 2) return step(v[0], v[1]);
            if (v.size() == 3) return step(v[0], v[1], v[2]);
            throw std::invalid_argument("step profile takes left,right[,split]");
        }
        if (kind == "steps") {
            auto [b, v] = halves(rest);
            return steps(std::move(b), std::move(v));
        }
        if (kind == "piecewise") {
            auto [k, v] = halves(rest);
            return piecewise_linear(std::move(k), std::move(v));
        }
        throw std::invalid_argument("unknown profile kind '" + kind + "'");
    }

private:
    Kind kind_ = Kind::Constant;
    std::vector<double> knots_;
    std::vector<double> values_{0.0};
};

} // namespace fzr
