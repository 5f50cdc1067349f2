#pragma once

// Plain-text result files.
//
// Field file:     "# key value" header lines (geometry, lo, dx, cells, time),
//                 then one cell value per line.
// Snapshot file:  "# key value" header lines, then "site<TAB>value" per site.
// CSV:            comma separated with a header row.
// SVG:            static line plots derived from the numbers above.
//
// Reals are written with 17 significant digits so a file reproduces the
// in-memory value exactly.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

#include "core.hpp"
#include "dynamics.hpp"
#include "field.hpp"

namespace fzr {

inline std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
    return f;
}

inline std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read '" + path.string() + "'");
    return f;
}

// Splits "# key value..." headers from data lines.
inline void read_headed(std::istream& in, std::map<std::string, std::string>& header,
                        std::vector<std::string>& data) {
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream ls(line.substr(1));
            std::string key, value;
            ls >> key;
            std::getline(ls >> std::ws, value);
            if (!key.empty()) header[key] = value;
        } else {
            data.push_back(line);
        }
    }
}

inline const std::string& header_value(const std::map<std::string, std::string>& h, const std::string& key,
                                       const std::string& file) {
    const auto it = h.find(key);
    if (it == h.end()) throw std::runtime_error(file + ": missing header '" + key + "'");
    return it->second;
}

} // namespace detail

inline void write_field(const std::filesystem::path& path, const DensityField& f, double time) {
    auto out = detail::open_out(path);
    out << "# geometry " << to_string(f.geometry) << "\n";
    out << "# lo " << format_real(f.lo) << "\n";
    out << "# dx " << format_real(f.dx) << "\n";
    out << "# cells " << f.size() << "\n";
    out << "# time " << format_real(time) << "\n";
    for (double v : f.cells) out << format_real(v) << "\n";
}

struct FieldFile {
    DensityField field;
    double time = 0;
};

inline FieldFile read_field(const std::filesystem::path& path) {
    auto in = detail::open_in(path);
    std::map<std::string, std::string> h;
    std::vector<std::string> data;
    detail::read_headed(in, h, data);
    const auto file = path.string();
    FieldFile out;
    const auto& geo = detail::header_value(h, "geometry", file);
    if (geo != "torus" && geo != "interval") throw std::runtime_error(file + ": unknown geometry '" + geo + "'");
    out.field.geometry = geo == "torus" ? FieldGeometry::Torus : FieldGeometry::Interval;
    out.field.lo = std::stod(detail::header_value(h, "lo", file));
    out.field.dx = std::stod(detail::header_value(h, "dx", file));
    out.time = std::stod(detail::header_value(h, "time", file));
    const auto n = std::stoull(detail::header_value(h, "cells", file));
    if (data.size() != n) throw std::runtime_error(file + ": cell count does not match the header");
    for (const auto& d : data) out.field.cells.push_back(std::stod(d));
    return out;
}

struct Snapshot {
    std::string process;  // "fep" or "fzrp"
    LatticeGeometry geometry;
    double time = 0;
    std::uint64_t replica = 0;
    std::int64_t tag_site = -1;
    std::int64_t tag_displacement = 0;
    std::vector<std::int32_t> state;
};

inline void write_snapshot(const std::filesystem::path& path, const Snapshot& s) {
    auto out = detail::open_out(path);
    const auto& g = s.geometry;
    out << "# process " << s.process << "\n";
    out << "# geometry " << (g.is_torus() ? "torus" : "line") << "\n";
    out << "# sites " << g.sites() << "\n";
    if (!g.is_torus()) out << "# window " << g.lo << " " << g.hi << " " << g.padding << "\n";
    out << "# time " << format_real(s.time) << "\n";
    out << "# replica " << s.replica << "\n";
    if (s.tag_site >= 0) {
        out << "# tag_site " << g.coordinate(s.tag_site) << "\n";
        out << "# tag_displacement " << s.tag_displacement << "\n";
    }
    for (std::int64_t i = 0; i < g.sites(); ++i) out << g.coordinate(i) << "\t" << s.state[std::size_t(i)] << "\n";
}

inline Snapshot read_snapshot(const std::filesystem::path& path) {
    auto in = detail::open_in(path);
    std::map<std::string, std::string> h;
    std::vector<std::string> data;
    detail::read_headed(in, h, data);
    const auto file = path.string();
    Snapshot s;
    s.process = detail::header_value(h, "process", file);
    const auto geo = detail::header_value(h, "geometry", file);
    const auto sites = std::stoll(detail::header_value(h, "sites", file));
    if (geo == "torus") {
        s.geometry = LatticeGeometry::torus(sites);
    } else if (geo == "line") {
        std::istringstream w(detail::header_value(h, "window", file));
        std::int64_t lo = 0, hi = 0, pad = 0;
        w >> lo >> hi >> pad;
        s.geometry = LatticeGeometry::line(lo, hi, pad);
    } else {
        throw std::runtime_error(file + ": unknown geometry '" + geo + "'");
    }
    if (h.count("time")) s.time = std::stod(h["time"]);
    if (h.count("replica")) s.replica = std::stoull(h["replica"]);
    if (h.count("tag_site")) s.tag_site = s.geometry.index_of(std::stoll(h["tag_site"]));
    if (h.count("tag_displacement")) s.tag_displacement = std::stoll(h["tag_displacement"]);
    if (std::int64_t(data.size()) != s.geometry.sites())
        throw std::runtime_error(file + ": site count does not match the header");
    for (const auto& line : data) {
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw std::runtime_error(file + ": expected site<TAB>value");
        s.state.push_back(std::int32_t(std::stol(line.substr(tab + 1))));
    }
    return s;
}

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns)
        : out_(detail::open_out(path)), columns_(columns.size()) {
        row_strings(columns);
    }

    template <class... T>
    void row(const T&... cells) {
        if (sizeof...(cells) != columns_) throw std::logic_error("CSV row width differs from the header");
        std::vector<std::string> s{cell(cells)...};
        row_strings(s);
    }

    void row_strings(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << quote(cells[i]);
        out_ << "\n";
    }

private:
    static std::string cell(const std::string& s) { return s; }
    static std::string cell(const char* s) { return s; }
    static std::string cell(double v) { return format_real(v); }
    template <class I>
        requires std::is_integral_v<I>
    static std::string cell(I v) { return std::to_string(v); }

    static std::string quote(const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
        return q + "\"";
    }

    std::ofstream out_;
    std::size_t columns_;
};

struct PlotSeries {
    std::string label;
    std::vector<double> x, y;
    std::string color = "#1f77b4";
    bool dashed = false;
};

// Line plot with axes, tick labels and a legend.
inline void write_svg_plot(const std::filesystem::path& path, const std::string& title,
                           const std::vector<PlotSeries>& series, const std::string& xlabel = "u",
                           const std::string& ylabel = "density") {
    const double W = 720, H = 420, L = 70, R = 20, T = 40, B = 50;
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            x0 = std::min(x0, s.x[i]);
            x1 = std::max(x1, s.x[i]);
            y0 = std::min(y0, s.y[i]);
            y1 = std::max(y1, s.y[i]);
        }
    if (!(x1 > x0)) x1 = x0 + 1;
    if (!(y1 > y0)) y1 = y0 + 1;
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;
    auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };
    auto out = detail::open_out(path);
    out << std::setprecision(6);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
    out << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = x0 + (x1 - x0) * k / 4, yv = y0 + (y1 - y0) * k / 4;
        out << "<text x=\"" << px(xv) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">" << xv << "</text>\n";
        out << "<text x=\"" << L - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">" << yv << "</text>\n";
    }
    out << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << xlabel
        << "</text>\n";
    out << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" transform=\"rotate(-90 16 " << (T + H - B) / 2
        << ")\" text-anchor=\"middle\">" << ylabel << "</text>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\""
            << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << " points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) out << px(s.x[i]) << "," << py(s.y[i]) << " ";
        out << "\"/>\n";
        const double ly = T + 16 + 16 * double(k);
        out << "<line x1=\"" << W - R - 150 << "\" y1=\"" << ly << "\" x2=\"" << W - R - 125 << "\" y2=\"" << ly
            << "\" stroke=\"" << s.color << "\"" << (s.dashed ? " stroke-dasharray=\"6 4\"" : "") << "/>\n";
        out << "<text x=\"" << W - R - 120 << "\" y=\"" << ly + 4 << "\">" << s.label << "</text>\n";
    }
    out << "</svg>\n";
}

} // namespace fzr
