#include "ftn/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ftn/errors.hpp"

namespace ftn {

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

CsvTable parse_csv_text(const std::string& text, const std::string& origin) {
    CsvTable t;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.push_back("");
        if (t.header.empty()) {
            t.header = cells;
        } else {
            if (cells.size() != t.header.size())
                throw ParseError(origin + ":" + std::to_string(lineno) + ": row has " +
                                 std::to_string(cells.size()) + " cells, header has " +
                                 std::to_string(t.header.size()));
            t.rows.push_back(cells);
        }
    }
    if (t.header.empty()) throw ParseError(origin + ": empty CSV");
    return t;
}

CsvTable load_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open CSV " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv_text(buf.str(), path);
}

namespace {

constexpr double kW = 640, kH = 440;
constexpr double kL = 74, kR = 24, kT = 36, kB = 56;
constexpr double kBerFloor = 1e-8;

std::string fmt(double v, const char* spec = "%.2f") {
    char buf[48];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

double parse_cell(const std::string& s, const std::string& origin, int row, int col) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError(origin + ": row " + std::to_string(row + 2) + " column " +
                         std::to_string(col + 1) + ": not a number: '" + s + "'");
    }
}

// 1-2-5 tick step covering roughly five intervals
double nice_step(double range) {
    if (!(range > 0.0)) return 1.0;
    const double raw = range / 5.0;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double frac = raw / mag;
    if (frac <= 1.5) return mag;
    if (frac <= 3.5) return 2.0 * mag;
    if (frac <= 7.5) return 5.0 * mag;
    return 10.0 * mag;
}

struct Axis {
    double lo = 0.0, hi = 1.0;
    bool log = false;

    double place(double v, double px_lo, double px_hi) const {
        const double a = log ? std::log10(lo) : lo;
        const double b = log ? std::log10(hi) : hi;
        const double x = log ? std::log10(v) : v;
        const double t = (x - a) / (b - a);
        return px_lo + t * (px_hi - px_lo);
    }
};

struct PlotData {
    std::vector<double> x, y;
    std::vector<bool> clamped;  // y was below the log floor
    std::string x_label, y_label, title;
    bool log_y = false;
};

std::string render_svg(const PlotData& d) {
    Axis xa, ya;
    xa.lo = *std::min_element(d.x.begin(), d.x.end());
    xa.hi = *std::max_element(d.x.begin(), d.x.end());
    if (xa.lo == xa.hi) { xa.lo -= 1.0; xa.hi += 1.0; }

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(kW, "%.0f") +
           "\" height=\"" + fmt(kH, "%.0f") + "\" viewBox=\"0 0 " + fmt(kW, "%.0f") +
           " " + fmt(kH, "%.0f") + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + fmt(kW / 2) + "\" y=\"22\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"15\">" + d.title + "</text>\n";

    const double px0 = kL, px1 = kW - kR, py0 = kH - kB, py1 = kT;
    std::vector<double> xticks, yticks;

    if (d.log_y) {
        double ymax = kBerFloor;
        for (double v : d.y) ymax = std::max(ymax, v);
        ya.log = true;
        ya.lo = kBerFloor;
        ya.hi = std::pow(10.0, std::ceil(std::log10(ymax * 1.0000001)));
        if (ya.hi <= ya.lo) ya.hi = ya.lo * 10.0;
        for (double t = std::log10(ya.lo); t <= std::log10(ya.hi) + 0.5; t += 1.0)
            yticks.push_back(std::pow(10.0, t));
    } else {
        ya.lo = *std::min_element(d.y.begin(), d.y.end());
        ya.hi = *std::max_element(d.y.begin(), d.y.end());
        if (ya.lo == ya.hi) { ya.lo -= 1.0; ya.hi += 1.0; }
        const double step = nice_step(ya.hi - ya.lo);
        ya.lo = std::floor(ya.lo / step) * step;
        ya.hi = std::ceil(ya.hi / step) * step;
        for (double t = ya.lo; t <= ya.hi + step / 2; t += step) yticks.push_back(t);
    }
    {
        const double step = nice_step(xa.hi - xa.lo);
        const double lo = std::floor(xa.lo / step) * step;
        const double hi = std::ceil(xa.hi / step) * step;
        xa.lo = lo;
        xa.hi = hi;
        for (double t = lo; t <= hi + step / 2; t += step) xticks.push_back(t);
    }

    for (double t : xticks) {
        const double px = xa.place(t, px0, px1);
        svg += "<line x1=\"" + fmt(px) + "\" y1=\"" + fmt(py0) + "\" x2=\"" + fmt(px) +
               "\" y2=\"" + fmt(py1) + "\" stroke=\"#dddddd\"/>\n";
        svg += "<text x=\"" + fmt(px) + "\" y=\"" + fmt(py0 + 18) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               fmt(t, "%.6g") + "</text>\n";
    }
    for (double t : yticks) {
        const double py = ya.place(t, py0, py1);
        svg += "<line x1=\"" + fmt(px0) + "\" y1=\"" + fmt(py) + "\" x2=\"" + fmt(px1) +
               "\" y2=\"" + fmt(py) + "\" stroke=\"#dddddd\"/>\n";
        svg += "<text x=\"" + fmt(px0 - 6) + "\" y=\"" + fmt(py + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
               (d.log_y ? ("1e" + fmt(std::log10(t), "%.0f")) : fmt(t, "%.6g")) +
               "</text>\n";
    }

    svg += "<line x1=\"" + fmt(px0) + "\" y1=\"" + fmt(py0) + "\" x2=\"" + fmt(px1) +
           "\" y2=\"" + fmt(py0) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + fmt(px0) + "\" y1=\"" + fmt(py0) + "\" x2=\"" + fmt(px0) +
           "\" y2=\"" + fmt(py1) + "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + fmt((px0 + px1) / 2) + "\" y=\"" + fmt(kH - 12) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
           d.x_label + "</text>\n";
    svg += "<text x=\"18\" y=\"" + fmt((py0 + py1) / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 18 " + fmt((py0 + py1) / 2) + ")\">" + d.y_label +
           "</text>\n";

    std::string pts;
    for (std::size_t i = 0; i < d.x.size(); ++i) {
        const double vy = d.log_y ? std::max(d.y[i], kBerFloor) : d.y[i];
        pts += fmt(xa.place(d.x[i], px0, px1)) + "," + fmt(ya.place(vy, py0, py1)) + " ";
    }
    if (d.x.size() > 1)
        svg += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"#1f77b4\" "
               "stroke-width=\"1.5\"/>\n";
    for (std::size_t i = 0; i < d.x.size(); ++i) {
        const double vy = d.log_y ? std::max(d.y[i], kBerFloor) : d.y[i];
        const double cx = xa.place(d.x[i], px0, px1);
        const double cy = ya.place(vy, py0, py1);
        const bool open_marker = i < d.clamped.size() && d.clamped[i];
        svg += "<circle cx=\"" + fmt(cx) + "\" cy=\"" + fmt(cy) + "\" r=\"3.5\" " +
               (open_marker ? "fill=\"white\" stroke=\"#1f77b4\" stroke-width=\"1.5\""
                            : "fill=\"#1f77b4\"") +
               "/>\n";
    }
    svg += "</svg>\n";
    return svg;
}

}  // namespace

std::string emit_plot(const std::string& csv_path, const std::string& kind) {
    const CsvTable t = load_csv(csv_path);
    PlotData d;

    if (kind == "ber-alpha" || kind == "ber-rop") {
        const int xc = t.column("value");
        const int yc = t.column("ber_overall");
        if (xc < 0 || yc < 0)
            throw ParseError(csv_path + ": expected value and ber_overall columns");
        d.log_y = true;
        d.y_label = "bit error rate";
        d.x_label = kind == "ber-rop" ? "received optical power (dBm)"
                                      : "compression factor";
        const int pc = t.column("param");
        if (pc >= 0 && !t.rows.empty() && t.rows[0][static_cast<std::size_t>(pc)] == "l_bands")
            d.x_label = "sub-bands";
        d.title = "BER vs " + (t.rows.empty() || pc < 0
                                   ? std::string("parameter")
                                   : t.rows[0][static_cast<std::size_t>(pc)]);
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            d.x.push_back(parse_cell(t.rows[r][static_cast<std::size_t>(xc)], csv_path,
                                     static_cast<int>(r), xc));
            const double y = parse_cell(t.rows[r][static_cast<std::size_t>(yc)], csv_path,
                                        static_cast<int>(r), yc);
            d.y.push_back(y);
            d.clamped.push_back(y < kBerFloor);
        }
    } else if (kind == "psd") {
        const int xc = t.column("freq_hz");
        const int yc = t.column("power_db");
        if (xc < 0 || yc < 0)
            throw ParseError(csv_path + ": expected freq_hz and power_db columns");
        d.log_y = false;
        d.x_label = "frequency (GHz)";
        d.y_label = "power (dB)";
        d.title = "received power spectral density";
        for (std::size_t r = 0; r < t.rows.size(); ++r) {
            d.x.push_back(parse_cell(t.rows[r][static_cast<std::size_t>(xc)], csv_path,
                                     static_cast<int>(r), xc) / 1e9);
            d.y.push_back(parse_cell(t.rows[r][static_cast<std::size_t>(yc)], csv_path,
                                     static_cast<int>(r), yc));
            d.clamped.push_back(false);
        }
    } else {
        throw ConfigError("unknown plot kind '" + kind +
                          "' (ber-alpha, ber-rop, psd)");
    }
    if (d.x.empty()) throw ParseError(csv_path + ": no data rows to plot");

    std::filesystem::path out(csv_path);
    out.replace_extension(".svg");
    std::ofstream f(out);
    if (!f) throw std::runtime_error("cannot write " + out.string());
    f << render_svg(d);
    return out.string();
}

}  // namespace ftn
