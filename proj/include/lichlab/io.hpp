#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lichlab/common.hpp"
#include "lichlab/radial.hpp"

namespace lichlab {

using json = nlohmann::json;

// Shortest round-trip double formatting; %.17g is deterministic and lossless.
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// FNV-1a 64-bit over the canonical config text; embedded in every report.
inline std::string fnv1a_hash(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;
};

inline void write_csv(const std::string& path, const CsvTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open for writing: " + path);
    for (std::size_t j = 0; j < table.header.size(); ++j)
        out << table.header[j] << (j + 1 < table.header.size() ? "," : "");
    out << "\n";
    std::size_t rows = table.columns.empty() ? 0 : table.columns[0].size();
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < table.columns.size(); ++j)
            out << format_double(table.columns[j][i]) << (j + 1 < table.columns.size() ? "," : "");
        out << "\n";
    }
}

inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open: " + path);
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw config_error("empty CSV: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) table.header.push_back(cell);
    if (table.header.empty()) throw config_error("CSV without header: " + path);
    table.columns.resize(table.header.size());
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::size_t j = 0;
        while (std::getline(ls, cell, ',')) {
            if (j >= table.columns.size())
                throw config_error(path + ": too many columns at line " + std::to_string(lineno));
            try {
                table.columns[j].push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw config_error(path + ": bad number '" + cell + "' at line " +
                                   std::to_string(lineno));
            }
            ++j;
        }
        if (j != table.columns.size())
            throw config_error(path + ": wrong column count at line " + std::to_string(lineno));
    }
    return table;
}

inline void write_json(const std::string& path, const json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
}

inline json radial_function_json(const RadialFunction& f, int max_samples = 32) {
    json j;
    j["r_min"] = f.front_r();
    j["r_max"] = f.back_r();
    j["min"] = f.min_value();
    j["max"] = f.max_value();
    json samples = json::array();
    int n = static_cast<int>(f.r.size());
    int stride = std::max(1, n / max_samples);
    for (int i = 0; i < n; i += stride) samples.push_back({f.r[i], f.v[i]});
    j["samples"] = samples;
    return j;
}

// Static SVG polyline plot; byte-deterministic for fixed input and flags.
struct PlotOptions {
    bool log_x = false;
    bool log_y = false;
    int width = 720;
    int height = 480;
    std::string title;
};

inline void write_svg_plot(const std::string& path,
                           const std::vector<std::pair<std::string, CsvTable>>& series,
                           const PlotOptions& opt = PlotOptions{}) {
    if (series.empty()) throw config_error("svg plot: no series");
    auto tx = [&](double x) { return opt.log_x ? std::log10(x) : x; };
    auto ty = [&](double y) { return opt.log_y ? std::log10(y) : y; };
    double xmin = infinity, xmax = -infinity, ymin = infinity, ymax = -infinity;
    for (const auto& [name, t] : series) {
        if (t.columns.size() < 2 || t.columns[0].empty())
            throw config_error("svg plot: series '" + name + "' needs two nonempty columns");
        for (std::size_t i = 0; i < t.columns[0].size(); ++i) {
            double x = t.columns[0][i], y = t.columns[1][i];
            if (opt.log_x && !(x > 0)) continue;
            if (opt.log_y && !(y > 0)) continue;
            xmin = std::min(xmin, tx(x));
            xmax = std::max(xmax, tx(x));
            ymin = std::min(ymin, ty(y));
            ymax = std::max(ymax, ty(y));
        }
    }
    if (!(xmax > xmin)) xmax = xmin + 1;
    if (!(ymax > ymin)) ymax = ymin + 1;
    const double mleft = 60, mright = 20, mtop = 30, mbottom = 40;
    const double pw = opt.width - mleft - mright, ph = opt.height - mtop - mbottom;
    auto px = [&](double x) { return mleft + (tx(x) - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return mtop + ph - (ty(y) - ymin) / (ymax - ymin) * ph; };
    static const char* colors[] = {"#2266cc", "#cc4422", "#22aa55", "#8844cc", "#886600"};

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\""
        << opt.height << "\" viewBox=\"0 0 " << opt.width << " " << opt.height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<rect x=\"" << mleft << "\" y=\"" << mtop << "\" width=\"" << pw << "\" height=\""
        << ph << "\" fill=\"none\" stroke=\"#444444\"/>\n";
    if (!opt.title.empty())
        svg << "<text x=\"" << mleft << "\" y=\"20\" font-family=\"monospace\" font-size=\"14\">"
            << opt.title << "</text>\n";
    for (int k = 0; k <= 4; ++k) {
        double xv = xmin + (xmax - xmin) * k / 4, yv = ymin + (ymax - ymin) * k / 4;
        svg << "<text x=\"" << format_double(mleft + pw * k / 4) << "\" y=\""
            << opt.height - 15 << "\" font-family=\"monospace\" font-size=\"10\">"
            << format_double(opt.log_x ? std::pow(10, xv) : xv) << "</text>\n";
        svg << "<text x=\"5\" y=\"" << format_double(mtop + ph - ph * k / 4)
            << "\" font-family=\"monospace\" font-size=\"10\">"
            << format_double(opt.log_y ? std::pow(10, yv) : yv) << "</text>\n";
    }
    int ci = 0;
    for (const auto& [name, t] : series) {
        svg << "<polyline fill=\"none\" stroke=\"" << colors[ci % 5]
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < t.columns[0].size(); ++i) {
            double x = t.columns[0][i], y = t.columns[1][i];
            if (opt.log_x && !(x > 0)) continue;
            if (opt.log_y && !(y > 0)) continue;
            svg << format_double(px(x)) << "," << format_double(py(y)) << " ";
        }
        svg << "\"/>\n";
        svg << "<text x=\"" << mleft + 8 << "\" y=\"" << mtop + 16 + 14 * ci
            << "\" font-family=\"monospace\" font-size=\"11\" fill=\"" << colors[ci % 5] << "\">"
            << name << "</text>\n";
        ++ci;
    }
    svg << "</svg>\n";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open for writing: " + path);
    out << svg.str();
}

}  // namespace lichlab
