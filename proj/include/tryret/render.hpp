#pragma once

#include <cstdio>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "tryret/sweep.hpp"

// CSV and standalone-SVG output.  All floating-point values are serialized
// with 12 significant digits and a '.' decimal separator.

namespace tryret {

struct UnsupportedFormatError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

enum class RenderFormat { Csv, Svg };

inline RenderFormat parse_format(std::string_view name) {
    if (name == "csv") return RenderFormat::Csv;
    if (name == "svg") return RenderFormat::Svg;
    throw UnsupportedFormatError("unsupported output format: " +
                                 std::string(name));
}

inline std::string fmt12(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

// ---------------------------------------------------------------------------
// CSV

inline std::string to_csv(const RegionMap& m) {
    std::string out;
    out += m.axis_x.name + "," + m.axis_y.name +
           ",regime,optimal_p1,optimal_profit\n";
    for (const RegionCell& c : m.cells) {
        out += fmt12(c.x);
        out += ',';
        out += fmt12(c.y);
        out += ',';
        out += to_string(c.regime);
        out += ',';
        out += fmt12(c.optimal_p1);
        out += ',';
        out += fmt12(c.optimal_profit);
        out += '\n';
    }
    return out;
}

inline std::string to_csv(const ProfitCurve& c) {
    std::string out = "p1,profit,regime\n";
    for (const auto& s : c.samples) {
        out += fmt12(s.p1);
        out += ',';
        out += fmt12(s.profit);
        out += ',';
        out += to_string(s.regime);
        out += '\n';
    }
    return out;
}

struct ParsedRegionRow {
    double x, y;
    std::string regime;
    double optimal_p1, optimal_profit;
};

// Minimal reader for the RegionMap schema above; used to round-trip output.
inline std::vector<ParsedRegionRow> parse_region_map_csv(
    std::string_view text) {
    std::vector<ParsedRegionRow> rows;
    std::size_t pos = 0;
    bool header = true;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        const std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        std::vector<std::string> fields;
        std::size_t fpos = 0;
        while (true) {
            std::size_t comma = line.find(',', fpos);
            if (comma == std::string_view::npos) {
                fields.emplace_back(line.substr(fpos));
                break;
            }
            fields.emplace_back(line.substr(fpos, comma - fpos));
            fpos = comma + 1;
        }
        if (fields.size() != 5)
            throw std::runtime_error("malformed region-map CSV row");
        rows.push_back({std::stod(fields[0]), std::stod(fields[1]), fields[2],
                        std::stod(fields[3]), std::stod(fields[4])});
    }
    return rows;
}

// ---------------------------------------------------------------------------
// SVG

namespace detail {

inline const char* regime_color(MapRegime r) {
    switch (r) {
        case MapRegime::Pi1: return "#4c72b0";
        case MapRegime::Pi3: return "#dd8452";
        case MapRegime::Pi4C: return "#55a868";
        case MapRegime::Pi4I: return "#c44e52";
        case MapRegime::Pi2bar: return "#8172b3";
    }
    return "#000000";
}

inline const char* regime_color(Regime r) {
    switch (r) {
        case Regime::Pi1: return "#4c72b0";
        case Regime::Pi3: return "#dd8452";
        case Regime::Pi4: return "#55a868";
        case Regime::Pi2bar: return "#8172b3";
    }
    return "#000000";
}

inline void svg_open(std::string& s, int w, int h) {
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         std::to_string(w) + "\" height=\"" + std::to_string(h) +
         "\" viewBox=\"0 0 " + std::to_string(w) + " " + std::to_string(h) +
         "\">\n";
}

inline void svg_text(std::string& s, double x, double y,
                     const std::string& text, int size = 12,
                     const char* anchor = "start") {
    s += "<text x=\"" + fmt12(x) + "\" y=\"" + fmt12(y) +
         "\" font-family=\"sans-serif\" font-size=\"" + std::to_string(size) +
         "\" text-anchor=\"" + anchor + "\">" + text + "</text>\n";
}

}  // namespace detail

inline std::string to_svg(const RegionMap& m) {
    constexpr int margin = 70, plot = 600, legend_w = 110;
    const int w = margin * 2 + plot + legend_w, h = margin * 2 + plot;
    std::string s;
    detail::svg_open(s, w, h);

    const double cw = static_cast<double>(plot) / m.axis_x.steps;
    const double ch = static_cast<double>(plot) / m.axis_y.steps;
    for (int ix = 0; ix < m.axis_x.steps; ++ix) {
        for (int iy = 0; iy < m.axis_y.steps; ++iy) {
            const RegionCell& c = m.at(ix, iy);
            const double px = margin + ix * cw;
            const double py = margin + plot - (iy + 1) * ch;  // y grows upward
            s += "<rect x=\"" + fmt12(px) + "\" y=\"" + fmt12(py) +
                 "\" width=\"" + fmt12(cw) + "\" height=\"" + fmt12(ch) +
                 "\" fill=\"" + detail::regime_color(c.regime) + "\"/>\n";
        }
    }
    s += "<rect x=\"" + std::to_string(margin) + "\" y=\"" +
         std::to_string(margin) + "\" width=\"" + std::to_string(plot) +
         "\" height=\"" + std::to_string(plot) +
         "\" fill=\"none\" stroke=\"#333\"/>\n";

    detail::svg_text(s, margin + plot / 2.0, h - margin / 3.0, m.axis_x.name,
                     14, "middle");
    detail::svg_text(s, margin, h - margin + 16, fmt12(m.axis_x.lo), 11,
                     "middle");
    detail::svg_text(s, margin + plot, h - margin + 16, fmt12(m.axis_x.hi),
                     11, "middle");
    detail::svg_text(s, margin / 3.0, margin + plot / 2.0, m.axis_y.name, 14,
                     "middle");
    detail::svg_text(s, margin - 8, margin + plot, fmt12(m.axis_y.lo), 11,
                     "end");
    detail::svg_text(s, margin - 8, margin + 10, fmt12(m.axis_y.hi), 11,
                     "end");

    std::string title;
    for (const auto& [name, value] : m.fixed)
        title += (title.empty() ? "" : "  ") + name + "=" + fmt12(value);
    detail::svg_text(s, margin, margin / 2.0, title, 13);

    const MapRegime all[] = {MapRegime::Pi1, MapRegime::Pi3, MapRegime::Pi4C,
                             MapRegime::Pi4I, MapRegime::Pi2bar};
    double ly = margin;
    for (MapRegime r : all) {
        const double lx = margin + plot + 20;
        s += "<rect x=\"" + fmt12(lx) + "\" y=\"" + fmt12(ly) +
             "\" width=\"14\" height=\"14\" fill=\"" +
             detail::regime_color(r) + "\"/>\n";
        detail::svg_text(s, lx + 20, ly + 12, to_string(r));
        ly += 22;
    }
    s += "</svg>\n";
    return s;
}

inline std::string to_svg(const ProfitCurve& c) {
    constexpr int margin = 70, pw = 720, ph = 420;
    const int w = margin * 2 + pw, h = margin * 2 + ph;
    std::string s;
    detail::svg_open(s, w, h);

    double plo = c.samples.front().p1, phi = c.samples.back().p1;
    double ylo = c.samples.front().profit, yhi = ylo;
    for (const auto& sm : c.samples) {
        ylo = std::min(ylo, sm.profit);
        yhi = std::max(yhi, sm.profit);
    }
    if (yhi == ylo) yhi = ylo + 1.0;
    const double ypad = 0.08 * (yhi - ylo);
    ylo -= ypad;
    yhi += ypad;
    auto X = [&](double p) { return margin + (p - plo) / (phi - plo) * pw; };
    auto Y = [&](double v) {
        return margin + ph - (v - ylo) / (yhi - ylo) * ph;
    };

    // Landmark guides first, so the curve draws on top.
    for (const auto& [name, lm] : c.landmarks) {
        if (lm < plo || lm > phi) continue;
        s += "<line x1=\"" + fmt12(X(lm)) + "\" y1=\"" +
             std::to_string(margin) + "\" x2=\"" + fmt12(X(lm)) + "\" y2=\"" +
             std::to_string(margin + ph) +
             "\" stroke=\"#999\" stroke-dasharray=\"4 3\"/>\n";
        detail::svg_text(s, X(lm) + 3, margin + 12, name, 10);
    }

    // One polyline per maximal same-regime run, annotated with its label.
    std::size_t i = 0;
    while (i < c.samples.size()) {
        std::size_t j = i;
        while (j + 1 < c.samples.size() &&
               c.samples[j + 1].regime == c.samples[i].regime)
            ++j;
        std::string pts;
        for (std::size_t k = i; k <= j; ++k)
            pts += fmt12(X(c.samples[k].p1)) + "," +
                   fmt12(Y(c.samples[k].profit)) + " ";
        s += "<polyline fill=\"none\" stroke=\"" +
             std::string(detail::regime_color(c.samples[i].regime)) +
             "\" stroke-width=\"2\" points=\"" + pts + "\"/>\n";
        const std::size_t mid = (i + j) / 2;
        detail::svg_text(s, X(c.samples[mid].p1),
                         Y(c.samples[mid].profit) - 8,
                         to_string(c.samples[i].regime), 12, "middle");
        i = j + 1;
    }

    s += "<rect x=\"" + std::to_string(margin) + "\" y=\"" +
         std::to_string(margin) + "\" width=\"" + std::to_string(pw) +
         "\" height=\"" + std::to_string(ph) +
         "\" fill=\"none\" stroke=\"#333\"/>\n";
    detail::svg_text(s, margin + pw / 2.0, h - margin / 3.0, "p1", 14,
                     "middle");
    detail::svg_text(s, margin, h - margin + 16, fmt12(plo), 11, "middle");
    detail::svg_text(s, margin + pw, h - margin + 16, fmt12(phi), 11,
                     "middle");
    detail::svg_text(s, margin / 3.0, margin + ph / 2.0, "profit", 14,
                     "middle");
    detail::svg_text(s, margin - 8, margin + ph, fmt12(ylo), 11, "end");
    detail::svg_text(s, margin - 8, margin + 10, fmt12(yhi), 11, "end");
    s += "</svg>\n";
    return s;
}

inline std::string render(const RegionMap& m, RenderFormat f) {
    return f == RenderFormat::Csv ? to_csv(m) : to_svg(m);
}

inline std::string render(const ProfitCurve& c, RenderFormat f) {
    return f == RenderFormat::Csv ? to_csv(c) : to_svg(c);
}

}  // namespace tryret
