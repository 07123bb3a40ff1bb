#include "jmott/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace jmott {

namespace {

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

// Five-stop approximation of viridis.
std::string colour(double t)
{
    static constexpr std::array<std::array<double, 3>, 5> stops{{
        {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}}};
    t = std::clamp(t, 0.0, 1.0) * (stops.size() - 1);
    const auto k = std::min<std::size_t>(static_cast<std::size_t>(t), stops.size() - 2);
    const double f = t - static_cast<double>(k);
    std::array<int, 3> rgb{};
    for (int c = 0; c < 3; ++c) rgb[c] = static_cast<int>(std::lround(stops[k][c] + f * (stops[k + 1][c] - stops[k][c])));
    return fmt::format("#{:02x}{:02x}{:02x}", rgb[0], rgb[1], rgb[2]);
}

struct Frame {
    double left = 70, right = 90, top = 40, bottom = 60;
    double width, height;
    double x0, x1, y0, y1;

    double px(double x) const { return left + (x - x0) / (x1 - x0) * (width - left - right); }
    double py(double y) const { return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom); }
};

// Cell edges halfway between axis samples, extended by half a step at the ends.
std::vector<double> cell_edges(const std::vector<double>& axis)
{
    std::vector<double> e(axis.size() + 1);
    if (axis.size() == 1) {
        e = {axis[0] - 0.5, axis[0] + 0.5};
        return e;
    }
    for (std::size_t k = 1; k < axis.size(); ++k) e[k] = 0.5 * (axis[k - 1] + axis[k]);
    e.front() = axis.front() - (e[1] - axis.front());
    e.back() = axis.back() + (axis.back() - e[axis.size() - 1]);
    return e;
}

void axes(std::string& out, const Frame& f, const std::string& xlabel, const std::string& ylabel)
{
    out += fmt::format(R"(<rect x="{}" y="{}" width="{}" height="{}" fill="none" stroke="black"/>)"
                       "\n",
                       f.left, f.top, f.width - f.left - f.right, f.height - f.top - f.bottom);
    for (int k = 0; k <= 4; ++k) {
        const double x = f.x0 + (f.x1 - f.x0) * k / 4.0, y = f.y0 + (f.y1 - f.y0) * k / 4.0;
        out += fmt::format(R"(<line x1="{0:.2f}" y1="{1:.2f}" x2="{0:.2f}" y2="{2:.2f}" stroke="black"/>)"
                           R"(<text x="{0:.2f}" y="{3:.2f}" font-size="11" text-anchor="middle">{4:.3g}</text>)"
                           "\n",
                           f.px(x), f.height - f.bottom, f.height - f.bottom + 5, f.height - f.bottom + 18, x);
        out += fmt::format(R"(<line x1="{0:.2f}" y1="{1:.2f}" x2="{2:.2f}" y2="{1:.2f}" stroke="black"/>)"
                           R"(<text x="{3:.2f}" y="{4:.2f}" font-size="11" text-anchor="end">{5:.3g}</text>)"
                           "\n",
                           f.left - 5, f.py(y), f.left, f.left - 8, f.py(y) + 4, y);
    }
    out += fmt::format(R"(<text x="{:.2f}" y="{:.2f}" font-size="13" text-anchor="middle">{}</text>)"
                       "\n",
                       (f.left + f.width - f.right) / 2, f.height - 15, escape(xlabel));
    out += fmt::format(R"svg(<text x="18" y="{0:.2f}" font-size="13" text-anchor="middle" transform="rotate(-90 18 {0:.2f})">{1}</text>)svg"
                       "\n",
                       (f.top + f.height - f.bottom) / 2, escape(ylabel));
}

std::string polyline(const Frame& f, const Polyline& line, const std::string& stroke)
{
    std::string pts;
    for (const auto& p : line) pts += fmt::format("{:.2f},{:.2f} ", f.px(p.x), f.py(p.y));
    return fmt::format(R"(<polyline points="{}" fill="none" stroke="{}" stroke-width="1.5"/>)"
                       "\n",
                       pts, stroke);
}

std::string header(int width, int height, const std::string& title)
{
    std::string out = fmt::format(R"(<?xml version="1.0" encoding="UTF-8"?>)"
                                  "\n"
                                  R"(<svg xmlns="http://www.w3.org/2000/svg" width="{0}" height="{1}" viewBox="0 0 {0} {1}">)"
                                  "\n"
                                  R"(<rect width="{0}" height="{1}" fill="white"/>)"
                                  "\n",
                                  width, height);
    if (!title.empty())
        out += fmt::format(R"(<text x="{}" y="22" font-size="14" text-anchor="middle">{}</text>)"
                           "\n",
                           width / 2, escape(title));
    return out;
}

}  // namespace

std::string heatmap_svg(const PhaseDiagramGrid& grid, const std::vector<ContourLevel>& overlay,
                        const HeatmapStyle& style)
{
    std::string out = header(style.width, style.height, style.title);
    if (grid.rows() == 0 || grid.cols() == 0) return out + "</svg>\n";

    const auto xe = cell_edges(grid.mu_over_u), ye = cell_edges(grid.kappa_over_u);
    Frame f{};
    f.width = style.width;
    f.height = style.height;
    f.x0 = xe.front();
    f.x1 = xe.back();
    f.y0 = ye.front();
    f.y1 = ye.back();

    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double v : grid.psi)
        if (std::isfinite(v)) lo = std::min(lo, v), hi = std::max(hi, v);
    if (!(hi > lo)) hi = lo + 1.0;
    if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;

    out += "<g shape-rendering=\"crispEdges\">\n";
    for (std::size_t i = 0; i < grid.rows(); ++i) {
        for (std::size_t j = 0; j < grid.cols(); ++j) {
            const double v = grid.at(i, j);
            const std::string fill = std::isfinite(v) ? colour((v - lo) / (hi - lo)) : "#bbbbbb";
            const double x = f.px(xe[i]), w = f.px(xe[i + 1]) - x;
            const double y = f.py(ye[j + 1]), h = f.py(ye[j]) - y;
            out += fmt::format(R"(<rect x="{:.2f}" y="{:.2f}" width="{:.2f}" height="{:.2f}" fill="{}"/>)"
                               "\n",
                               x, y, w, h, fill);
        }
    }
    out += "</g>\n";

    const auto own = contours(grid, default_levels(grid, style.contour_levels));
    for (const auto& lv : own)
        for (const auto& line : lv.lines) out += polyline(f, line, "white");
    for (const auto& lv : overlay)
        for (const auto& line : lv.lines) out += polyline(f, line, "#d62728");

    axes(out, f, "mu/U", "kappa/U");

    // Colour bar.
    const double bx = style.width - f.right + 20, by = f.top, bh = style.height - f.top - f.bottom;
    for (int k = 0; k < 50; ++k) {
        out += fmt::format(R"(<rect x="{:.2f}" y="{:.2f}" width="16" height="{:.2f}" fill="{}"/>)"
                           "\n",
                           bx, by + bh * (49 - k) / 50.0, bh / 50.0 + 0.5, colour(k / 49.0));
    }
    out += fmt::format(R"(<text x="{:.2f}" y="{:.2f}" font-size="11">{:.3g}</text>)"
                       "\n",
                       bx + 20, by + 10, hi);
    out += fmt::format(R"(<text x="{:.2f}" y="{:.2f}" font-size="11">{:.3g}</text>)"
                       "\n",
                       bx + 20, by + bh, lo);
    out += fmt::format(R"(<text x="{:.2f}" y="{:.2f}" font-size="12">psi</text>)"
                       "\n",
                       bx, by - 8);
    return out + "</svg>\n";
}

std::string trace_svg(const CurrentTrace& trace, const std::string& title)
{
    const int width = 720, height = 360;
    std::string out = header(width, height, title);
    if (trace.values.empty()) return out + "</svg>\n";

    Frame f{};
    f.right = 30;
    f.width = width;
    f.height = height;
    f.x0 = 0.0;
    f.x1 = trace.grid.end() > 0.0 ? trace.grid.end() : 1.0;
    const auto [mn, mx] = std::minmax_element(trace.values.begin(), trace.values.end());
    const double span = std::max(std::abs(*mn), std::abs(*mx));
    f.y0 = span > 0.0 ? -span : -1.0;
    f.y1 = -f.y0;

    Polyline line;
    for (std::size_t k = 0; k < trace.values.size(); ++k) line.push_back({trace.grid[k], trace.values[k]});
    out += polyline(f, line, "#1f77b4");
    axes(out, f, "t", "J");
    return out + "</svg>\n";
}

}  // namespace jmott
