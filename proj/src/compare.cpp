#include "jmott/compare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>

#include "jmott/types.hpp"

namespace jmott {

namespace {

std::vector<double> average_ranks(const std::vector<double>& v)
{
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

double spearman(const std::vector<double>& a, const std::vector<double>& b)
{
    if (a.size() != b.size()) throw DimensionError("spearman: length mismatch");
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (a.size() < 2) return nan;
    const auto ra = average_ranks(a), rb = average_ranks(b);
    const double n = static_cast<double>(a.size());
    const double mean = (n + 1.0) / 2.0;
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double x = ra[i] - mean, y = rb[i] - mean;
        sab += x * y;
        saa += x * x;
        sbb += y * y;
    }
    if (saa == 0.0 || sbb == 0.0) return nan;
    return sab / std::sqrt(saa * sbb);
}

std::vector<double> default_levels(const PhaseDiagramGrid& grid, int count)
{
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double v : grid.psi) {
        if (!std::isfinite(v)) continue;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    std::vector<double> out;
    if (!(hi > lo) || count < 1) return out;
    for (int k = 1; k <= count; ++k) out.push_back(lo + (hi - lo) * k / (count + 1));
    return out;
}

namespace {

// Edge ids: horizontal edges (i,j)-(i+1,j) are 2*(i*cols+j), vertical edges
// (i,j)-(i,j+1) are 2*(i*cols+j)+1.
struct Segment {
    long from;
    long to;
};

std::vector<Polyline> trace_level(const PhaseDiagramGrid& g, double level)
{
    const std::size_t rows = g.rows(), cols = g.cols();
    auto h_edge = [&](std::size_t i, std::size_t j) { return 2L * static_cast<long>(i * cols + j); };
    auto v_edge = [&](std::size_t i, std::size_t j) { return 2L * static_cast<long>(i * cols + j) + 1; };

    std::map<long, Point2> crossing;
    auto cross = [&](long id) -> Point2 {
        if (auto it = crossing.find(id); it != crossing.end()) return it->second;
        const std::size_t cell = static_cast<std::size_t>(id / 2);
        const std::size_t i = cell / cols, j = cell % cols;
        const bool horizontal = id % 2 == 0;
        const std::size_t i2 = horizontal ? i + 1 : i, j2 = horizontal ? j : j + 1;
        const double a = g.at(i, j), b = g.at(i2, j2);
        const double t = (a == b) ? 0.5 : (level - a) / (b - a);
        Point2 p{g.mu_over_u[i] + t * (g.mu_over_u[i2] - g.mu_over_u[i]),
                 g.kappa_over_u[j] + t * (g.kappa_over_u[j2] - g.kappa_over_u[j])};
        crossing.emplace(id, p);
        return p;
    };

    std::vector<Segment> segs;
    for (std::size_t i = 0; i + 1 < rows; ++i) {
        for (std::size_t j = 0; j + 1 < cols; ++j) {
            const double v00 = g.at(i, j), v10 = g.at(i + 1, j), v11 = g.at(i + 1, j + 1), v01 = g.at(i, j + 1);
            if (!std::isfinite(v00) || !std::isfinite(v10) || !std::isfinite(v11) || !std::isfinite(v01)) continue;
            const int c = (v00 >= level ? 1 : 0) | (v10 >= level ? 2 : 0) | (v11 >= level ? 4 : 0) |
                          (v01 >= level ? 8 : 0);
            // Cell edges: bottom (v00-v10), right (v10-v11), top (v01-v11), left (v00-v01).
            const long bottom = h_edge(i, j), right = v_edge(i + 1, j), top = h_edge(i, j + 1), left = v_edge(i, j);
            const bool centre_high = (v00 + v10 + v11 + v01) / 4.0 >= level;
            switch (c) {
            case 0:
            case 15: break;
            case 1:
            case 14: segs.push_back({left, bottom}); break;
            case 2:
            case 13: segs.push_back({bottom, right}); break;
            case 3:
            case 12: segs.push_back({left, right}); break;
            case 4:
            case 11: segs.push_back({right, top}); break;
            case 6:
            case 9: segs.push_back({bottom, top}); break;
            case 7:
            case 8: segs.push_back({left, top}); break;
            case 5:
                if (centre_high) {
                    segs.push_back({left, top});
                    segs.push_back({bottom, right});
                } else {
                    segs.push_back({left, bottom});
                    segs.push_back({right, top});
                }
                break;
            case 10:
                if (centre_high) {
                    segs.push_back({left, bottom});
                    segs.push_back({right, top});
                } else {
                    segs.push_back({left, top});
                    segs.push_back({bottom, right});
                }
                break;
            }
        }
    }

    // Each edge is shared by at most two segments; chain them.
    std::multimap<long, std::size_t> by_edge;
    for (std::size_t k = 0; k < segs.size(); ++k) {
        by_edge.emplace(segs[k].from, k);
        by_edge.emplace(segs[k].to, k);
    }
    std::vector<bool> used(segs.size(), false);
    auto next_segment = [&](long edge) -> std::optional<std::size_t> {
        auto [lo, hi] = by_edge.equal_range(edge);
        for (auto it = lo; it != hi; ++it)
            if (!used[it->second]) return it->second;
        return std::nullopt;
    };
    auto extend = [&](std::vector<long>& chain) {
        while (auto k = next_segment(chain.back())) {
            used[*k] = true;
            chain.push_back(segs[*k].from == chain.back() ? segs[*k].to : segs[*k].from);
        }
    };

    std::vector<Polyline> lines;
    for (std::size_t s = 0; s < segs.size(); ++s) {
        if (used[s]) continue;
        used[s] = true;
        std::vector<long> chain{segs[s].from, segs[s].to};
        extend(chain);
        std::reverse(chain.begin(), chain.end());
        extend(chain);
        Polyline line;
        for (long e : chain) line.push_back(cross(e));
        lines.push_back(std::move(line));
    }
    return lines;
}

}  // namespace

std::vector<ContourLevel> contours(const PhaseDiagramGrid& grid, const std::vector<double>& levels)
{
    std::vector<ContourLevel> out;
    for (double level : levels) out.push_back({level, trace_level(grid, level)});
    return out;
}

MapComparison compare_maps(const PhaseDiagramGrid& first, const PhaseDiagramGrid& second, int levels)
{
    if (first.mu_over_u != second.mu_over_u || first.kappa_over_u != second.kappa_over_u)
        throw DimensionError("compare_maps: grids differ");
    std::vector<double> a, b;
    for (std::size_t k = 0; k < first.psi.size(); ++k) {
        if (!std::isfinite(first.psi[k]) || !std::isfinite(second.psi[k])) continue;
        a.push_back(first.psi[k]);
        b.push_back(second.psi[k]);
    }
    MapComparison out;
    out.pairs = a.size();
    out.rank_correlation = spearman(a, b);
    out.contours_first = contours(first, default_levels(first, levels));
    out.contours_second = contours(second, default_levels(second, levels));
    return out;
}

}  // namespace jmott
