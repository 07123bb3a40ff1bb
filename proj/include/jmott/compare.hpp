#pragma once

#include <vector>

#include "jmott/meanfield.hpp"

namespace jmott {

struct Point2 {
    double x;
    double y;
};

using Polyline = std::vector<Point2>;

struct ContourLevel {
    double level = 0.0;
    std::vector<Polyline> lines;  ///< in axis coordinates (x = mu/U, y = kappa/U)
};

/// Spearman rank correlation with average ranks for ties. NaN when either
/// side is constant or fewer than two pairs are given.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

/// Marching squares over a grid, segments joined into polylines.
std::vector<ContourLevel> contours(const PhaseDiagramGrid& grid, const std::vector<double>& levels);

/// `count` levels evenly spaced strictly inside (min psi, max psi).
std::vector<double> default_levels(const PhaseDiagramGrid& grid, int count);

struct MapComparison {
    double rank_correlation = 0.0;
    std::size_t pairs = 0;
    std::vector<ContourLevel> contours_first;
    std::vector<ContourLevel> contours_second;
};

/// Throws DimensionError when the axes differ; failed (NaN) points are skipped.
MapComparison compare_maps(const PhaseDiagramGrid& first, const PhaseDiagramGrid& second, int levels = 5);

}  // namespace jmott
