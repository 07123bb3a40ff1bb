#pragma once

#include <string>
#include <vector>

#include "jmott/compare.hpp"
#include "jmott/dynamics.hpp"

namespace jmott {

struct HeatmapStyle {
    int width = 640;
    int height = 520;
    std::string title;
    int contour_levels = 5;
};

/// Heatmap of psi over (mu/U, kappa/U) with optional contour overlays.
std::string heatmap_svg(const PhaseDiagramGrid& grid, const std::vector<ContourLevel>& overlay,
                        const HeatmapStyle& style = {});

/// Line plot of J(t).
std::string trace_svg(const CurrentTrace& trace, const std::string& title = "J(t)");

}  // namespace jmott
