#pragma once

#include <filesystem>
#include <string>

#include "jmott/compare.hpp"
#include "jmott/pipeline.hpp"
#include "jmott/twomode.hpp"

namespace jmott {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Writes to a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

std::string trace_csv(const CurrentTrace& trace);                   ///< t,J
std::string spectrum_csv(const SpectrumResult& spectrum);           ///< omega,J_omega
std::string phase_diagram_csv(const PhaseDiagramGrid& grid);        ///< mu_over_u,kappa_over_u,psi,source,flags,zkappa_over_u
std::string points_csv(const RunRecord& record);
std::string twomode_csv(const twomode::Params& tp, const twomode::AmplitudeTrajectory& traj);
std::string contours_csv(const std::vector<ContourLevel>& first, const std::vector<ContourLevel>& second);

PhaseDiagramGrid parse_phase_diagram_csv(const std::string& text);
PhaseDiagramGrid read_phase_diagram(const std::filesystem::path& path);

nlohmann::json run_meta(const RunRecord& record);

}  // namespace jmott
