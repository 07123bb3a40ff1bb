#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "jmott/config.hpp"
#include "jmott/dynamics.hpp"
#include "jmott/meanfield.hpp"

namespace jmott {

struct DynamicsSettings {
    double tau_delta_mu = 20.0;
    int samples_per_period = 80;
    int min_periods = 10;
    std::optional<double> omega_step;
    std::optional<double> omega_max;

    static DynamicsSettings from(const SweepConfig& cfg);
    double tau(double delta_mu) const { return tau_delta_mu / delta_mu; }
    std::vector<double> omegas(double delta_mu) const;
};

/// Everything measured at one (mu/U, kappa/U) point by the quench protocol.
struct PointResult {
    std::size_t row = 0;
    std::size_t col = 0;
    double mu_over_u = 0.0;
    double kappa_over_u = 0.0;
    double u = 0.0;
    double kappa = 0.0;
    double mu = 0.0;

    bool ok = false;
    std::string failure;
    std::vector<std::string> flags;

    double ground_energy = 0.0;
    int sector = 0;
    std::size_t basis_dim = 0;
    double j_peak = 0.0;
    double omega_star = 0.0;
    bool no_peak = false;
    double psi_b = 0.0;
    double psi_a = 0.0;
    double density_a = 0.0;
    double density_b = 0.0;
    double norm_drift = 0.0;
    double number_drift = 0.0;
    double continuity_residual = 0.0;
    int continuity_sign = +1;
    std::optional<double> truncation_change;  ///< |J_m(n_max+1) - J_m| / J_m
};

struct PointSimulation {
    PointResult result;
    CurrentTrace trace;
    SpectrumResult spectrum;
};

/// One parameter point: ground state of H over all sectors
/// in the -mu N_tot frame, quench by delta_mu on B, J(t), J_m, J(omega),
/// psi_b from the B density and psi_a = J_m / (2 g N^((d-1)/d) psi_b).
PointSimulation simulate_point(const LatticeSpec& spec, const ModelParams& p, const DynamicsSettings& dyn,
                               const EigenOptions& eig = {});

struct RunRecord {
    nlohmann::json config;
    std::vector<PointResult> points;
    std::size_t failures = 0;
    std::string version;
    double wall_seconds = 0.0;
};

struct ProtocolOutput {
    RunRecord record;
    PhaseDiagramGrid grid;
};

/// Physical parameters for grid cell (i, j) of a map sweep.
ModelParams map_point_params(const SweepConfig& cfg, double mu_over_u, double kappa_over_u);

ProtocolOutput run_protocol(const SweepConfig& cfg);
PhaseDiagramGrid run_auxfield_map(const SweepConfig& cfg);
PhaseDiagramGrid run_gutzwiller_map(const SweepConfig& cfg);

/// Runs `task(k)` for k in [0, count) on `threads` workers (0: hardware).
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& task);

std::string software_version();

}  // namespace jmott
