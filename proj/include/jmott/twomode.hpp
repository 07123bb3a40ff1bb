#pragma once

#include <vector>

#include "jmott/lattice.hpp"
#include "jmott/types.hpp"

namespace jmott::twomode {

/// Uniform-mode reduction of the paired lattices onto one condensate mode each.
struct Params {
    double e_a = 0.0;
    double e_b = 0.0;
    double u_a = 0.0;
    double k = 0.0;  ///< junction coupling between the two modes

    double delta_e(double n_total) const { return e_b - e_a - 0.5 * u_a * n_total; }
    double lambda_cap(double n_total) const { return 0.5 * u_a * n_total; }
};

struct Amplitudes {
    cplx phi_a;
    cplx phi_b;
};

struct PopulationPhase {
    double z = 0.0;      ///< (N_b - N_a) / (N_a + N_b)
    double theta = 0.0;  ///< theta_a - theta_b
    double n_total = 0.0;
};

PopulationPhase to_population_phase(const Amplitudes& s);
/// Gauge choice: theta_b = 0.
Amplitudes to_amplitudes(const PopulationPhase& s);

/// E_a = -2 d kappa, E_b = mu - 2 d kappa, U_a = U/N, K = g / N^(1/d).
Params reduce_params(const LatticeSpec& spec, const ModelParams& p);

/// (2 pi / max(|E_b - E_a|, K)) / 200.
double default_step(const Params& tp);

struct AmplitudeTrajectory {
    std::vector<double> times;
    std::vector<Amplitudes> states;
};

struct PhaseTrajectory {
    std::vector<double> times;
    std::vector<double> z;
    std::vector<double> theta;
    double n_total = 0.0;
    bool pole_reached = false;
    bool clamped = false;
};

/// Classic RK4, stepped in the frame rotating at E_a, on
/// i dphi_a/dt = (E_a + U_a |phi_a|^2) phi_a - K phi_b,
/// i dphi_b/dt = E_b phi_b - K phi_a.
AmplitudeTrajectory integrate_amplitudes(const Params& tp, const Amplitudes& s0, double dt, double t_end);

/// Classic RK4 on dz/dt = -2K sqrt(1-z^2) sin(Theta),
/// dTheta/dt = dE + Lambda z + 2K z cos(Theta)/sqrt(1-z^2). Halts with
/// `pole_reached` when |z| comes within `pole_tolerance` of 1.
PhaseTrajectory integrate_population_phase(const Params& tp, double z0, double theta0, double n_total, double dt,
                                           double t_end, double pole_tolerance = 1e-12);

struct Current {
    std::vector<double> times;
    std::vector<double> instantaneous;  ///< -2K sqrt(N_a(t) N_b(t)) sin Theta(t)
    std::vector<double> frozen;         ///< -2K sqrt(N_a(0) N_b(0)) sin Theta(t)
    double max_difference = 0.0;
};

Current current_from_trajectory(const Params& tp, const AmplitudeTrajectory& traj);
Current current_from_trajectory(const Params& tp, const PhaseTrajectory& traj);

/// E_a N_a + E_b N_b + (U_a/2) N_a^2 - 2K sqrt(N_a N_b) cos Theta.
double energy(const Params& tp, const Amplitudes& s);

/// 2 g N^((d-1)/d) psi_a psi_b.
double meanfield_amplitude(double g, int n_sites, int d, double psi_a, double psi_b);

}  // namespace jmott::twomode
