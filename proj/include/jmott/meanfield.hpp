#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jmott/hamiltonian.hpp"

namespace jmott {

enum class MapSource { gutzwiller, auxfield, josephson };

std::string to_string(MapSource s);
MapSource parse_map_source(const std::string& s);

/// Order parameter over a (mu/U, kappa/U) grid; psi is indexed [mu][kappa].
struct PhaseDiagramGrid {
    std::vector<double> mu_over_u;
    std::vector<double> kappa_over_u;
    int coordination = 2;  ///< z = 2d; zkappa/U = coordination * kappa/U
    std::vector<double> psi;
    std::vector<std::string> flags;  ///< empty string when the point is clean
    MapSource source = MapSource::gutzwiller;
    std::map<std::string, double> params_used;

    std::size_t rows() const { return mu_over_u.size(); }
    std::size_t cols() const { return kappa_over_u.size(); }
    double& at(std::size_t i, std::size_t j) { return psi[i * cols() + j]; }
    double at(std::size_t i, std::size_t j) const { return psi[i * cols() + j]; }
    std::string& flag(std::size_t i, std::size_t j) { return flags[i * cols() + j]; }
    const std::string& flag(std::size_t i, std::size_t j) const { return flags[i * cols() + j]; }

    static PhaseDiagramGrid make(std::vector<double> mu_axis, std::vector<double> kappa_axis, MapSource source,
                                 int coordination);
    /// Axes strictly increasing; psi finite and >= 0 where not flagged missing.
    bool valid() const;
};

namespace gutzwiller {

/// Single-site decoupled Hamiltonian in units of U on {0..n_max}:
/// -(zk/U) psi (a + a^+) + (zk/U) psi^2 + n(n-1)/2 - (mu/U) n.
RMatrix site_hamiltonian(double psi, double mu_over_u, double zkappa_over_u, int n_max);

struct SiteSolution {
    double energy = 0.0;
    double expectation_a = 0.0;
    double density = 0.0;
};

SiteSolution site_ground(double psi, double mu_over_u, double zkappa_over_u, int n_max);

struct SelfConsistent {
    double psi = 0.0;
    double energy = 0.0;
    double residual = 0.0;  ///< |psi - <a>| at the returned psi
    double density = 0.0;
};

/// psi* = argmin over [0, sqrt(n_max)] of the ground energy of h(psi);
/// snapped to 0 below 1e-6 or when its energy gain over psi = 0 is within
/// 1e-12 (relative) rounding noise.
SelfConsistent solve_selfconsistent(double mu_over_u, double zkappa_over_u, int n_max = 10);

struct LobeEdge {
    double zkappa_over_u = 0.0;
    bool at_endpoint = false;
};

/// Second-order boundary of lobe n: 1/chi with
/// chi = (n+1)/(n - mu/U) + n/(mu/U - (n-1)).
LobeEdge perturbative_boundary(int n, double mu_over_u);

/// Smallest zkappa/U with psi* > 0, by bisection on solve_selfconsistent.
double bisect_boundary(double mu_over_u, double upper = 1.0, double tolerance = 1e-6, int n_max = 10);

PhaseDiagramGrid phase_diagram(const std::vector<double>& mu_grid, const std::vector<double>& kappa_grid,
                               int coordination, int n_max = 10);

}  // namespace gutzwiller

struct AuxfieldResult {
    double psi = 0.0;  ///< site-averaged |<a_i>|
    double density = 0.0;
    double energy = 0.0;
    std::size_t basis_dim = 0;
};

/// Ground state of H_A - mu N_A + lambda sum_i (a_i + a_i^+) on lattice A
/// alone (basis capped at p.n_total_max particles).
AuxfieldResult auxfield_order_parameter(const LatticeSpec& spec, const ModelParams& p, const EigenOptions& opts = {});

}  // namespace jmott
