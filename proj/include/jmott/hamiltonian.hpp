#pragma once

#include <optional>
#include <span>
#include <vector>

#include "jmott/eigen_solver.hpp"
#include "jmott/fock.hpp"
#include "jmott/lattice.hpp"

namespace jmott {

/// Which modes the basis covers: both lattices (sites 0..N-1 are A,
/// N..2N-1 are B) or lattice A alone in the chemical-potential frame
/// H_A - mu N_A used by the auxiliary-field order parameter.
enum class Region { pair, lattice_a };

struct BuildOptions {
    Region region = Region::pair;
    std::optional<int> sector;  ///< fixed total particle number; otherwise capped by n_total_max
    bool include_drive = true;
    bool include_aux = false;
    std::size_t max_dim = 200000;
};

struct HamiltonianBundle {
    BasisPtr basis;
    Region region = Region::pair;
    LatticeSpec spec;
    ModelParams params;
    SparseOperator h_static;
    SparseOperator h_drive;
    std::optional<SparseOperator> h_aux;
    bool has_drive = false;

    int a_site(int i) const { return i; }
    int b_site(int i) const { return spec.sites_per_lattice + i; }
    std::vector<int> a_sites() const;
    std::vector<int> b_sites() const;

    /// Hamiltonian whose ground state is prepared: h_static (+ h_aux).
    SparseOperator preparation() const;
    /// Post-quench Hamiltonian: h_static + h_drive (+ h_aux).
    SparseOperator driven() const;
};

HamiltonianBundle build_hamiltonian(const LatticeSpec& spec, const ModelParams& p, const BuildOptions& opts = {});

/// One number-conserving bundle per sector in [lo, hi].
std::vector<HamiltonianBundle> build_sector_family(const LatticeSpec& spec, const ModelParams& p, int lo, int hi,
                                                   BuildOptions opts = {});

struct GroundState {
    double energy = 0.0;
    QuantumState state;
    std::optional<int> sector;
    std::size_t family_index = 0;
    double residual = 0.0;
};

/// Ground state of a single bundle's preparation Hamiltonian.
GroundState ground_state(const HamiltonianBundle& h, const EigenOptions& opts = {});

/// Global minimum over a sector family of E(N) - reference_mu * N. The
/// returned energy is the unshifted eigenvalue. Ties resolve to the smallest N.
GroundState ground_state(std::span<const HamiltonianBundle> family, double reference_mu = 0.0,
                         const EigenOptions& opts = {});

struct ConsistencyReport {
    double hermiticity_static = 0.0;
    double hermiticity_driven = 0.0;
    std::optional<double> number_commutator;  ///< ||[H, N] v|| on a seeded random unit v
    bool commutator_expected_nonzero = false;
    double spectrum_lower = 0.0;  ///< Gershgorin bounds of the preparation Hamiltonian
    double spectrum_upper = 0.0;
    bool spectrum_finite = true;
};

ConsistencyReport consistency_checks(const HamiltonianBundle& h, unsigned seed = 7);

}  // namespace jmott
