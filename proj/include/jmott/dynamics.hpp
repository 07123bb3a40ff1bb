#pragma once

#include <span>
#include <string>
#include <vector>

#include "jmott/hamiltonian.hpp"

namespace jmott {

/// Uniform grid t_k = k dt, k = 0..count-1.
class TimeGrid {
public:
    TimeGrid() = default;
    TimeGrid(double dt, std::size_t count);
    /// Grid covering [0, t_end] with at least `per_period` samples per 2 pi / omega.
    static TimeGrid covering(double t_end, double omega, int per_period);

    double dt() const { return dt_; }
    std::size_t size() const { return count_; }
    double operator[](std::size_t k) const { return dt_ * static_cast<double>(k); }
    double end() const { return count_ ? (*this)[count_ - 1] : 0.0; }
    std::vector<double> values() const;

private:
    double dt_ = 0.0;
    std::size_t count_ = 0;
};

struct TraceMetadata {
    double mu_over_u = 0.0;
    double kappa_over_u = 0.0;
    double g = 0.0;
    double delta_mu = 0.0;
    std::size_t basis_dim = 0;
    std::string peak_convention = "max|J|";
};

struct CurrentTrace {
    TimeGrid grid;
    std::vector<double> values;
    double max_imaginary = 0.0;
    TraceMetadata meta;
};

struct SpectrumResult {
    std::vector<double> omegas;
    std::vector<double> values;
    double tau = 0.0;
};

/// Spectral propagator of the driven Hamiltonian, reusable across time grids.
class SpectralEvolution {
public:
    SpectralEvolution(const HamiltonianBundle& h, const QuantumState& psi0, std::size_t max_dim = 8000);

    QuantumState at(double t) const;
    std::vector<QuantumState> on(const TimeGrid& grid) const;
    const Spectrum& spectrum() const { return spectrum_; }

private:
    BasisPtr basis_;
    Spectrum spectrum_;
    CVector coefficients_;
};

/// |phi(t)> = exp(-i (h_static + h_drive) t) |psi0> at each grid time.
std::vector<QuantumState> evolve(const HamiltonianBundle& h, const QuantumState& psi0, const TimeGrid& times);

/// -i g sum_{i in C} (a_i^+ b_i - b_i^+ a_i) on the pair basis.
SparseOperator current_operator(const HamiltonianBundle& h);

/// J(t) = -i g sum_C <(a^+ b - b^+ a)>; throws NumericalError when the
/// imaginary residue exceeds 1e-10.
CurrentTrace josephson_current(std::span<const QuantumState> states, const TimeGrid& grid,
                               const HamiltonianBundle& h);

struct ContinuityResult {
    double residual = 0.0;
    int sign = +1;  ///< dN_B/dt = sign * J
};

/// Compares the centred difference of <N_B>(t) to +J and -J at interior samples.
ContinuityResult continuity_check(std::span<const QuantumState> states, const CurrentTrace& trace,
                                  const HamiltonianBundle& h);

/// max_t |J(t)|.
double peak_current(const CurrentTrace& trace);

/// sqrt(2/pi) * trapezoid of J(t) sin(omega t) over [0, tau].
SpectrumResult sine_transform(const CurrentTrace& trace, std::span<const double> omegas, double tau);

struct DominantFrequency {
    double omega = 0.0;
    bool no_peak = false;
};

DominantFrequency dominant_frequency(const SpectrumResult& spectrum);

/// Frequencies centre + k*step lying in (0, max_omega].
std::vector<double> centred_omega_grid(double centre, double step, double max_omega);

}  // namespace jmott
