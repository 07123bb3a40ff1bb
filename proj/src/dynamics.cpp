#include "jmott/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace jmott {

TimeGrid::TimeGrid(double dt, std::size_t count) : dt_(dt), count_(count)
{
    if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
}

TimeGrid TimeGrid::covering(double t_end, double omega, int per_period)
{
    if (!(omega > 0.0) || per_period < 1) throw std::invalid_argument("invalid sampling request");
    const double dt = 2.0 * std::numbers::pi / omega / per_period;
    const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
    return TimeGrid(dt, steps + 1);
}

std::vector<double> TimeGrid::values() const
{
    std::vector<double> out(count_);
    for (std::size_t k = 0; k < count_; ++k) out[k] = (*this)[k];
    return out;
}

SpectralEvolution::SpectralEvolution(const HamiltonianBundle& h, const QuantumState& psi0, std::size_t max_dim)
    : basis_(h.basis)
{
    if (!(psi0.basis() == *h.basis) || psi0.dim() != h.basis->dim())
        throw DimensionError("initial state is not in the Hamiltonian's basis");
    spectrum_ = full_spectrum(h.driven(), max_dim);
    coefficients_ = spectrum_.vectors.adjoint() * psi0.amplitudes();
}

QuantumState SpectralEvolution::at(double t) const
{
    CVector phased = coefficients_;
    for (Eigen::Index k = 0; k < phased.size(); ++k) phased(k) *= std::exp(cplx(0.0, -spectrum_.values(k) * t));
    return QuantumState(basis_, spectrum_.vectors * phased, Normalization::verify);
}

std::vector<QuantumState> SpectralEvolution::on(const TimeGrid& grid) const
{
    std::vector<QuantumState> out;
    out.reserve(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) out.push_back(at(grid[k]));
    return out;
}

std::vector<QuantumState> evolve(const HamiltonianBundle& h, const QuantumState& psi0, const TimeGrid& times)
{
    return SpectralEvolution(h, psi0).on(times);
}

SparseOperator current_operator(const HamiltonianBundle& h)
{
    if (h.region != Region::pair) throw std::invalid_argument("current needs the paired-lattice basis");
    const auto& basis = *h.basis;
    SparseOperator x(basis.dim(), basis.dim());
    for (int c : h.spec.contact_sites) x = x + hopping(basis, h.a_site(c), h.b_site(c));
    return cplx(0.0, -h.params.g) * (x - adjoint(x));
}

CurrentTrace josephson_current(std::span<const QuantumState> states, const TimeGrid& grid, const HamiltonianBundle& h)
{
    if (states.size() != grid.size()) throw DimensionError("state count does not match the time grid");
    const auto op = current_operator(h);
    CurrentTrace trace;
    trace.grid = grid;
    trace.values.reserve(states.size());
    for (const auto& s : states) {
        const cplx j = expectation(op, s);
        trace.max_imaginary = std::max(trace.max_imaginary, std::abs(j.imag()));
        trace.values.push_back(j.real());
    }
    if (trace.max_imaginary > 1e-10)
        throw NumericalError("current has imaginary residue " + std::to_string(trace.max_imaginary));
    trace.meta.g = h.params.g;
    trace.meta.delta_mu = h.params.delta_mu;
    trace.meta.basis_dim = h.basis->dim();
    if (h.params.u > 0) {
        trace.meta.mu_over_u = h.params.mu / h.params.u;
        trace.meta.kappa_over_u = h.params.kappa / h.params.u;
    }
    return trace;
}

ContinuityResult continuity_check(std::span<const QuantumState> states, const CurrentTrace& trace,
                                  const HamiltonianBundle& h)
{
    if (states.size() != trace.values.size()) throw DimensionError("states and trace differ in length");
    const auto nb_op = total_number(*h.basis, h.b_sites());
    std::vector<double> nb(states.size());
    for (std::size_t k = 0; k < states.size(); ++k) nb[k] = expectation(nb_op, states[k]).real();

    double plus = 0.0, minus = 0.0;
    const double dt = trace.grid.dt();
    for (std::size_t k = 1; k + 1 < states.size(); ++k) {
        const double deriv = (nb[k + 1] - nb[k - 1]) / (2.0 * dt);
        plus = std::max(plus, std::abs(deriv - trace.values[k]));
        minus = std::max(minus, std::abs(deriv + trace.values[k]));
    }
    return plus <= minus ? ContinuityResult{plus, +1} : ContinuityResult{minus, -1};
}

double peak_current(const CurrentTrace& trace)
{
    double peak = 0.0;
    for (double j : trace.values) peak = std::max(peak, std::abs(j));
    return peak;
}

SpectrumResult sine_transform(const CurrentTrace& trace, std::span<const double> omegas, double tau)
{
    if (trace.values.empty()) throw std::invalid_argument("empty trace");
    const double dt = trace.grid.dt();
    if (tau > trace.grid.end() + 1e-12 * std::max(1.0, tau)) throw std::invalid_argument("tau exceeds the trace");
    if (tau < 0) throw std::invalid_argument("tau must be non-negative");

    // Whole panels up to the last sample <= tau, then a partial panel with
    // linear interpolation of J.
    const auto whole = static_cast<std::size_t>(std::floor(tau / dt + 1e-9));
    const std::size_t last = std::min(whole, trace.values.size() - 1);
    const double remainder = std::max(0.0, tau - trace.grid[last]);
    const double norm = std::sqrt(2.0 / std::numbers::pi);

    SpectrumResult out;
    out.tau = tau;
    out.omegas.assign(omegas.begin(), omegas.end());
    out.values.reserve(omegas.size());
    for (double w : omegas) {
        double sum = 0.0;
        for (std::size_t k = 0; k < last; ++k) {
            const double f0 = trace.values[k] * std::sin(w * trace.grid[k]);
            const double f1 = trace.values[k + 1] * std::sin(w * trace.grid[k + 1]);
            sum += 0.5 * dt * (f0 + f1);
        }
        if (remainder > 0.0 && last + 1 < trace.values.size()) {
            const double frac = remainder / dt;
            const double j_end = trace.values[last] + frac * (trace.values[last + 1] - trace.values[last]);
            const double f0 = trace.values[last] * std::sin(w * trace.grid[last]);
            const double f1 = j_end * std::sin(w * tau);
            sum += 0.5 * remainder * (f0 + f1);
        }
        out.values.push_back(norm * sum);
    }
    return out;
}

DominantFrequency dominant_frequency(const SpectrumResult& spectrum)
{
    if (spectrum.omegas.empty()) throw std::invalid_argument("empty spectrum");
    std::size_t best = 0;
    for (std::size_t k = 1; k < spectrum.values.size(); ++k)
        if (std::abs(spectrum.values[k]) > std::abs(spectrum.values[best])) best = k;
    // Strict '>' keeps the first (smallest) omega on ties.
    const bool flat = std::abs(spectrum.values[best]) == 0.0;
    return {spectrum.omegas[best], flat};
}

std::vector<double> centred_omega_grid(double centre, double step, double max_omega)
{
    if (!(step > 0.0) || !(centre > 0.0)) throw std::invalid_argument("invalid omega grid");
    const auto below = static_cast<long>(std::ceil(centre / step)) - 1;
    std::vector<double> out;
    for (long k = -below;; ++k) {
        const double w = centre + static_cast<double>(k) * step;
        if (w > max_omega + 1e-12 * max_omega) break;
        if (w > 0.0) out.push_back(w);
    }
    return out;
}

}  // namespace jmott
