#include "jmott/twomode.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace jmott::twomode {

PopulationPhase to_population_phase(const Amplitudes& s)
{
    const double na = std::norm(s.phi_a);
    const double nb = std::norm(s.phi_b);
    const double n = na + nb;
    if (!(n > 0.0)) throw std::invalid_argument("empty two-mode state");
    return {(nb - na) / n, std::arg(s.phi_a) - std::arg(s.phi_b), n};
}

Amplitudes to_amplitudes(const PopulationPhase& s)
{
    const double na = 0.5 * s.n_total * (1.0 - s.z);
    const double nb = 0.5 * s.n_total * (1.0 + s.z);
    return {std::polar(std::sqrt(std::max(na, 0.0)), s.theta), cplx(std::sqrt(std::max(nb, 0.0)), 0.0)};
}

Params reduce_params(const LatticeSpec& spec, const ModelParams& p)
{
    const double d = spec.dimension;
    const double n = spec.sites_per_lattice;
    return {-2.0 * d * p.kappa, p.mu - 2.0 * d * p.kappa, p.u / n, p.g / std::pow(n, 1.0 / d)};
}

double default_step(const Params& tp)
{
    const double scale = std::max(std::abs(tp.e_b - tp.e_a), tp.k);
    if (!(scale > 0.0)) throw std::invalid_argument("no dynamical scale: |E_b - E_a| and K both vanish");
    return 2.0 * std::numbers::pi / scale / 200.0;
}

namespace {

Amplitudes rhs(const Params& tp, const Amplitudes& s)
{
    const cplx minus_i(0.0, -1.0);
    return {minus_i * ((tp.e_a + tp.u_a * std::norm(s.phi_a)) * s.phi_a - tp.k * s.phi_b),
            minus_i * (tp.e_b * s.phi_b - tp.k * s.phi_a)};
}

Amplitudes axpy(const Amplitudes& s, double h, const Amplitudes& d)
{
    return {s.phi_a + h * d.phi_a, s.phi_b + h * d.phi_b};
}

std::size_t step_count(double dt, double t_end)
{
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (t_end < 0.0) throw std::invalid_argument("t_end must be non-negative");
    return static_cast<std::size_t>(std::llround(std::ceil(t_end / dt - 1e-9)));
}

}  // namespace

AmplitudeTrajectory integrate_amplitudes(const Params& tp, const Amplitudes& s0, double dt, double t_end)
{
    // Steps run in the frame rotating at E_a, so dt only has to resolve
    // E_b - E_a, K and the interaction; the common phase is restored exactly.
    Params rot = tp;
    rot.e_a = 0.0;
    rot.e_b = tp.e_b - tp.e_a;
    const auto steps = step_count(dt, t_end);
    AmplitudeTrajectory out;
    out.times.reserve(steps + 1);
    out.states.reserve(steps + 1);
    out.times.push_back(0.0);
    out.states.push_back(s0);
    Amplitudes s = s0;
    for (std::size_t k = 0; k < steps; ++k) {
        const auto k1 = rhs(rot, s);
        const auto k2 = rhs(rot, axpy(s, 0.5 * dt, k1));
        const auto k3 = rhs(rot, axpy(s, 0.5 * dt, k2));
        const auto k4 = rhs(rot, axpy(s, dt, k3));
        s.phi_a += dt / 6.0 * (k1.phi_a + 2.0 * k2.phi_a + 2.0 * k3.phi_a + k4.phi_a);
        s.phi_b += dt / 6.0 * (k1.phi_b + 2.0 * k2.phi_b + 2.0 * k3.phi_b + k4.phi_b);
        const double t = static_cast<double>(k + 1) * dt;
        const cplx phase = std::polar(1.0, -tp.e_a * t);
        out.times.push_back(t);
        out.states.push_back({phase * s.phi_a, phase * s.phi_b});
    }
    return out;
}

PhaseTrajectory integrate_population_phase(const Params& tp, double z0, double theta0, double n_total, double dt,
                                           double t_end, double pole_tolerance)
{
    if (!(std::abs(z0) < 1.0)) throw std::invalid_argument("|z0| must be < 1");
    const double de = tp.delta_e(n_total);
    const double lam = tp.lambda_cap(n_total);
    const double k = tp.k;
    auto f = [&](double z, double th) {
        const double root = std::sqrt(std::max(1.0 - z * z, 0.0));
        return std::pair{-2.0 * k * root * std::sin(th), de + lam * z + 2.0 * k * z * std::cos(th) / root};
    };

    const auto steps = step_count(dt, t_end);
    PhaseTrajectory out;
    out.n_total = n_total;
    out.times.push_back(0.0);
    out.z.push_back(z0);
    out.theta.push_back(theta0);
    double z = z0, th = theta0;
    for (std::size_t s = 0; s < steps; ++s) {
        auto [a1, b1] = f(z, th);
        auto [a2, b2] = f(z + 0.5 * dt * a1, th + 0.5 * dt * b1);
        auto [a3, b3] = f(z + 0.5 * dt * a2, th + 0.5 * dt * b2);
        auto [a4, b4] = f(z + dt * a3, th + dt * b3);
        z += dt / 6.0 * (a1 + 2 * a2 + 2 * a3 + a4);
        th += dt / 6.0 * (b1 + 2 * b2 + 2 * b3 + b4);
        if (!std::isfinite(z) || !std::isfinite(th) || std::abs(z) >= 1.0 - pole_tolerance) {
            out.pole_reached = true;
            if (std::isfinite(z) && std::abs(z) > 1.0 - pole_tolerance) {
                z = std::copysign(1.0 - pole_tolerance, z);
                out.clamped = true;
            }
            break;
        }
        out.times.push_back(static_cast<double>(s + 1) * dt);
        out.z.push_back(z);
        out.theta.push_back(th);
    }
    return out;
}

namespace {

Current finish(const Params& tp, std::vector<double> times, const std::vector<double>& na,
               const std::vector<double>& nb, const std::vector<double>& theta)
{
    Current c;
    c.times = std::move(times);
    const double frozen_amp = 2.0 * tp.k * std::sqrt(na.front() * nb.front());
    for (std::size_t k = 0; k < c.times.size(); ++k) {
        const double s = std::sin(theta[k]);
        c.instantaneous.push_back(-2.0 * tp.k * std::sqrt(na[k] * nb[k]) * s);
        c.frozen.push_back(-frozen_amp * s);
        c.max_difference = std::max(c.max_difference, std::abs(c.instantaneous.back() - c.frozen.back()));
    }
    return c;
}

}  // namespace

Current current_from_trajectory(const Params& tp, const AmplitudeTrajectory& traj)
{
    std::vector<double> na, nb, th;
    for (const auto& s : traj.states) {
        na.push_back(std::norm(s.phi_a));
        nb.push_back(std::norm(s.phi_b));
        th.push_back(std::arg(s.phi_a) - std::arg(s.phi_b));
    }
    if (traj.states.empty()) return {};
    return finish(tp, traj.times, na, nb, th);
}

Current current_from_trajectory(const Params& tp, const PhaseTrajectory& traj)
{
    std::vector<double> na, nb;
    for (double z : traj.z) {
        na.push_back(0.5 * traj.n_total * (1.0 - z));
        nb.push_back(0.5 * traj.n_total * (1.0 + z));
    }
    if (traj.z.empty()) return {};
    return finish(tp, traj.times, na, nb, traj.theta);
}

double energy(const Params& tp, const Amplitudes& s)
{
    const double na = std::norm(s.phi_a);
    const double nb = std::norm(s.phi_b);
    // -K (phi_a^* phi_b + c.c.) = -2K sqrt(N_a N_b) cos(Theta)
    return tp.e_a * na + tp.e_b * nb + 0.5 * tp.u_a * na * na - 2.0 * tp.k * (std::conj(s.phi_a) * s.phi_b).real();
}

double meanfield_amplitude(double g, int n_sites, int d, double psi_a, double psi_b)
{
    if (psi_a < 0 || psi_b < 0) throw std::invalid_argument("order parameters must be non-negative");
    if (n_sites < 1 || d < 1) throw std::invalid_argument("invalid lattice size");
    return 2.0 * g * std::pow(static_cast<double>(n_sites), static_cast<double>(d - 1) / d) * psi_a * psi_b;
}

}  // namespace jmott::twomode
