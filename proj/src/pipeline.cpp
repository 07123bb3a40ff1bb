#include "jmott/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <thread>

#ifndef JMOTT_VERSION
#define JMOTT_VERSION "0.0.0"
#endif

namespace jmott {

std::string software_version() { return JMOTT_VERSION; }

DynamicsSettings DynamicsSettings::from(const SweepConfig& cfg)
{
    DynamicsSettings d;
    d.tau_delta_mu = cfg.dynamics.tau_delta_mu;
    d.samples_per_period = cfg.dynamics.samples_per_period;
    d.min_periods = cfg.dynamics.min_periods;
    d.omega_step = cfg.dynamics.omega_step;
    d.omega_max = cfg.dynamics.omega_max;
    return d;
}

std::vector<double> DynamicsSettings::omegas(double delta_mu) const
{
    const double step = omega_step.value_or(std::numbers::pi / tau(delta_mu));
    const double top = omega_max.value_or(2.0 * delta_mu);
    return centred_omega_grid(delta_mu, step, top);
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& task)
{
    std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads) : std::thread::hardware_concurrency();
    workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(count, 1));
    if (workers == 1) {
        for (std::size_t k = 0; k < count; ++k) task(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t k = next++; k < count; k = next++) task(k);
        });
    }
}

namespace {

double site_mean(const HamiltonianBundle& h, const QuantumState& s, const std::vector<int>& sites)
{
    double sum = 0.0;
    for (int i : sites) sum += expectation(number(*h.basis, i), s).real();
    return sum / static_cast<double>(sites.size());
}

std::string join_flags(const std::vector<std::string>& flags)
{
    std::string out;
    for (const auto& f : flags) {
        if (!out.empty()) out += ';';
        out += f;
    }
    return out;
}

struct Measured {
    GroundState gs;
    std::size_t family_index = 0;
    CurrentTrace trace;
    std::vector<QuantumState> states;
};

Measured measure(const LatticeSpec& spec, const ModelParams& p, const DynamicsSettings& dyn,
                 const EigenOptions& eig, const std::vector<HamiltonianBundle>& family)
{
    Measured m{ground_state(family, p.mu, eig), 0, {}, {}};
    m.family_index = m.gs.family_index;
    const auto& h = family[m.family_index];

    const double tau = dyn.tau(p.delta_mu);
    const double period = 2.0 * std::numbers::pi / p.delta_mu;
    const double t_end = std::max(tau, dyn.min_periods * period);
    const auto grid = TimeGrid::covering(t_end, p.delta_mu, dyn.samples_per_period);

    SpectralEvolution evo(h, m.gs.state);
    m.states = evo.on(grid);
    m.trace = josephson_current(m.states, grid, h);
    m.trace.meta.delta_mu = p.delta_mu;
    m.trace.meta.g = p.g;
    m.trace.meta.mu_over_u = p.u != 0.0 ? p.mu / p.u : 0.0;
    m.trace.meta.kappa_over_u = p.u != 0.0 ? p.kappa / p.u : 0.0;
    m.trace.meta.basis_dim = h.basis->dim();
    (void)spec;
    return m;
}

}  // namespace

PointSimulation simulate_point(const LatticeSpec& spec, const ModelParams& p, const DynamicsSettings& dyn,
                               const EigenOptions& eig)
{
    PointSimulation sim;
    auto& r = sim.result;
    r.u = p.u;
    r.kappa = p.kappa;
    r.mu = p.mu;
    r.mu_over_u = p.u != 0.0 ? p.mu / p.u : 0.0;
    r.kappa_over_u = p.u != 0.0 ? p.kappa / p.u : 0.0;

    const auto family = build_sector_family(spec, p, 0, p.n_total_max);
    auto m = measure(spec, p, dyn, eig, family);
    const auto& h = family[m.family_index];

    r.ground_energy = m.gs.energy;
    r.sector = m.gs.sector.value_or(-1);
    r.basis_dim = h.basis->dim();
    r.j_peak = peak_current(m.trace);

    const double tau = dyn.tau(p.delta_mu);
    const auto omegas = dyn.omegas(p.delta_mu);
    sim.spectrum = sine_transform(m.trace, omegas, tau);
    const auto peak = dominant_frequency(sim.spectrum);
    r.omega_star = peak.omega;
    r.no_peak = peak.no_peak;
    if (peak.no_peak) r.flags.emplace_back("no peak");

    r.density_a = site_mean(h, m.gs.state, h.a_sites());
    r.density_b = site_mean(h, m.gs.state, h.b_sites());
    r.psi_b = std::sqrt(std::max(r.density_b, 0.0));

    const int n = spec.sites_per_lattice;
    const double d = spec.dimension;
    const double contact_scale = std::pow(static_cast<double>(n), (d - 1.0) / d);
    if (p.g == 0.0) {
        r.psi_a = 0.0;
        r.flags.emplace_back("zero coupling");
    } else if (r.psi_b < 1e-8) {
        r.psi_a = 0.0;
        r.flags.emplace_back("psi_b below 1e-8");
    } else {
        r.psi_a = r.j_peak / (2.0 * p.g * contact_scale * r.psi_b);
    }

    const auto n_tot = total_number(*h.basis);
    const double n0 = expectation(n_tot, m.states.front()).real();
    for (const auto& s : m.states) {
        r.norm_drift = std::max(r.norm_drift, std::abs(s.norm() - 1.0));
        r.number_drift = std::max(r.number_drift, std::abs(expectation(n_tot, s).real() - n0));
    }
    const auto cont = continuity_check(m.states, m.trace, h);
    r.continuity_residual = cont.residual;
    r.continuity_sign = cont.sign;

    sim.trace = std::move(m.trace);
    r.ok = true;
    return sim;
}

namespace {

std::optional<double> truncation_change(const LatticeSpec& spec, ModelParams p, const DynamicsSettings& dyn,
                                        double j_peak)
{
    p.n_max += 1;
    const auto family = build_sector_family(spec, p, 0, p.n_total_max);
    auto m = measure(spec, p, dyn, {}, family);
    const double j = peak_current(m.trace);
    if (j_peak == 0.0) return j == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::abs(j - j_peak) / j_peak;
}

PointResult failed_point(double mu_over_u, double kappa_over_u, const std::string& why)
{
    PointResult r;
    r.mu_over_u = mu_over_u;
    r.kappa_over_u = kappa_over_u;
    r.ok = false;
    r.failure = why;
    r.psi_a = std::numeric_limits<double>::quiet_NaN();
    return r;
}

LatticeSpec lattice_of(const SweepConfig& cfg)
{
    return build_pair_lattice(cfg.lattice.dimension, cfg.lattice.sites, cfg.lattice.boundary);
}

}  // namespace

ModelParams map_point_params(const SweepConfig& cfg, double mu_over_u, double kappa_over_u)
{
    ModelParams p;
    p.g = cfg.params.g;
    p.delta_mu = cfg.params.delta_mu;
    p.lambda = 0.0;
    p.n_max = cfg.params.n_max;
    p.n_total_max = cfg.pair_total_cap();
    if (cfg.grid.scale == EnergyScale::kappa) {
        p.kappa = cfg.params.kappa;
        p.u = p.kappa / kappa_over_u;
    } else {
        p.u = cfg.params.u;
        p.kappa = kappa_over_u * p.u;
    }
    p.mu = mu_over_u * p.u;
    return p;
}

ProtocolOutput run_protocol(const SweepConfig& cfg)
{
    const auto start = std::chrono::steady_clock::now();
    const auto spec = lattice_of(cfg);
    const auto dyn = DynamicsSettings::from(cfg);

    // Each task is one (row, col) cell with its physical parameters.
    struct Task {
        std::size_t row;
        std::size_t col;
        ModelParams p;
    };
    std::vector<Task> tasks;
    std::vector<double> mu_axis, kappa_axis;
    if (cfg.grid.mode == GridMode::map) {
        mu_axis = cfg.grid.mu_over_u.values();
        kappa_axis = cfg.grid.kappa_over_u.values();
        for (std::size_t i = 0; i < mu_axis.size(); ++i)
            for (std::size_t j = 0; j < kappa_axis.size(); ++j)
                tasks.push_back({i, j, map_point_params(cfg, mu_axis[i], kappa_axis[j])});
    } else {
        // U slice at fixed mu/U; columns ordered by increasing kappa/U.
        auto us = cfg.grid.u.values();
        std::sort(us.begin(), us.end(), std::greater<>());
        mu_axis = {cfg.grid.fixed_mu_over_u};
        for (double u : us) {
            ModelParams p = map_point_params(cfg, cfg.grid.fixed_mu_over_u, 1.0);
            p.kappa = cfg.params.kappa;
            p.u = u;
            p.mu = cfg.grid.fixed_mu_over_u * u;
            tasks.push_back({0, kappa_axis.size(), p});
            kappa_axis.push_back(p.kappa / u);
        }
    }

    std::vector<PointResult> results(tasks.size());
    parallel_for(tasks.size(), cfg.run.threads, [&](std::size_t k) {
        const auto& t = tasks[k];
        try {
            auto sim = simulate_point(spec, t.p, dyn);
            if (cfg.run.convergence_check) {
                sim.result.truncation_change = truncation_change(spec, t.p, dyn, sim.result.j_peak);
                if (*sim.result.truncation_change > 0.1) sim.result.flags.emplace_back("truncation sensitive");
            }
            results[k] = std::move(sim.result);
        } catch (const std::exception& e) {
            results[k] = failed_point(t.p.mu / t.p.u, t.p.kappa / t.p.u, e.what());
        }
        results[k].row = t.row;
        results[k].col = t.col;
        results[k].u = t.p.u;
        results[k].kappa = t.p.kappa;
        results[k].mu = t.p.mu;
    });

    ProtocolOutput out;
    out.grid = PhaseDiagramGrid::make(mu_axis, kappa_axis, MapSource::josephson, spec.coordination());
    out.grid.params_used = {{"g", cfg.params.g},
                            {"delta_mu", cfg.params.delta_mu},
                            {"n_max", static_cast<double>(cfg.params.n_max)},
                            {"n_total_max", static_cast<double>(cfg.pair_total_cap())},
                            {"sites", static_cast<double>(cfg.lattice.sites)},
                            {"dimension", static_cast<double>(cfg.lattice.dimension)}};
    for (const auto& r : results) {
        if (r.ok) {
            out.grid.at(r.row, r.col) = r.psi_a;
            out.grid.flag(r.row, r.col) = join_flags(r.flags);
        } else {
            out.grid.at(r.row, r.col) = std::numeric_limits<double>::quiet_NaN();
            out.grid.flag(r.row, r.col) = "failed: " + r.failure;
            ++out.record.failures;
        }
    }
    out.record.config = to_json(cfg);
    out.record.points = std::move(results);
    out.record.version = software_version();
    out.record.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

PhaseDiagramGrid run_auxfield_map(const SweepConfig& cfg)
{
    const auto spec = lattice_of(cfg);
    const auto mu_axis = cfg.grid.mu_over_u.values();
    const auto kappa_axis = cfg.grid.kappa_over_u.values();
    auto grid = PhaseDiagramGrid::make(mu_axis, kappa_axis, MapSource::auxfield, spec.coordination());
    grid.params_used = {{"lambda", cfg.params.lambda},
                        {"n_max", static_cast<double>(cfg.params.n_max)},
                        {"n_total_max", static_cast<double>(cfg.lattice_a_total_cap())},
                        {"sites", static_cast<double>(cfg.lattice.sites)},
                        {"dimension", static_cast<double>(cfg.lattice.dimension)}};

    const std::size_t cols = kappa_axis.size();
    parallel_for(mu_axis.size() * cols, cfg.run.threads, [&](std::size_t k) {
        const std::size_t i = k / cols, j = k % cols;
        auto p = map_point_params(cfg, mu_axis[i], kappa_axis[j]);
        p.lambda = cfg.params.lambda;
        p.n_total_max = cfg.lattice_a_total_cap();
        try {
            grid.at(i, j) = auxfield_order_parameter(spec, p).psi;
        } catch (const std::exception& e) {
            grid.at(i, j) = std::numeric_limits<double>::quiet_NaN();
            grid.flag(i, j) = std::string("failed: ") + e.what();
        }
    });
    return grid;
}

PhaseDiagramGrid run_gutzwiller_map(const SweepConfig& cfg)
{
    return gutzwiller::phase_diagram(cfg.grid.mu_over_u.values(), cfg.grid.kappa_over_u.values(),
                                     2 * cfg.lattice.dimension, cfg.params.gutzwiller_n_max);
}

}  // namespace jmott
