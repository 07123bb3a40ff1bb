// Runs the acceptance criteria end to end and prints one PASS/FAIL line each.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "jmott/compare.hpp"
#include "jmott/pipeline.hpp"
#include "jmott/twomode.hpp"

using namespace jmott;

namespace {

constexpr double pi = std::numbers::pi;

struct Verdict {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

SweepConfig slice_config()
{
    return load_config(std::nullopt, {"lattice.sites=2", "params.kappa=1", "params.g=0.1", "params.delta_mu=100",
                                      "grid.mode=slice", "grid.fixed_mu_over_u=0.5",
                                      "grid.u={min: 0.1, max: 20, steps: 40}"});
}

struct Drifts {
    double norm = 0.0;
    double number = 0.0;
    std::size_t evolutions = 0;

    void add(const PointResult& r)
    {
        if (!r.ok) return;
        norm = std::max(norm, r.norm_drift);
        number = std::max(number, r.number_drift);
        ++evolutions;
    }
};

Verdict josephson_frequency(const ProtocolOutput& slice, double step, double wall)
{
    double worst = 0.0;
    std::size_t checked = 0, failed = 0;
    for (const auto& r : slice.record.points) {
        if (!r.ok) {
            ++failed;
            continue;
        }
        if (r.j_peak <= 1e-3) continue;
        ++checked;
        worst = std::max(worst, std::abs(r.omega_star - 100.0));
    }
    const bool ok = failed == 0 && checked > 0 && worst <= step * (1 + 1e-12) && wall < 60.0;
    return {ok, fmt::format("{} points with J_m > 1e-3, max |omega* - 100| = {:.4g} (step {:.4g}), {} failed, "
                            "slice {:.1f} s",
                            checked, worst, step, failed, wall)};
}

Verdict current_collapse(const SweepConfig& cfg, Drifts& drifts)
{
    const auto spec = build_pair_lattice(1, 2, Boundary::open);
    const auto dyn = DynamicsSettings::from(cfg);
    auto at = [&](double u) {
        ModelParams p = map_point_params(cfg, 0.5, 1.0);
        p.u = u;
        p.mu = 0.5 * u;
        const auto r = simulate_point(spec, p, dyn).result;
        drifts.add(r);
        return r.j_peak;
    };
    const double strong = at(20.0), weak = at(0.5);
    const double ratio = strong / weak;
    return {ratio < 0.2, fmt::format("J_m(U=20) / J_m(U=0.5) = {:.4g} / {:.4g} = {:.3f}", strong, weak, ratio)};
}

Verdict lobe_boundary()
{
    double worst = 0.0;
    for (double mu : {0.2, 0.41, 0.5, 0.8}) {
        const double exact = gutzwiller::perturbative_boundary(1, mu).zkappa_over_u;
        worst = std::max(worst, std::abs(gutzwiller::bisect_boundary(mu) - exact));
    }
    // Tip: largest boundary over a fine mu scan around the expected maximum.
    double tip = 0.0, tip_mu = 0.0;
    for (int k = 0; k <= 100; ++k) {
        const double mu = 0.3 + 0.25 * k / 100;
        const double zk = gutzwiller::bisect_boundary(mu);
        if (zk > tip) {
            tip = zk;
            tip_mu = mu;
        }
    }
    const double tip_exact = 3 - 2 * std::sqrt(2.0);
    const bool ok = worst < 1e-3 && std::abs(tip - tip_exact) < 1e-3;
    return {ok, fmt::format("max |bisected - 1/chi| = {:.2e}; tip {:.6f} at mu/U = {:.4f} (expected {:.6f})", worst,
                            tip, tip_mu, tip_exact)};
}

Verdict map_consistency(const ProtocolOutput& josephson, const PhaseDiagramGrid& aux, double wall)
{
    const auto cmp = compare_maps(josephson.grid, aux);
    const bool ok = cmp.rank_correlation >= 0.9 && wall < 1800.0;
    return {ok, fmt::format("Spearman {:.4f} over {} points ({} failed), both maps {:.1f} s", cmp.rank_correlation,
                            cmp.pairs, josephson.record.failures, wall)};
}

Verdict two_mode()
{
    using namespace twomode;
    // (i) linear closed form over ten Rabi periods at the default step.
    const Params lin{-2.0, -2.0, 0.0, 0.05};
    const Amplitudes start{cplx(std::sqrt(2.0), 0.0), cplx(0.0, 0.0)};
    const auto lt = integrate_amplitudes(lin, start, default_step(lin), 10 * pi / lin.k);
    double linear = 0.0;
    for (std::size_t k = 0; k < lt.times.size(); ++k) {
        const double t = lt.times[k];
        const cplx phase = std::exp(cplx(0, -lin.e_a * t));
        const cplx a = phase * std::sqrt(2.0) * std::cos(lin.k * t);
        const cplx b = phase * cplx(0, std::sqrt(2.0) * std::sin(lin.k * t));
        linear = std::max({linear, std::abs(lt.states[k].phi_a - a), std::abs(lt.states[k].phi_b - b)});
    }

    // (ii) amplitude and (z, Theta) forms on an interacting run.
    const Params nl{-2.0, -1.0, 0.4, 0.3};
    const double period = 2 * pi / std::max(std::abs(nl.e_b - nl.e_a), nl.k);
    const double dt = period / 2000;
    const auto amp = integrate_amplitudes(nl, to_amplitudes({0.2, 0.3, 2.0}), dt, 10 * period);
    const auto pp = integrate_population_phase(nl, 0.2, 0.3, 2.0, dt, 10 * period);
    double repr = pp.times.size() == amp.times.size() ? 0.0 : INFINITY;
    for (std::size_t k = 0; k < std::min(pp.times.size(), amp.times.size()); ++k) {
        const auto c = to_population_phase(amp.states[k]);
        repr = std::max({repr, std::abs(c.z - pp.z[k]), std::abs(std::remainder(c.theta - pp.theta[k], 2 * pi))});
    }

    // (iii) energy and norm over 100 periods of the quench frequency.
    const Params q{-2.0, 98.0, 0.5, 0.05};
    const auto s0 = to_amplitudes({0.1, 0.0, 2.0});
    const auto qt = integrate_amplitudes(q, s0, default_step(q), 100 * 2 * pi / 100.0);
    const double e0 = energy(q, s0);
    double e_drift = 0.0, n_drift = 0.0;
    for (const auto& s : qt.states) {
        e_drift = std::max(e_drift, std::abs(energy(q, s) - e0) / std::abs(e0));
        n_drift = std::max(n_drift, std::abs(std::norm(s.phi_a) + std::norm(s.phi_b) - 2.0) / 2.0);
    }

    // (iv) mu >> U, kappa envelope 2 g sqrt(N_a N_b) / N^(1/d).
    const auto spec = build_pair_lattice(1, 2, Boundary::periodic);
    ModelParams p;
    p.kappa = 1.0;
    p.u = 1.0;
    p.mu = 100.0;
    p.g = 0.1;
    const auto tp = reduce_params(spec, p);
    const auto et = integrate_amplitudes(tp, to_amplitudes({0.0, 0.0, 2.0}), default_step(tp), 5 * 2 * pi / 100.0);
    double peak = 0.0;
    for (double j : current_from_trajectory(tp, et).instantaneous) peak = std::max(peak, std::abs(j));
    const double envelope = 2 * p.g * std::sqrt(1.0 * 1.0) / 2.0;
    const double env_err = std::abs(peak - envelope) / envelope;

    const bool ok = linear < 1e-6 && repr < 1e-8 && e_drift < 1e-6 && n_drift < 1e-6 && env_err < 0.02;
    return {ok, fmt::format("(i) {:.2e} (ii) {:.2e} (iii) energy {:.2e} norm {:.2e} (iv) envelope off by {:.2f}%",
                            linear, repr, e_drift, n_drift, 100 * env_err)};
}

Verdict conservation(const Drifts& drifts)
{
    // Continuity residual of the N=2 quench at three dt values.
    const auto spec = build_pair_lattice(1, 2, Boundary::open);
    ModelParams p;
    p.kappa = 1.0;
    p.u = 0.5;
    p.mu = 0.25;
    p.g = 0.1;
    p.delta_mu = 100.0;
    p.n_total_max = 8;
    const auto family = build_sector_family(spec, p, 0, 8);
    const auto gs = ground_state(family, p.mu);
    const auto& h = family[gs.family_index];
    const SpectralEvolution evo(h, gs.state);
    std::vector<double> residuals;
    const double base = 2 * pi / 100 / 40;
    for (double dt : {base, base / 2, base / 4}) {
        const TimeGrid grid(dt, static_cast<std::size_t>(std::ceil(0.2 / dt)) + 1);
        const auto states = evo.on(grid);
        const auto trace = josephson_current(states, grid, h);
        residuals.push_back(continuity_check(states, trace, h).residual);
    }
    const double r1 = residuals[0] / residuals[1], r2 = residuals[1] / residuals[2];
    const bool second_order = std::abs(r1 - 4) < 0.4 && std::abs(r2 - 4) < 0.4;
    const bool ok = drifts.norm < 1e-10 && drifts.number < 1e-10 && second_order && drifts.evolutions > 0;
    return {ok, fmt::format("{} evolutions: norm drift {:.2e}, number drift {:.2e}; continuity ratios {:.3f}, {:.3f}",
                            drifts.evolutions, drifts.norm, drifts.number, r1, r2)};
}

Verdict sine_transform_checks()
{
    const double dmu = 100.0, dt = 2 * pi / dmu / 400;
    auto sine = [&](double t_end) {
        CurrentTrace t;
        t.grid = TimeGrid(dt, static_cast<std::size_t>(std::ceil(t_end / dt)) + 2);
        for (std::size_t k = 0; k < t.grid.size(); ++k) t.values.push_back(std::sin(dmu * t.grid[k]));
        return t;
    };
    double worst = 0.0;
    for (double tau_dmu : {20.0, 200.0}) {
        const double tau = tau_dmu / dmu;
        const std::vector<double> w{dmu};
        const double got = sine_transform(sine(tau), w, tau).values[0];
        const double exact = std::sqrt(2 / pi) * (tau / 2 - std::sin(2 * dmu * tau) / (4 * dmu));
        worst = std::max(worst, std::abs(got - exact));
    }

    std::vector<double> w;
    for (int k = 50; k <= 150; ++k) w.push_back(k);
    const auto trace = sine(0.4);
    const auto s1 = sine_transform(trace, w, 0.2);
    const auto s2 = sine_transform(trace, w, 0.4);
    const auto half_width = [](const SpectrumResult& s) {
        const double top = std::abs(s.values[50]);
        int k = 0;
        while (std::abs(s.values[50 + k]) > 0.5 * top) ++k;
        return k;
    };
    const double gain = std::abs(s2.values[50]) / std::abs(s1.values[50]);
    const bool ok = worst < 1e-6 && gain > 1.0 && half_width(s2) < half_width(s1);
    return {ok, fmt::format("max quadrature error {:.2e}; doubling tau: peak x{:.3f}, half-width {} -> {}", worst,
                            gain, half_width(s1), half_width(s2))};
}

// Occupation tuples of `sites` modes with digits 0..n_max, site 0 most significant.
std::vector<std::vector<int>> brute_states(int sites, int n_max, std::optional<int> sector)
{
    std::vector<std::vector<int>> out;
    const int base = n_max + 1;
    const int total = static_cast<int>(std::pow(base, sites));
    for (int k = 0; k < total; ++k) {
        std::vector<int> occ(sites);
        int rest = k, sum = 0;
        for (int s = sites - 1; s >= 0; --s) {
            occ[s] = rest % base;
            rest /= base;
            sum += occ[s];
        }
        if (!sector || sum == *sector) out.push_back(occ);
    }
    return out;
}

// <r| a_to^+ a_from |c> (or a_from alone when to < 0) by direct action.
CMatrix brute_operator(const std::vector<std::vector<int>>& states, int to, int from, int n_max)
{
    const auto n = static_cast<Eigen::Index>(states.size());
    CMatrix m = CMatrix::Zero(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
        auto occ = states[c];
        if (occ[from] == 0) continue;
        const int n_from = occ[from];
        occ[from] -= 1;
        double amp = std::sqrt(static_cast<double>(n_from));
        if (to >= 0) {
            if (occ[to] == n_max) continue;
            amp = std::sqrt(static_cast<double>(n_from * (occ[to] + 1)));
            occ[to] += 1;
        }
        for (Eigen::Index r = 0; r < n; ++r)
            if (states[r] == occ) m(r, c) += amp;
    }
    return m;
}

// Dense pair Hamiltonian acting directly on occupation tuples (sector or
// total cap), independent of the sparse assembly.
RMatrix dense_pair(const LatticeSpec& spec, const ModelParams& p, std::optional<int> sector)
{
    const int n = spec.sites_per_lattice;
    auto states = brute_states(2 * n, p.n_max, sector);
    if (!sector)
        std::erase_if(states, [&](const auto& occ) {
            int sum = 0;
            for (int x : occ) sum += x;
            return sum > p.n_total_max;
        });
    const auto dim = static_cast<Eigen::Index>(states.size());
    RMatrix h = RMatrix::Zero(dim, dim);
    auto hop = [&](Eigen::Index c, int to, int from, double t) {
        auto occ = states[c];
        if (occ[from] == 0 || occ[to] == p.n_max) return;
        const double amp = std::sqrt(static_cast<double>(occ[from] * (occ[to] + 1)));
        occ[from] -= 1;
        occ[to] += 1;
        for (Eigen::Index r = 0; r < dim; ++r)
            if (states[r] == occ) h(r, c) += -t * amp;
    };
    for (Eigen::Index c = 0; c < dim; ++c) {
        for (int i = 0; i < n; ++i) h(c, c) += 0.5 * p.u * states[c][i] * (states[c][i] - 1) + p.mu * states[c][n + i];
        for (auto [i, j] : spec.edges_a) {
            hop(c, i, j, p.kappa);
            hop(c, j, i, p.kappa);
        }
        for (auto [i, j] : spec.edges_b) {
            hop(c, n + i, n + j, p.kappa);
            hop(c, n + j, n + i, p.kappa);
        }
        for (int i : spec.contact_sites) {
            hop(c, i, n + i, p.g);
            hop(c, n + i, i, p.g);
        }
    }
    return h;
}

Verdict oracle_equivalence()
{
    std::size_t operators = 0, mismatches = 0;
    for (int sites = 1; sites <= 2; ++sites)
        for (int n_max = 1; n_max <= 2; ++n_max) {
            const auto basis = FockBasis::enumerate(sites, n_max);
            const auto states = brute_states(sites, n_max, std::nullopt);
            for (int i = 0; i < sites; ++i) {
                const CMatrix a = brute_operator(states, -1, i, n_max);
                CMatrix num = CMatrix::Zero(a.rows(), a.cols());
                for (Eigen::Index k = 0; k < num.rows(); ++k) num(k, k) = states[k][i];
                mismatches += annihilation(basis, i).dense() != a;
                mismatches += creation(basis, i).dense() != CMatrix(a.adjoint());
                mismatches += number(basis, i).dense() != num;
                operators += 3;
                for (int j = 0; j < sites; ++j)
                    if (j != i) {
                        mismatches += hopping(basis, i, j).dense() != brute_operator(states, i, j, n_max);
                        ++operators;
                    }
            }
        }

    // Pair Hamiltonian against a dense matrix built on occupation tuples,
    // per sector and on the capped full basis.
    double worst = 0.0, matrix_gap = 0.0;
    for (int n : {1, 2})
        for (int n_max : {1, 2})
            for (double u : {0.0, 0.7, 5.0}) {
                const auto spec = build_pair_lattice(1, n, Boundary::open);
                ModelParams p;
                p.kappa = 1.0;
                p.u = u;
                p.mu = 0.4;
                p.g = 0.1;
                p.n_max = n_max;
                p.n_total_max = 2 * n * n_max;
                std::vector<std::optional<int>> sectors{std::nullopt};
                for (int s = 0; s <= p.n_total_max; ++s) sectors.emplace_back(s);
                for (const auto& sector : sectors) {
                    BuildOptions bo;
                    bo.sector = sector;
                    const auto h = build_hamiltonian(spec, p, bo);
                    const RMatrix oracle = dense_pair(spec, p, sector);
                    matrix_gap = std::max(matrix_gap, (h.h_static.dense() - oracle.cast<cplx>()).norm());
                    Eigen::SelfAdjointEigenSolver<RMatrix> es(oracle);
                    worst = std::max(worst, std::abs(ground_state(h).energy - es.eigenvalues()[0]));
                }
            }
    const bool ok = mismatches == 0 && matrix_gap < 1e-14 && worst < 1e-10;
    return {ok, fmt::format("{} operators, {} inexact; Hamiltonian matrix gap {:.1e}; max ground-energy gap {:.2e}",
                            operators, mismatches, matrix_gap, worst)};
}

}  // namespace

int main()
{
    std::vector<std::pair<int, Verdict>> verdicts;
    auto report = [&](int id, Verdict v) {
        fmt::print("{} criterion {}: {}\n", v.pass ? "PASS" : "FAIL", id, v.detail);
        std::fflush(stdout);
        verdicts.emplace_back(id, std::move(v));
    };

    Drifts drifts;
    const auto cfg = slice_config();
    auto start = std::chrono::steady_clock::now();
    const auto slice = run_protocol(cfg);
    const double slice_wall = seconds_since(start);
    for (const auto& r : slice.record.points) drifts.add(r);
    const double step = pi / DynamicsSettings::from(cfg).tau(cfg.params.delta_mu);
    report(1, josephson_frequency(slice, step, slice_wall));
    report(2, current_collapse(cfg, drifts));
    report(3, lobe_boundary());

    const auto map_cfg = load_config(std::nullopt);
    start = std::chrono::steady_clock::now();
    const auto josephson = run_protocol(map_cfg);
    const auto aux = run_auxfield_map(map_cfg);
    const double map_wall = seconds_since(start);
    for (const auto& r : josephson.record.points) drifts.add(r);
    report(4, map_consistency(josephson, aux, map_wall));

    report(5, two_mode());
    report(6, conservation(drifts));
    report(7, sine_transform_checks());
    report(8, oracle_equivalence());

    const auto failed = std::count_if(verdicts.begin(), verdicts.end(), [](const auto& v) { return !v.second.pass; });
    fmt::print("{} of {} criteria passed\n", verdicts.size() - failed, verdicts.size());
    return failed == 0 ? 0 : 1;
}
