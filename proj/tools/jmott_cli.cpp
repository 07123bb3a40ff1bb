// Command-line front end: sweeps, single-point traces, maps and comparisons.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "jmott/compare.hpp"
#include "jmott/config.hpp"
#include "jmott/io.hpp"
#include "jmott/pipeline.hpp"
#include "jmott/svg.hpp"
#include "jmott/twomode.hpp"

namespace fs = std::filesystem;
using namespace jmott;

namespace {

enum Exit { ok = 0, config_error = 1, numerical_failure = 2, io_error = 3 };

struct Common {
    std::optional<std::string> config;
    std::vector<std::string> overrides;
    std::optional<std::string> out;
    std::optional<int> threads;

    SweepConfig load() const
    {
        auto ov = overrides;
        if (out) ov.push_back("output.directory=" + *out);
        if (threads) ov.push_back("run.threads=" + std::to_string(*threads));
        auto cfg = load_config(config ? std::optional<fs::path>(*config) : std::nullopt, ov);
        for (const auto& d : validate(cfg))
            if (d.severity == Severity::warning) std::cerr << "warning: " << d.code << ": " << d.message << '\n';
        return cfg;
    }
};

void add_common(CLI::App* app, Common& c)
{
    app->add_option("-c,--config", c.config, "YAML config file");
    app->add_option("-s,--set", c.overrides, "override a config key, e.g. grid.mu_over_u.steps=20");
    app->add_option("-o,--out", c.out, "output directory");
    app->add_option("-j,--threads", c.threads, "worker threads (0: all cores)");
}

fs::path out_dir(const SweepConfig& cfg) { return fs::path(cfg.output.directory); }

void write_grid(const SweepConfig& cfg, const PhaseDiagramGrid& grid, const std::string& stem,
                const std::string& title)
{
    write_atomic(out_dir(cfg) / (stem + ".csv"), phase_diagram_csv(grid));
    if (cfg.output.svg) {
        HeatmapStyle style;
        style.title = title;
        write_atomic(out_dir(cfg) / (stem + ".svg"), heatmap_svg(grid, {}, style));
    }
}

std::size_t count_failed(const PhaseDiagramGrid& g)
{
    std::size_t n = 0;
    for (const auto& f : g.flags) n += f.rfind("failed", 0) == 0;
    return n;
}

int finish_map(const PhaseDiagramGrid& g)
{
    const auto failed = count_failed(g);
    std::cout << fmt::format("{} points, {} failed\n", g.psi.size(), failed);
    return !g.psi.empty() && failed == g.psi.size() ? numerical_failure : ok;
}

struct PointArgs {
    double mu_over_u = 0.5;
    std::optional<double> kappa_over_u;
    std::optional<double> u;
};

void add_point(CLI::App* app, PointArgs& p)
{
    app->add_option("--mu-over-u", p.mu_over_u, "mu/U")->capture_default_str();
    app->add_option("--kappa-over-u", p.kappa_over_u, "kappa/U (grid.scale decides which energy is held)");
    app->add_option("--u", p.u, "U with kappa = params.kappa")->excludes("--kappa-over-u");
}

ModelParams point_params(const SweepConfig& cfg, const PointArgs& a)
{
    if (a.u) {
        auto p = map_point_params(cfg, a.mu_over_u, cfg.params.kappa / *a.u);
        p.kappa = cfg.params.kappa;
        p.u = *a.u;
        p.mu = a.mu_over_u * *a.u;
        return p;
    }
    if (!a.kappa_over_u) throw ConfigError("give --u or --kappa-over-u");
    return map_point_params(cfg, a.mu_over_u, *a.kappa_over_u);
}

LatticeSpec lattice(const SweepConfig& cfg)
{
    return build_pair_lattice(cfg.lattice.dimension, cfg.lattice.sites, cfg.lattice.boundary);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Josephson-current reconstruction of Bose-Hubbard Mott lobes"};
    app.require_subcommand(1);

    Common sweep_c, aux_c, gw_c, tm_c, cur_c, spec_c, val_c;
    auto* sweep = app.add_subcommand("sweep", "quench protocol over the configured grid");
    add_common(sweep, sweep_c);
    auto* aux = app.add_subcommand("auxfield", "auxiliary-field order parameter map on lattice A");
    add_common(aux, aux_c);
    auto* gw = app.add_subcommand("gutzwiller", "Gutzwiller mean-field map");
    add_common(gw, gw_c);

    auto* tm = app.add_subcommand("twomode", "two-mode condensate dynamics");
    add_common(tm, tm_c);
    double tm_mu = 100.0, tm_u = 0.0, tm_n = 2.0, tm_z0 = 0.0, tm_theta0 = 0.0, tm_t_end = 1.0;
    std::optional<double> tm_dt;
    tm->add_option("--mu", tm_mu, "chemical-potential offset of B")->capture_default_str();
    tm->add_option("--u", tm_u, "on-site U")->capture_default_str();
    tm->add_option("--n-total", tm_n, "total particle number N_a + N_b")->capture_default_str();
    tm->add_option("--z0", tm_z0, "initial imbalance")->capture_default_str();
    tm->add_option("--theta0", tm_theta0, "initial phase difference")->capture_default_str();
    tm->add_option("--t-end", tm_t_end, "final time")->capture_default_str();
    tm->add_option("--dt", tm_dt, "step (default: 1/200 of the fastest period)");

    auto* cur = app.add_subcommand("current", "J(t) after the quench at one point");
    add_common(cur, cur_c);
    PointArgs cur_p;
    add_point(cur, cur_p);

    auto* spec = app.add_subcommand("spectrum", "J(t) and its sine transform at one point");
    add_common(spec, spec_c);
    PointArgs spec_p;
    add_point(spec, spec_p);

    auto* cmp = app.add_subcommand("compare", "rank correlation and contour overlay of two maps");
    std::string cmp_a, cmp_b, cmp_out = ".";
    int cmp_levels = 5;
    cmp->add_option("first", cmp_a, "phase_diagram CSV")->required();
    cmp->add_option("second", cmp_b, "phase_diagram CSV")->required();
    cmp->add_option("-o,--out", cmp_out, "output directory")->capture_default_str();
    cmp->add_option("--levels", cmp_levels, "contour levels per map")->capture_default_str();

    auto* cav = app.add_subcommand("map-cavity", "Hubbard U and mu from cavity-QED parameters");
    CavityParams cp;
    cav->add_option("--s", cp.s, "number of atoms S")->required();
    cav->add_option("--g13", cp.g13, "pump coupling")->required();
    cav->add_option("--g24", cp.g24, "cavity coupling")->required();
    cav->add_option("--omega", cp.omega, "pump detuning Omega")->required();
    cav->add_option("--delta", cp.delta, "detuning Delta")->required();
    cav->add_option("--epsilon", cp.epsilon, "energy offset epsilon")->required();

    auto* val = app.add_subcommand("validate", "check a config and print diagnostics");
    add_common(val, val_c);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sweep) {
            const auto cfg = sweep_c.load();
            auto run = run_protocol(cfg);
            write_atomic(out_dir(cfg) / "points.csv", points_csv(run.record));
            write_atomic(out_dir(cfg) / "run.meta", run_meta(run.record).dump(2) + "\n");
            write_grid(cfg, run.grid, "phase_diagram", "Josephson psi_a");
            std::cout << fmt::format("{:.1f} s, ", run.record.wall_seconds);
            return finish_map(run.grid);
        }
        if (*aux) {
            const auto cfg = aux_c.load();
            const auto grid = run_auxfield_map(cfg);
            write_grid(cfg, grid, "phase_diagram", "auxiliary-field |<a>|");
            return finish_map(grid);
        }
        if (*gw) {
            const auto cfg = gw_c.load();
            const auto grid = run_gutzwiller_map(cfg);
            write_grid(cfg, grid, "phase_diagram", "Gutzwiller psi");
            return finish_map(grid);
        }
        if (*tm) {
            const auto cfg = tm_c.load();
            ModelParams p;
            p.kappa = cfg.params.kappa;
            p.g = cfg.params.g;
            p.u = tm_u;
            p.mu = tm_mu;
            const auto tp = twomode::reduce_params(lattice(cfg), p);
            const auto s0 = twomode::to_amplitudes({tm_z0, tm_theta0, tm_n});
            const auto traj = twomode::integrate_amplitudes(tp, s0, tm_dt.value_or(twomode::default_step(tp)), tm_t_end);
            write_atomic(out_dir(cfg) / "twomode.csv", twomode_csv(tp, traj));
            const double e0 = twomode::energy(tp, traj.states.front()), e1 = twomode::energy(tp, traj.states.back());
            std::cout << fmt::format("{} steps, energy drift {:.3g}\n", traj.times.size() - 1, std::abs(e1 - e0));
            return ok;
        }
        if (*cur || *spec) {
            const auto& c = *cur ? cur_c : spec_c;
            const auto& a = *cur ? cur_p : spec_p;
            const auto cfg = c.load();
            const auto sim = simulate_point(lattice(cfg), point_params(cfg, a), DynamicsSettings::from(cfg));
            write_atomic(out_dir(cfg) / "trace.csv", trace_csv(sim.trace));
            if (cfg.output.svg) write_atomic(out_dir(cfg) / "trace.svg", trace_svg(sim.trace));
            const auto& r = sim.result;
            if (*spec) write_atomic(out_dir(cfg) / "spectrum.csv", spectrum_csv(sim.spectrum));
            std::cout << fmt::format("sector {} dim {} J_m {:.6g} omega* {:.6g}{} psi_b {:.6g} psi_a {:.6g}\n",
                                     r.sector, r.basis_dim, r.j_peak, r.omega_star, r.no_peak ? " (no peak)" : "",
                                     r.psi_b, r.psi_a);
            return ok;
        }
        if (*cmp) {
            const auto a = read_phase_diagram(cmp_a), b = read_phase_diagram(cmp_b);
            const auto c = compare_maps(a, b, cmp_levels);
            write_atomic(fs::path(cmp_out) / "contours.csv", contours_csv(c.contours_first, c.contours_second));
            HeatmapStyle style;
            style.title = fmt::format("{} with {} contours", to_string(a.source), to_string(b.source));
            write_atomic(fs::path(cmp_out) / "compare.svg", heatmap_svg(a, c.contours_second, style));
            std::cout << fmt::format("spearman {:.6f} over {} points\n", c.rank_correlation, c.pairs);
            return ok;
        }
        if (*cav) {
            const auto h = cavity_to_hubbard(cp);
            std::cout << fmt::format("U {}\nmu {}\n", h.u, h.mu);
            return ok;
        }
        if (*val) {
            const auto cfg = val_c.load();
            std::cout << to_json(cfg).dump(2) << '\n';
            return ok;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const IoError& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return io_error;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return io_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return numerical_failure;
    }
    return ok;
}
