#include "jmott/meanfield.hpp"

#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <limits>

namespace jmott {

std::string to_string(MapSource s)
{
    switch (s) {
    case MapSource::gutzwiller: return "gutzwiller";
    case MapSource::auxfield: return "auxfield";
    case MapSource::josephson: return "josephson";
    }
    return "unknown";
}

MapSource parse_map_source(const std::string& s)
{
    if (s == "gutzwiller") return MapSource::gutzwiller;
    if (s == "auxfield") return MapSource::auxfield;
    if (s == "josephson") return MapSource::josephson;
    throw std::invalid_argument("unknown map source '" + s + "'");
}

PhaseDiagramGrid PhaseDiagramGrid::make(std::vector<double> mu_axis, std::vector<double> kappa_axis,
                                        MapSource source, int coordination)
{
    PhaseDiagramGrid g;
    g.mu_over_u = std::move(mu_axis);
    g.kappa_over_u = std::move(kappa_axis);
    g.coordination = coordination;
    g.source = source;
    g.psi.assign(g.rows() * g.cols(), 0.0);
    g.flags.assign(g.rows() * g.cols(), "");
    return g;
}

bool PhaseDiagramGrid::valid() const
{
    auto increasing = [](const std::vector<double>& v) {
        for (std::size_t k = 1; k < v.size(); ++k)
            if (!(v[k] > v[k - 1])) return false;
        return true;
    };
    if (!increasing(mu_over_u) || !increasing(kappa_over_u)) return false;
    if (psi.size() != rows() * cols() || flags.size() != psi.size()) return false;
    for (std::size_t k = 0; k < psi.size(); ++k) {
        if (flags[k].find("failed") != std::string::npos) continue;
        if (!std::isfinite(psi[k]) || psi[k] < 0) return false;
    }
    return true;
}

namespace gutzwiller {

RMatrix site_hamiltonian(double psi, double mu_over_u, double zkappa_over_u, int n_max)
{
    if (psi < 0) throw std::invalid_argument("psi must be >= 0");
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    RMatrix h = RMatrix::Zero(n_max + 1, n_max + 1);
    for (int n = 0; n <= n_max; ++n) {
        h(n, n) = 0.5 * n * (n - 1) - mu_over_u * n + zkappa_over_u * psi * psi;
        if (n > 0) h(n - 1, n) = h(n, n - 1) = -zkappa_over_u * psi * std::sqrt(static_cast<double>(n));
    }
    return h;
}

SiteSolution site_ground(double psi, double mu_over_u, double zkappa_over_u, int n_max)
{
    Eigen::SelfAdjointEigenSolver<RMatrix> es(site_hamiltonian(psi, mu_over_u, zkappa_over_u, n_max));
    RVector v = es.eigenvectors().col(0);
    double a = 0.0, n = 0.0;
    for (int k = 0; k <= n_max; ++k) {
        if (k > 0) a += v(k - 1) * v(k) * std::sqrt(static_cast<double>(k));
        n += k * v(k) * v(k);
    }
    return {es.eigenvalues()(0), std::abs(a), n};
}

SelfConsistent solve_selfconsistent(double mu_over_u, double zkappa_over_u, int n_max)
{
    if (zkappa_over_u < 0) throw std::invalid_argument("zkappa/U must be >= 0");
    auto energy = [&](double psi) { return site_ground(psi, mu_over_u, zkappa_over_u, n_max).energy; };

    const double top = std::sqrt(static_cast<double>(n_max));
    const int coarse = 64;
    int best = 0;
    double best_e = energy(0.0);
    for (int k = 1; k <= coarse; ++k) {
        const double e = energy(top * k / coarse);
        if (e < best_e) {
            best_e = e;
            best = k;
        }
    }
    const double lo = top * std::max(best - 1, 0) / coarse;
    const double hi = top * std::min(best + 1, coarse) / coarse;

    std::uintmax_t iterations = 500;
    const auto [psi_min, e_min] =
        boost::math::tools::brent_find_minima(energy, lo, hi, std::numeric_limits<double>::digits / 2, iterations);
    if (iterations >= 500) throw NumericalError("scalar minimisation hit its iteration cap");

    // Near psi = 0 the energy is c2 psi^2 and brent stalls wherever that
    // drops under rounding; a minimum only counts if it beats psi = 0 by
    // more than that noise.
    const double e_zero = energy(0.0);
    const double noise = 1e-12 * std::max(1.0, std::abs(e_zero));
    SelfConsistent out;
    out.psi = (psi_min < 1e-6 || e_min > e_zero - noise) ? 0.0 : psi_min;
    const auto site = site_ground(out.psi, mu_over_u, zkappa_over_u, n_max);
    out.energy = site.energy;
    out.density = site.density;
    out.residual = std::abs(out.psi - site.expectation_a);
    // psi = 0 is always stationary; never return a worse point.
    if (out.energy > e_zero) {
        const auto zero = site_ground(0.0, mu_over_u, zkappa_over_u, n_max);
        out = {0.0, zero.energy, zero.expectation_a, zero.density};
    }
    return out;
}

LobeEdge perturbative_boundary(int n, double mu_over_u)
{
    if (n < 1) throw std::invalid_argument("lobe index must be >= 1");
    const double x = mu_over_u;
    if (x < n - 1 || x > n) throw std::invalid_argument("mu/U outside the lobe interval");
    if (x == n - 1 || x == n) return {0.0, true};
    const double chi = (n + 1) / (n - x) + n / (x - (n - 1));
    return {1.0 / chi, false};
}

double bisect_boundary(double mu_over_u, double upper, double tolerance, int n_max)
{
    double lo = 0.0, hi = upper;
    if (solve_selfconsistent(mu_over_u, hi, n_max).psi == 0.0)
        throw std::invalid_argument("no superfluid below the bisection upper bound");
    while (hi - lo > tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (solve_selfconsistent(mu_over_u, mid, n_max).psi > 0.0) hi = mid;
        else lo = mid;
    }
    return 0.5 * (lo + hi);
}

PhaseDiagramGrid phase_diagram(const std::vector<double>& mu_grid, const std::vector<double>& kappa_grid,
                               int coordination, int n_max)
{
    auto grid = PhaseDiagramGrid::make(mu_grid, kappa_grid, MapSource::gutzwiller, coordination);
    grid.params_used = {{"n_max", static_cast<double>(n_max)}, {"coordination", static_cast<double>(coordination)}};
    for (std::size_t i = 0; i < grid.rows(); ++i) {
        for (std::size_t j = 0; j < grid.cols(); ++j) {
            try {
                grid.at(i, j) = solve_selfconsistent(mu_grid[i], coordination * kappa_grid[j], n_max).psi;
            } catch (const std::exception& e) {
                grid.at(i, j) = std::numeric_limits<double>::quiet_NaN();
                grid.flag(i, j) = std::string("failed: ") + e.what();
            }
        }
    }
    return grid;
}

}  // namespace gutzwiller

AuxfieldResult auxfield_order_parameter(const LatticeSpec& spec, const ModelParams& p, const EigenOptions& opts)
{
    BuildOptions build;
    build.region = Region::lattice_a;
    build.include_aux = true;
    build.include_drive = false;
    const auto h = build_hamiltonian(spec, p, build);
    const auto gs = ground_state(h, opts);

    AuxfieldResult out;
    out.energy = gs.energy;
    out.basis_dim = h.basis->dim();
    const auto sites = h.a_sites();
    for (int i : sites) {
        out.psi += std::abs(expectation(annihilation(*h.basis, i), gs.state));
        out.density += expectation(number(*h.basis, i), gs.state).real();
    }
    out.psi /= static_cast<double>(sites.size());
    // Without the field H conserves N, so a mixed-sector eigenvector only
    // appears at an accidental degeneracy and <a> is zero by symmetry.
    if (p.lambda == 0.0) out.psi = 0.0;
    out.density /= static_cast<double>(sites.size());
    return out;
}

}  // namespace jmott
