#include "jmott/hamiltonian.hpp"

#include <cmath>
#include <numeric>
#include <random>
#include <string>

namespace jmott {

std::vector<int> HamiltonianBundle::a_sites() const
{
    std::vector<int> out(spec.sites_per_lattice);
    std::iota(out.begin(), out.end(), 0);
    return out;
}

std::vector<int> HamiltonianBundle::b_sites() const
{
    if (region != Region::pair) return {};
    std::vector<int> out(spec.sites_per_lattice);
    std::iota(out.begin(), out.end(), spec.sites_per_lattice);
    return out;
}

SparseOperator HamiltonianBundle::preparation() const
{
    return h_aux ? h_static + *h_aux : h_static;
}

SparseOperator HamiltonianBundle::driven() const
{
    auto h = has_drive ? h_static + h_drive : h_static;
    return h_aux ? h + *h_aux : h;
}

namespace {

SparseOperator hop_pair(const FockBasis& basis, int i, int j)
{
    auto forward = hopping(basis, i, j);
    return forward + adjoint(forward);
}

}  // namespace

HamiltonianBundle build_hamiltonian(const LatticeSpec& spec, const ModelParams& p, const BuildOptions& opts)
{
    if (opts.include_aux && opts.sector) throw std::invalid_argument("auxiliary field breaks number conservation");
    if (opts.include_aux && opts.region != Region::lattice_a)
        throw std::invalid_argument("auxiliary field is defined on lattice A alone");

    const int n = spec.sites_per_lattice;
    const int sites = opts.region == Region::pair ? 2 * n : n;
    auto basis = std::make_shared<const FockBasis>(
        FockBasis::enumerate(sites, p.n_max, opts.sector,
                             opts.sector ? std::nullopt : std::optional<int>(p.n_total_max)));
    if (basis->dim() > opts.max_dim)
        throw DimensionError("basis dimension " + std::to_string(basis->dim()) + " exceeds cap " +
                             std::to_string(opts.max_dim));
    if (basis->dim() == 0) throw DimensionError("empty basis (sector exceeds the truncation)");

    HamiltonianBundle hb;
    hb.basis = basis;
    hb.region = opts.region;
    hb.spec = spec;
    hb.params = p;
    const auto dim = basis->dim();
    const auto a_sites = hb.a_sites();
    const auto b_sites = hb.b_sites();

    SparseOperator h(dim, dim);
    for (auto [i, j] : spec.edges_a) h = h + cplx(-p.kappa) * hop_pair(*basis, hb.a_site(i), hb.a_site(j));
    if (p.u != 0.0) h = h + cplx(p.u) * pair_interaction(*basis, a_sites);

    if (opts.region == Region::pair) {
        for (auto [i, j] : spec.edges_b) h = h + cplx(-p.kappa) * hop_pair(*basis, hb.b_site(i), hb.b_site(j));
        if (p.mu != 0.0) h = h + cplx(p.mu) * total_number(*basis, b_sites);
        if (p.g != 0.0)
            for (int c : spec.contact_sites) h = h + cplx(-p.g) * hop_pair(*basis, hb.a_site(c), hb.b_site(c));
        hb.h_drive = cplx(p.delta_mu) * total_number(*basis, b_sites);
        hb.has_drive = opts.include_drive;
    } else {
        if (p.mu != 0.0) h = h + cplx(-p.mu) * total_number(*basis, a_sites);
        hb.h_drive = SparseOperator(dim, dim);
        hb.has_drive = false;
    }
    hb.h_static = std::move(h);

    if (opts.include_aux) {
        SparseOperator aux(dim, dim);
        for (int i : a_sites) {
            auto a = annihilation(*basis, i);
            aux = aux + a + adjoint(a);
        }
        hb.h_aux = cplx(p.lambda) * aux;
    }
    return hb;
}

std::vector<HamiltonianBundle> build_sector_family(const LatticeSpec& spec, const ModelParams& p, int lo, int hi,
                                                   BuildOptions opts)
{
    if (lo < 0 || hi < lo) throw std::invalid_argument("invalid sector range");
    const int sites = opts.region == Region::pair ? spec.total_sites() : spec.sites_per_lattice;
    hi = std::min(hi, p.n_max * sites);
    std::vector<HamiltonianBundle> out;
    for (int s = lo; s <= hi; ++s) {
        opts.sector = s;
        out.push_back(build_hamiltonian(spec, p, opts));
    }
    return out;
}

GroundState ground_state(const HamiltonianBundle& h, const EigenOptions& opts)
{
    auto pair = lowest_eigenpair(h.preparation(), opts);
    if (pair.residual > 1e-9) throw NumericalError("ground-state residual " + std::to_string(pair.residual));
    return GroundState{pair.value, QuantumState(h.basis, pair.vector), h.basis->sector(), 0, pair.residual};
}

GroundState ground_state(std::span<const HamiltonianBundle> family, double reference_mu, const EigenOptions& opts)
{
    if (family.empty()) throw std::invalid_argument("empty sector family");
    std::optional<GroundState> best;
    double best_shifted = 0.0;
    for (std::size_t k = 0; k < family.size(); ++k) {
        auto gs = ground_state(family[k], opts);
        gs.family_index = k;
        const double shifted = gs.energy - reference_mu * static_cast<double>(gs.sector.value_or(0));
        const double tol = 1e-10 * std::max(1.0, std::abs(shifted));
        if (!best || shifted < best_shifted - tol) {
            best_shifted = shifted;
            best = std::move(gs);
        } else if (std::abs(shifted - best_shifted) <= tol && gs.sector.value_or(0) < best->sector.value_or(0)) {
            best_shifted = shifted;
            best = std::move(gs);
        }
    }
    return std::move(*best);
}

namespace {

std::pair<double, double> gershgorin(const SparseOperator& h)
{
    double lo = 0.0, hi = 0.0;
    bool first = true;
    const auto& m = h.matrix();
    for (int r = 0; r < m.outerSize(); ++r) {
        double centre = 0.0, radius = 0.0;
        for (SparseOperator::Storage::InnerIterator it(m, r); it; ++it) {
            if (it.col() == r) centre = it.value().real();
            else radius += std::abs(it.value());
        }
        if (first || centre - radius < lo) lo = centre - radius;
        if (first || centre + radius > hi) hi = centre + radius;
        first = false;
    }
    return {lo, hi};
}

}  // namespace

ConsistencyReport consistency_checks(const HamiltonianBundle& h, unsigned seed)
{
    ConsistencyReport r;
    const auto prep = h.preparation();
    r.hermiticity_static = h.h_static.hermiticity_residual();
    r.hermiticity_driven = h.driven().hermiticity_residual();

    const bool breaks_number = h.h_aux.has_value() && h.params.lambda != 0.0;
    r.commutator_expected_nonzero = breaks_number;
    const auto n_total = total_number(*h.basis);
    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss;
    CVector v(static_cast<Eigen::Index>(h.basis->dim()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cplx(gauss(rng), gauss(rng));
    v.normalize();
    CVector hn = prep.matrix() * (n_total.matrix() * v);
    CVector nh = n_total.matrix() * (prep.matrix() * v);
    r.number_commutator = (hn - nh).norm();

    auto [lo, hi] = gershgorin(prep);
    r.spectrum_lower = lo;
    r.spectrum_upper = hi;
    r.spectrum_finite = std::isfinite(lo) && std::isfinite(hi);
    return r;
}

}  // namespace jmott
