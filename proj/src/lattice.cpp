#include "jmott/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace jmott {

Boundary parse_boundary(const std::string& name)
{
    if (name == "open") return Boundary::open;
    if (name == "periodic") return Boundary::periodic;
    throw std::invalid_argument("unknown boundary '" + name + "' (expected open|periodic)");
}

std::string to_string(Boundary b)
{
    return b == Boundary::open ? "open" : "periodic";
}

namespace {

Bond ordered(int i, int j) { return i < j ? Bond{i, j} : Bond{j, i}; }

void add_bond(std::vector<Bond>& bonds, std::set<Bond>& seen, int i, int j)
{
    if (i == j) return;
    auto b = ordered(i, j);
    if (seen.insert(b).second) bonds.push_back(b);
}

}  // namespace

LatticeSpec build_pair_lattice(int d, int n, Boundary boundary)
{
    if (d != 1 && d != 2) throw std::invalid_argument("dimension must be 1 or 2");
    if (n < 1) throw std::invalid_argument("sites per lattice must be >= 1");

    LatticeSpec spec;
    spec.dimension = d;
    spec.sites_per_lattice = n;
    spec.boundary = boundary;

    std::vector<Bond> bonds;
    std::set<Bond> seen;
    if (d == 1) {
        for (int i = 0; i + 1 < n; ++i) add_bond(bonds, seen, i, i + 1);
        // N=2 periodic would duplicate the single bond; add_bond drops it.
        if (boundary == Boundary::periodic && n > 2) add_bond(bonds, seen, n - 1, 0);
        spec.contact_sites = {0};
    } else {
        const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
        if (side * side != n) throw std::invalid_argument("d=2 requires a perfect-square site count");
        auto site = [side](int x, int y) { return y * side + x; };
        for (int y = 0; y < side; ++y) {
            for (int x = 0; x < side; ++x) {
                if (x + 1 < side) add_bond(bonds, seen, site(x, y), site(x + 1, y));
                else if (boundary == Boundary::periodic) add_bond(bonds, seen, site(x, y), site(0, y));
                if (y + 1 < side) add_bond(bonds, seen, site(x, y), site(x, y + 1));
                else if (boundary == Boundary::periodic) add_bond(bonds, seen, site(x, y), site(x, 0));
            }
        }
        for (int x = 0; x < side; ++x) spec.contact_sites.push_back(site(x, 0));
    }
    spec.edges_a = bonds;
    spec.edges_b = bonds;
    return spec;
}

HubbardFromCavity cavity_to_hubbard(const CavityParams& c)
{
    if (c.omega == 0.0) throw std::domain_error("Rabi frequency Omega must be nonzero");
    if (c.g24 != 0.0 && c.delta == 0.0) throw std::domain_error("detuning Delta must be nonzero when g24 != 0");
    const double prefactor = c.s * (c.g13 / c.omega) * (c.g13 / c.omega);
    const double nonlinearity = c.g24 == 0.0 ? 0.0 : c.g24 * c.g24 / c.delta;
    return {prefactor * nonlinearity, prefactor * c.epsilon};
}

bool same_graph(const std::vector<Bond>& lhs, const std::vector<Bond>& rhs)
{
    std::set<Bond> a, b;
    for (auto [i, j] : lhs) a.insert(ordered(i, j));
    for (auto [i, j] : rhs) b.insert(ordered(i, j));
    return a == b && a.size() == lhs.size() && b.size() == rhs.size();
}

namespace {

void check_bonds(const std::vector<Bond>& bonds, int n, const char* which, std::vector<Diagnostic>& out)
{
    std::set<Bond> seen;
    for (auto [i, j] : bonds) {
        if (i < 0 || j < 0 || i >= n || j >= n) {
            out.push_back({Severity::error, "invalid_site_index",
                           std::string("invalid site index in ") + which + " bond (" + std::to_string(i) + "," +
                               std::to_string(j) + ")"});
            continue;
        }
        if (i == j) {
            out.push_back({Severity::error, "self_loop", std::string("self-loop in ") + which + " bonds"});
            continue;
        }
        if (!seen.insert(ordered(i, j)).second)
            out.push_back({Severity::error, "duplicate_bond", std::string("duplicate bond in ") + which});
    }
}

}  // namespace

std::vector<Diagnostic> validate(const LatticeSpec& spec, const ModelParams& p)
{
    std::vector<Diagnostic> out;
    const int n = spec.sites_per_lattice;
    if (spec.dimension < 1) out.push_back({Severity::error, "invalid_dimension", "dimension must be >= 1"});
    if (n < 1) out.push_back({Severity::error, "invalid_size", "sites_per_lattice must be >= 1"});

    const auto before = out.size();
    check_bonds(spec.edges_a, n, "lattice A", out);
    check_bonds(spec.edges_b, n, "lattice B", out);
    if (out.size() == before && !same_graph(spec.edges_a, spec.edges_b))
        out.push_back({Severity::error, "lattice_mismatch", "lattices A and B must have identical bond graphs"});

    if (spec.contact_sites.empty())
        out.push_back({Severity::error, "empty_contact", "contact set must be nonempty"});
    if (static_cast<int>(spec.contact_sites.size()) > std::max(n, 0))
        out.push_back({Severity::error, "contact_too_large", "contact set larger than the lattice"});
    std::set<int> contacts;
    for (int c : spec.contact_sites) {
        if (c < 0 || c >= n)
            out.push_back({Severity::error, "invalid_site_index", "invalid contact site " + std::to_string(c)});
        else if (!contacts.insert(c).second)
            out.push_back({Severity::error, "duplicate_contact", "duplicate contact site " + std::to_string(c)});
    }

    if (p.u < 0) out.push_back({Severity::error, "negative_u", "on-site repulsion U must be >= 0"});
    if (p.g < 0) out.push_back({Severity::error, "negative_g", "junction tunnelling g must be >= 0"});
    if (p.lambda < 0) out.push_back({Severity::error, "negative_lambda", "auxiliary field lambda must be >= 0"});
    if (p.n_max < 1) out.push_back({Severity::error, "invalid_n_max", "n_max must be >= 1"});
    if (p.n_total_max < 0) out.push_back({Severity::error, "invalid_n_total_max", "n_total_max must be >= 0"});
    else if (p.n_max >= 1 && p.n_total_max > p.n_max * spec.total_sites())
        out.push_back({Severity::error, "invalid_n_total_max", "n_total_max exceeds n_max * total sites"});

    if (p.g > 0 && p.g >= p.kappa)
        out.push_back({Severity::warning, "weak_coupling", "weak-coupling assumption violated (g >= kappa)"});
    return out;
}

bool has_errors(const std::vector<Diagnostic>& diags)
{
    return std::any_of(diags.begin(), diags.end(), [](const auto& d) { return d.severity == Severity::error; });
}

}  // namespace jmott
