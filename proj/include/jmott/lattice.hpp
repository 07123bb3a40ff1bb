#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace jmott {

enum class Boundary { open, periodic };

Boundary parse_boundary(const std::string& name);
std::string to_string(Boundary b);

using Bond = std::pair<int, int>;

/// Paired lattices A and B with identical bond graphs. Sites are 0-based.
struct LatticeSpec {
    int dimension = 1;
    int sites_per_lattice = 1;
    std::vector<Bond> edges_a;
    std::vector<Bond> edges_b;
    std::vector<int> contact_sites;
    Boundary boundary = Boundary::open;

    int total_sites() const { return 2 * sites_per_lattice; }
    int coordination() const { return 2 * dimension; }
};

struct ModelParams {
    double kappa = 1.0;
    double u = 1.0;
    double mu = 0.5;
    double g = 0.1;
    double delta_mu = 100.0;
    double lambda = 0.0;
    int n_max = 2;
    int n_total_max = 8;
};

struct CavityParams {
    double s = 1.0;
    double g13 = 0.0;
    double g24 = 0.0;
    double omega = 1.0;
    double delta = 1.0;
    double epsilon = 0.0;
};

struct HubbardFromCavity {
    double u;
    double mu;
};

enum class Severity { warning, error };

struct Diagnostic {
    Severity severity;
    std::string code;
    std::string message;
};

/// Chain (d=1) or square lattice (d=2). For d=2, n must be a perfect square.
/// Contact set is site 0 for d=1 and the first row for d=2.
LatticeSpec build_pair_lattice(int d, int n, Boundary boundary);

/// U = S (g13/Omega)^2 g24^2/Delta, mu = S (g13/Omega)^2 epsilon.
HubbardFromCavity cavity_to_hubbard(const CavityParams& c);

std::vector<Diagnostic> validate(const LatticeSpec& spec, const ModelParams& p);

bool has_errors(const std::vector<Diagnostic>& diags);

/// True when the two bond lists describe the same undirected graph.
bool same_graph(const std::vector<Bond>& lhs, const std::vector<Bond>& rhs);

}  // namespace jmott
