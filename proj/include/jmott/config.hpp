#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "jmott/lattice.hpp"

namespace jmott {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct AxisSpec {
    double min = 0.0;
    double max = 1.0;
    int steps = 1;

    /// Evenly spaced, endpoints included; a single step yields {min}.
    std::vector<double> values() const;
};

enum class GridMode { map, slice };
enum class EnergyScale { kappa, u };

struct SweepConfig {
    struct Lattice {
        int dimension = 1;
        int sites = 2;
        Boundary boundary = Boundary::open;
    } lattice;

    struct Params {
        double kappa = 1.0;
        double u = 1.0;  ///< fixed U when grid.scale = u
        double g = 0.1;
        double delta_mu = 100.0;
        double lambda = 0.1;
        int n_max = 2;
        double density_cap = 2.0;
        std::optional<int> n_total_max;  ///< pair-basis cap; default density_cap * 2N
        int gutzwiller_n_max = 10;
    } params;

    struct Grid {
        GridMode mode = GridMode::map;
        EnergyScale scale = EnergyScale::kappa;
        AxisSpec mu_over_u{0.0, 3.0, 40};
        AxisSpec kappa_over_u{0.0075, 0.3, 40};
        AxisSpec u{0.1, 20.0, 40};
        double fixed_mu_over_u = 0.5;
    } grid;

    struct Dynamics {
        double tau_delta_mu = 20.0;
        int samples_per_period = 80;
        int min_periods = 10;
        std::optional<double> omega_step;  ///< default pi / tau
        std::optional<double> omega_max;   ///< default 2 delta_mu
    } dynamics;

    struct Run {
        int threads = 0;  ///< 0: hardware concurrency
        bool convergence_check = false;
    } run;

    struct Output {
        std::string directory = "out";
        bool svg = true;
    } output;

    int pair_total_cap() const;
    int lattice_a_total_cap() const;
};

/// Loads a YAML config (empty path: defaults) and applies `key.path=value`
/// overrides on top. Unknown keys and malformed values raise ConfigError.
SweepConfig load_config(const std::optional<std::filesystem::path>& file, const std::vector<std::string>& overrides = {});

/// Structured diagnostics, including the "delta_mu >> U, kappa" advisory.
std::vector<Diagnostic> validate(const SweepConfig& cfg);

nlohmann::json to_json(const SweepConfig& cfg);

}  // namespace jmott
