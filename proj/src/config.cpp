#include "jmott/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <set>

namespace jmott {

std::vector<double> AxisSpec::values() const
{
    if (steps < 1) throw ConfigError("axis needs at least one step");
    std::vector<double> out(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k)
        out[k] = steps == 1 ? min : min + (max - min) * static_cast<double>(k) / static_cast<double>(steps - 1);
    return out;
}

int SweepConfig::pair_total_cap() const
{
    if (params.n_total_max) return *params.n_total_max;
    return static_cast<int>(std::floor(params.density_cap * 2 * lattice.sites + 1e-9));
}

int SweepConfig::lattice_a_total_cap() const
{
    return static_cast<int>(std::floor(params.density_cap * lattice.sites + 1e-9));
}

namespace {

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

void apply_override(YAML::Node& root, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + assignment + "' is not key=value");
    const auto path = split(assignment.substr(0, eq), '.');
    const std::string value = assignment.substr(eq + 1);
    // yaml-cpp node assignment rebinds references, so walk with copies.
    std::vector<YAML::Node> chain{root};
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        YAML::Node next = chain.back()[path[k]];
        if (!next.IsDefined() || next.IsNull()) {
            chain.back()[path[k]] = YAML::Node(YAML::NodeType::Map);
            next = chain.back()[path[k]];
        }
        if (!next.IsMap()) throw ConfigError("override path '" + assignment + "' crosses a scalar");
        chain.push_back(next);
    }
    chain.back()[path.back()] = YAML::Load(value);
}

class Reader {
public:
    Reader(const YAML::Node& node, std::string prefix) : node_(node), prefix_(std::move(prefix))
    {
        if (node_ && !node_.IsNull() && !node_.IsMap()) throw ConfigError("'" + prefix_ + "' must be a mapping");
    }

    template <typename T>
    void read(const char* key, T& out)
    {
        seen_.insert(key);
        if (!node_ || !node_.IsMap()) return;
        auto child = node_[key];
        if (!child) return;
        try {
            out = child.as<T>();
        } catch (const YAML::Exception&) {
            throw ConfigError("bad value for '" + name(key) + "'");
        }
    }

    template <typename T>
    void read_optional(const char* key, std::optional<T>& out)
    {
        seen_.insert(key);
        if (!node_ || !node_.IsMap()) return;
        auto child = node_[key];
        if (!child || child.IsNull()) return;
        if (child.IsScalar() && child.Scalar() == "auto") {
            out.reset();
            return;
        }
        try {
            out = child.as<T>();
        } catch (const YAML::Exception&) {
            throw ConfigError("bad value for '" + name(key) + "'");
        }
    }

    Reader child(const char* key)
    {
        seen_.insert(key);
        YAML::Node c;
        if (node_ && node_.IsMap()) c = node_[key];
        return Reader(c, name(key));
    }

    void finish() const
    {
        if (!node_ || !node_.IsMap()) return;
        for (const auto& kv : node_) {
            const auto key = kv.first.as<std::string>();
            if (!seen_.count(key)) throw ConfigError("unknown config key '" + name(key.c_str()) + "'");
        }
    }

private:
    std::string name(const char* key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

    YAML::Node node_;
    std::string prefix_;
    std::set<std::string> seen_;
};

void read_axis(Reader r, AxisSpec& axis)
{
    r.read("min", axis.min);
    r.read("max", axis.max);
    r.read("steps", axis.steps);
    r.finish();
}

}  // namespace

SweepConfig load_config(const std::optional<std::filesystem::path>& file, const std::vector<std::string>& overrides)
{
    YAML::Node root(YAML::NodeType::Map);
    if (file) {
        try {
            root = YAML::LoadFile(file->string());
        } catch (const YAML::BadFile&) {
            throw ConfigError("cannot read config file " + file->string());
        } catch (const YAML::Exception& e) {
            throw ConfigError(std::string("config parse error: ") + e.what());
        }
        if (root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
    }
    try {
        for (const auto& o : overrides) apply_override(root, o);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("bad override: ") + e.what());
    }

    SweepConfig cfg;
    Reader top(root, "");
    {
        auto r = top.child("lattice");
        std::string boundary = to_string(cfg.lattice.boundary);
        r.read("dimension", cfg.lattice.dimension);
        r.read("sites", cfg.lattice.sites);
        r.read("boundary", boundary);
        r.finish();
        try {
            cfg.lattice.boundary = parse_boundary(boundary);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    {
        auto r = top.child("params");
        r.read("kappa", cfg.params.kappa);
        r.read("u", cfg.params.u);
        r.read("g", cfg.params.g);
        r.read("delta_mu", cfg.params.delta_mu);
        r.read("lambda", cfg.params.lambda);
        r.read("n_max", cfg.params.n_max);
        r.read("density_cap", cfg.params.density_cap);
        r.read_optional("n_total_max", cfg.params.n_total_max);
        r.read("gutzwiller_n_max", cfg.params.gutzwiller_n_max);
        r.finish();
    }
    {
        auto r = top.child("grid");
        std::string mode = cfg.grid.mode == GridMode::map ? "map" : "slice";
        std::string scale = cfg.grid.scale == EnergyScale::kappa ? "kappa" : "u";
        r.read("mode", mode);
        r.read("scale", scale);
        read_axis(r.child("mu_over_u"), cfg.grid.mu_over_u);
        read_axis(r.child("kappa_over_u"), cfg.grid.kappa_over_u);
        read_axis(r.child("u"), cfg.grid.u);
        r.read("fixed_mu_over_u", cfg.grid.fixed_mu_over_u);
        r.finish();
        if (mode == "map") cfg.grid.mode = GridMode::map;
        else if (mode == "slice") cfg.grid.mode = GridMode::slice;
        else throw ConfigError("grid.mode must be map|slice");
        if (scale == "kappa") cfg.grid.scale = EnergyScale::kappa;
        else if (scale == "u") cfg.grid.scale = EnergyScale::u;
        else throw ConfigError("grid.scale must be kappa|u");
    }
    {
        auto r = top.child("dynamics");
        r.read("tau_delta_mu", cfg.dynamics.tau_delta_mu);
        r.read("samples_per_period", cfg.dynamics.samples_per_period);
        r.read("min_periods", cfg.dynamics.min_periods);
        r.read_optional("omega_step", cfg.dynamics.omega_step);
        r.read_optional("omega_max", cfg.dynamics.omega_max);
        r.finish();
    }
    {
        auto r = top.child("run");
        r.read("threads", cfg.run.threads);
        r.read("convergence_check", cfg.run.convergence_check);
        r.finish();
    }
    {
        auto r = top.child("output");
        r.read("directory", cfg.output.directory);
        r.read("svg", cfg.output.svg);
        r.finish();
    }
    top.finish();

    if (has_errors(validate(cfg))) {
        for (const auto& d : validate(cfg))
            if (d.severity == Severity::error) throw ConfigError(d.code + ": " + d.message);
    }
    return cfg;
}

std::vector<Diagnostic> validate(const SweepConfig& cfg)
{
    std::vector<Diagnostic> out;
    auto error = [&](std::string code, std::string msg) { out.push_back({Severity::error, code, msg}); };
    if (cfg.lattice.dimension != 1 && cfg.lattice.dimension != 2) error("invalid_dimension", "dimension must be 1 or 2");
    if (cfg.lattice.sites < 1) error("invalid_size", "sites must be >= 1");
    for (const auto* axis : {&cfg.grid.mu_over_u, &cfg.grid.kappa_over_u, &cfg.grid.u}) {
        if (axis->steps < 1) error("empty_grid", "grid axes need at least one step");
        else if (axis->steps > 1 && !(axis->max > axis->min)) error("axis_order", "grid axis max must exceed min");
    }
    if (cfg.grid.scale == EnergyScale::kappa && cfg.grid.mode == GridMode::map && cfg.grid.kappa_over_u.min <= 0)
        error("kappa_over_u_zero", "kappa-fixed scaling needs kappa/U > 0 (U would be infinite)");
    if (cfg.grid.mode == GridMode::slice && cfg.grid.u.min <= 0) error("u_nonpositive", "slice U values must be > 0");
    if (cfg.grid.scale == EnergyScale::u && cfg.params.u <= 0) error("u_nonpositive", "fixed U must be > 0");
    if (cfg.params.n_max < 1) error("invalid_n_max", "n_max must be >= 1");
    if (cfg.params.g < 0) error("negative_g", "g must be >= 0");
    if (cfg.params.lambda < 0) error("negative_lambda", "lambda must be >= 0");
    if (!(cfg.params.delta_mu > 0)) error("delta_mu", "delta_mu must be > 0");
    if (!(cfg.dynamics.tau_delta_mu > 0)) error("tau", "tau_delta_mu must be > 0");
    if (cfg.dynamics.samples_per_period < 2) error("sampling", "samples_per_period must be >= 2");
    if (cfg.dynamics.omega_step && !(*cfg.dynamics.omega_step > 0)) error("omega_step", "omega_step must be > 0");
    if (cfg.pair_total_cap() > cfg.params.n_max * 2 * cfg.lattice.sites)
        error("invalid_n_total_max", "total cap exceeds n_max * total sites");

    // Largest U reached on the grid.
    double u_max = 0.0, kappa_max = 0.0;
    if (cfg.grid.mode == GridMode::slice) {
        u_max = cfg.grid.u.max;
        kappa_max = cfg.params.kappa;
    } else if (cfg.grid.scale == EnergyScale::kappa) {
        kappa_max = cfg.params.kappa;
        if (cfg.grid.kappa_over_u.min > 0) u_max = cfg.params.kappa / cfg.grid.kappa_over_u.min;
    } else {
        u_max = cfg.params.u;
        kappa_max = cfg.grid.kappa_over_u.max * cfg.params.u;
    }
    const double mu_max = std::max(cfg.grid.mu_over_u.max, cfg.grid.fixed_mu_over_u) * u_max;
    if (cfg.params.delta_mu < 5.0 * std::max({u_max, kappa_max, mu_max}))
        out.push_back({Severity::warning, "quench_not_dominant", "delta_mu is not >> max(U, kappa, mu) on this grid"});
    if (cfg.params.g > 0 && cfg.params.g >= cfg.params.kappa && cfg.grid.scale == EnergyScale::kappa)
        out.push_back({Severity::warning, "weak_coupling", "weak-coupling assumption violated (g >= kappa)"});
    return out;
}

nlohmann::json to_json(const SweepConfig& cfg)
{
    auto axis = [](const AxisSpec& a) { return nlohmann::json{{"min", a.min}, {"max", a.max}, {"steps", a.steps}}; };
    nlohmann::json j;
    j["lattice"] = {{"dimension", cfg.lattice.dimension},
                    {"sites", cfg.lattice.sites},
                    {"boundary", to_string(cfg.lattice.boundary)}};
    j["params"] = {{"kappa", cfg.params.kappa},
                   {"u", cfg.params.u},
                   {"g", cfg.params.g},
                   {"delta_mu", cfg.params.delta_mu},
                   {"lambda", cfg.params.lambda},
                   {"n_max", cfg.params.n_max},
                   {"density_cap", cfg.params.density_cap},
                   {"n_total_max", cfg.pair_total_cap()},
                   {"gutzwiller_n_max", cfg.params.gutzwiller_n_max}};
    j["grid"] = {{"mode", cfg.grid.mode == GridMode::map ? "map" : "slice"},
                 {"scale", cfg.grid.scale == EnergyScale::kappa ? "kappa" : "u"},
                 {"mu_over_u", axis(cfg.grid.mu_over_u)},
                 {"kappa_over_u", axis(cfg.grid.kappa_over_u)},
                 {"u", axis(cfg.grid.u)},
                 {"fixed_mu_over_u", cfg.grid.fixed_mu_over_u}};
    j["dynamics"] = {{"tau_delta_mu", cfg.dynamics.tau_delta_mu},
                     {"samples_per_period", cfg.dynamics.samples_per_period},
                     {"min_periods", cfg.dynamics.min_periods},
                     {"omega_step", cfg.dynamics.omega_step ? nlohmann::json(*cfg.dynamics.omega_step) : "auto"},
                     {"omega_max", cfg.dynamics.omega_max ? nlohmann::json(*cfg.dynamics.omega_max) : "auto"}};
    j["run"] = {{"threads", cfg.run.threads}, {"convergence_check", cfg.run.convergence_check}};
    j["output"] = {{"directory", cfg.output.directory}, {"svg", cfg.output.svg}};
    return j;
}

}  // namespace jmott
