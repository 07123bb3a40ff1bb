#include "jmott/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace jmott {

namespace fs = std::filesystem;

void write_atomic(const fs::path& path, const std::string& contents)
{
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string());
        out << contents;
        out.flush();
        if (!out) throw IoError("write failed: " + tmp.string());
    }
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError("cannot rename into " + path.string());
    }
}

namespace {

std::string num(double v) { return fmt::format("{}", v); }

std::string field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

std::vector<std::string> split_row(const std::string& line)
{
    std::vector<std::string> out(1);
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                out.back() += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                out.back() += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.emplace_back();
        } else {
            out.back() += c;
        }
    }
    return out;
}

double parse_number(const std::string& s)
{
    double v = 0.0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || ptr != end) throw IoError("not a number: '" + s + "'");
    return v;
}

}  // namespace

std::string trace_csv(const CurrentTrace& trace)
{
    std::string out = "t,J\n";
    for (std::size_t k = 0; k < trace.values.size(); ++k)
        out += fmt::format("{},{}\n", trace.grid[k], trace.values[k]);
    return out;
}

std::string spectrum_csv(const SpectrumResult& spectrum)
{
    std::string out = "omega,J_omega\n";
    for (std::size_t k = 0; k < spectrum.omegas.size(); ++k)
        out += fmt::format("{},{}\n", spectrum.omegas[k], spectrum.values[k]);
    return out;
}

std::string phase_diagram_csv(const PhaseDiagramGrid& grid)
{
    std::string out = "mu_over_u,kappa_over_u,psi,source,flags,zkappa_over_u\n";
    const auto source = to_string(grid.source);
    for (std::size_t i = 0; i < grid.rows(); ++i) {
        for (std::size_t j = 0; j < grid.cols(); ++j) {
            out += fmt::format("{},{},{},{},{},{}\n", grid.mu_over_u[i], grid.kappa_over_u[j], grid.at(i, j), source,
                               field(grid.flag(i, j)), grid.coordination * grid.kappa_over_u[j]);
        }
    }
    return out;
}

PhaseDiagramGrid parse_phase_diagram_csv(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "mu_over_u,kappa_over_u,psi,source,flags,zkappa_over_u")
        throw IoError("phase diagram: unexpected header");

    struct Row {
        double mu, kappa, psi, zk;
        std::string source, flags;
    };
    std::vector<Row> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_row(line);
        if (f.size() != 6) throw IoError("phase diagram: expected 6 fields in '" + line + "'");
        rows.push_back({parse_number(f[0]), parse_number(f[1]), parse_number(f[2]), parse_number(f[5]), f[3], f[4]});
    }

    std::vector<double> mu_axis, kappa_axis;
    for (const auto& r : rows) {
        if (mu_axis.empty() || mu_axis.back() != r.mu) mu_axis.push_back(r.mu);
        if (mu_axis.size() == 1) kappa_axis.push_back(r.kappa);
    }
    if (mu_axis.size() * kappa_axis.size() != rows.size()) throw IoError("phase diagram: rows do not form a grid");

    int coordination = 2;
    for (const auto& r : rows) {
        if (r.kappa != 0.0) {
            coordination = static_cast<int>(std::lround(r.zk / r.kappa));
            break;
        }
    }
    const auto source = rows.empty() ? MapSource::gutzwiller : parse_map_source(rows.front().source);
    auto grid = PhaseDiagramGrid::make(mu_axis, kappa_axis, source, coordination);
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const std::size_t i = k / kappa_axis.size(), j = k % kappa_axis.size();
        if (rows[k].mu != mu_axis[i] || rows[k].kappa != kappa_axis[j])
            throw IoError("phase diagram: rows out of grid order");
        grid.at(i, j) = rows[k].psi;
        grid.flag(i, j) = rows[k].flags;
    }
    return grid;
}

PhaseDiagramGrid read_phase_diagram(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_phase_diagram_csv(ss.str());
}

std::string points_csv(const RunRecord& record)
{
    std::string out =
        "mu_over_u,kappa_over_u,u,kappa,mu,status,ground_energy,sector,basis_dim,J_m,omega_star,psi_b,psi_a,"
        "density_a,density_b,norm_drift,number_drift,continuity_residual,truncation_change,flags\n";
    for (const auto& r : record.points) {
        std::string flags = r.ok ? std::string() : "failed: " + r.failure;
        for (const auto& f : r.flags) flags += (flags.empty() ? "" : ";") + f;
        out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", r.mu_over_u,
                           r.kappa_over_u, r.u, r.kappa, r.mu, r.ok ? "ok" : "failed", r.ground_energy, r.sector,
                           r.basis_dim, r.j_peak, r.omega_star, r.psi_b, r.psi_a, r.density_a, r.density_b,
                           r.norm_drift, r.number_drift, r.continuity_residual,
                           r.truncation_change ? num(*r.truncation_change) : std::string(), field(flags));
    }
    return out;
}

std::string twomode_csv(const twomode::Params& tp, const twomode::AmplitudeTrajectory& traj)
{
    const auto current = twomode::current_from_trajectory(tp, traj);
    std::string out = "t,re_phi_a,im_phi_a,re_phi_b,im_phi_b,z,theta,J\n";
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const auto& s = traj.states[k];
        const auto pp = twomode::to_population_phase(s);
        out += fmt::format("{},{},{},{},{},{},{},{}\n", traj.times[k], s.phi_a.real(), s.phi_a.imag(),
                           s.phi_b.real(), s.phi_b.imag(), pp.z, pp.theta, current.instantaneous[k]);
    }
    return out;
}

std::string contours_csv(const std::vector<ContourLevel>& first, const std::vector<ContourLevel>& second)
{
    std::string out = "map,level,line,mu_over_u,kappa_over_u\n";
    auto emit = [&](const char* name, const std::vector<ContourLevel>& levels) {
        for (const auto& lv : levels)
            for (std::size_t l = 0; l < lv.lines.size(); ++l)
                for (const auto& p : lv.lines[l]) out += fmt::format("{},{},{},{},{}\n", name, lv.level, l, p.x, p.y);
    };
    emit("first", first);
    emit("second", second);
    return out;
}

nlohmann::json run_meta(const RunRecord& record)
{
    nlohmann::json j;
    j["software"] = {{"name", "jmott"}, {"version", record.version}};
    j["config"] = record.config;
    j["points"] = record.points.size();
    j["failures"] = record.failures;
    j["wall_seconds"] = record.wall_seconds;
    j["libraries"] = {{"eigen", fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION)},
                      {"fmt", FMT_VERSION},
                      {"nlohmann_json", fmt::format("{}.{}.{}", NLOHMANN_JSON_VERSION_MAJOR,
                                                    NLOHMANN_JSON_VERSION_MINOR, NLOHMANN_JSON_VERSION_PATCH)}};
    j["csv_columns"] = {{"trace.csv", "t,J"},
                        {"spectrum.csv", "omega,J_omega"},
                        {"phase_diagram.csv", "mu_over_u,kappa_over_u,psi,source,flags,zkappa_over_u"}};
    return j;
}

}  // namespace jmott
