#include <doctest.h>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

#include "jmott/io.hpp"
#include "jmott/svg.hpp"

using namespace jmott;

namespace {

SweepConfig small_map(std::vector<std::string> extra = {})
{
    std::vector<std::string> o{"grid.mu_over_u={min: 0.2, max: 1.4, steps: 3}",
                               "grid.kappa_over_u={min: 0.05, max: 0.25, steps: 3}", "run.threads=2"};
    o.insert(o.end(), extra.begin(), extra.end());
    return load_config(std::nullopt, o);
}

PhaseDiagramGrid random_grid(std::size_t rows, std::size_t cols, unsigned seed)
{
    std::vector<double> mu(rows), kappa(cols);
    for (std::size_t i = 0; i < rows; ++i) mu[i] = 3.0 * i / std::max<std::size_t>(rows - 1, 1);
    for (std::size_t j = 0; j < cols; ++j) kappa[j] = 0.0075 + 0.3 * j / std::max<std::size_t>(cols - 1, 1);
    auto g = PhaseDiagramGrid::make(mu, kappa, MapSource::auxfield, 2);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto& p : g.psi) p = u(rng) / 3.0;
    return g;
}

bool parses_as_xml(const std::string& text)
{
    std::istringstream in(text);
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::read_xml(in, tree);
    } catch (const boost::property_tree::xml_parser_error&) {
        return false;
    }
    return tree.count("svg") == 1;
}

}  // namespace

TEST_CASE("zero junction coupling gives psi_a = 0 everywhere")
{
    const auto out = run_protocol(small_map({"params.g=0"}));
    REQUIRE(out.record.points.size() == 9);
    CHECK(out.record.failures == 0);
    for (const auto& r : out.record.points) {
        CHECK(r.ok);
        CHECK(r.psi_a == 0.0);
        CHECK(r.j_peak == 0.0);
        CHECK(std::find(r.flags.begin(), r.flags.end(), "zero coupling") != r.flags.end());
    }
}

TEST_CASE("auxiliary map vanishes without the field")
{
    const auto grid = run_auxfield_map(small_map({"params.lambda=0"}));
    for (double p : grid.psi) CHECK(p == 0.0);
    CHECK(grid.source == MapSource::auxfield);
}

TEST_CASE("map points land on the configured grid")
{
    const auto cfg = small_map();
    const auto out = run_protocol(cfg);
    CHECK(out.grid.mu_over_u == cfg.grid.mu_over_u.values());
    CHECK(out.grid.kappa_over_u == cfg.grid.kappa_over_u.values());
    for (const auto& r : out.record.points) {
        CHECK(r.mu_over_u == out.grid.mu_over_u[r.row]);
        CHECK(r.kappa_over_u == doctest::Approx(out.grid.kappa_over_u[r.col]).epsilon(1e-14));
        CHECK(r.kappa == cfg.params.kappa);
        CHECK(std::isfinite(r.psi_a));
        CHECK(r.psi_a >= 0.0);
        CHECK(r.norm_drift < 1e-10);
    }
}

TEST_CASE("runs are deterministic across thread counts")
{
    const auto a = run_protocol(small_map({"run.threads=1"}));
    const auto b = run_protocol(small_map({"run.threads=4"}));
    CHECK(points_csv(a.record) == points_csv(b.record));
    CHECK(phase_diagram_csv(a.grid) == phase_diagram_csv(b.grid));
}

TEST_CASE("slice columns increase in kappa/U")
{
    const auto cfg = load_config(std::nullopt, {"grid.mode=slice", "grid.u={min: 0.5, max: 20, steps: 4}"});
    const auto out = run_protocol(cfg);
    REQUIRE(out.grid.rows() == 1);
    REQUIRE(out.grid.cols() == 4);
    for (std::size_t j = 1; j < 4; ++j) CHECK(out.grid.kappa_over_u[j] > out.grid.kappa_over_u[j - 1]);
    CHECK(out.grid.kappa_over_u.front() == doctest::Approx(1.0 / 20));
    CHECK(out.grid.mu_over_u.front() == cfg.grid.fixed_mu_over_u);
}

TEST_CASE("spearman correlation")
{
    const std::vector<double> a{0.3, 1.0, 0.1, 5.0, 2.2};
    CHECK(spearman(a, a) == doctest::Approx(1.0));
    std::vector<double> neg;
    for (double x : a) neg.push_back(-x);
    CHECK(spearman(a, neg) == doctest::Approx(-1.0));

    // Average ranks: (1, 2.5, 2.5, 4) against (1, 2, 3, 4) gives 4.5 / sqrt(4.5 * 5).
    CHECK(spearman({1, 2, 2, 3}, {1, 2, 3, 4}) == doctest::Approx(4.5 / std::sqrt(22.5)).epsilon(1e-14));
    // Any monotone transform leaves it unchanged.
    std::vector<double> cubed;
    for (double x : a) cubed.push_back(x * x * x + 1.0);
    CHECK(spearman(a, cubed) == doctest::Approx(1.0));

    CHECK(std::isnan(spearman({1.0}, {2.0})));
    CHECK(std::isnan(spearman({1, 1, 1}, {1, 2, 3})));
    CHECK_THROWS_AS(spearman({1, 2}, {1, 2, 3}), DimensionError);
}

TEST_CASE("map comparison")
{
    const auto g = random_grid(6, 5, 1);
    const auto self = compare_maps(g, g);
    CHECK(self.rank_correlation == doctest::Approx(1.0));
    CHECK(self.pairs == 30);

    auto flipped = g;
    for (auto& p : flipped.psi) p = 1.0 - p;
    CHECK(compare_maps(g, flipped).rank_correlation == doctest::Approx(-1.0));

    auto holed = g;
    holed.at(2, 3) = std::numeric_limits<double>::quiet_NaN();
    CHECK(compare_maps(g, holed).pairs == 29);

    CHECK_THROWS_AS(compare_maps(g, random_grid(6, 4, 1)), DimensionError);
}

TEST_CASE("contours of a linear ramp are straight lines")
{
    const auto g0 = random_grid(5, 4, 2);
    auto g = g0;
    for (std::size_t i = 0; i < g.rows(); ++i)
        for (std::size_t j = 0; j < g.cols(); ++j) g.at(i, j) = g.mu_over_u[i];
    const auto levels = contours(g, {1.1});
    REQUIRE(levels.size() == 1);
    REQUIRE(levels[0].lines.size() == 1);
    const auto& line = levels[0].lines[0];
    CHECK(line.size() == g.cols());
    for (const auto& p : line) CHECK(p.x == doctest::Approx(1.1));

    const auto lv = default_levels(g, 3);
    REQUIRE(lv.size() == 3);
    CHECK(lv.front() > 0.0);
    CHECK(lv.back() < 3.0);
}

TEST_CASE("phase diagram csv")
{
    const auto empty = PhaseDiagramGrid::make({}, {}, MapSource::gutzwiller, 2);
    CHECK(phase_diagram_csv(empty) == "mu_over_u,kappa_over_u,psi,source,flags,zkappa_over_u\n");

    auto g = random_grid(7, 6, 3);
    g.psi[4] = 1.0 / 3.0;
    g.psi[5] = 1e-300;
    g.flag(1, 1) = "no peak;psi_b below 1e-8";
    g.flag(2, 0) = "failed: quoted \"text\", comma";
    g.at(2, 0) = std::numeric_limits<double>::quiet_NaN();
    const auto text = phase_diagram_csv(g);
    const auto back = parse_phase_diagram_csv(text);
    CHECK(back.mu_over_u == g.mu_over_u);
    CHECK(back.kappa_over_u == g.kappa_over_u);
    CHECK(back.coordination == 2);
    CHECK(back.source == g.source);
    CHECK(back.flags == g.flags);
    for (std::size_t k = 0; k < g.psi.size(); ++k)
        if (k != 2 * g.cols()) CHECK(back.psi[k] == g.psi[k]);
    CHECK(std::isnan(back.at(2, 0)));
    CHECK(phase_diagram_csv(back) == text);

    CHECK_THROWS(parse_phase_diagram_csv("a,b,c\n1,2,3\n"));
}

TEST_CASE("heatmap svg is well-formed xml")
{
    auto g = random_grid(40, 40, 4);
    g.at(3, 3) = std::numeric_limits<double>::quiet_NaN();
    HeatmapStyle style;
    style.title = "psi <a & b>";
    const auto overlay = contours(random_grid(40, 40, 5), {0.1, 0.2});
    CHECK(parses_as_xml(heatmap_svg(g, overlay, style)));
    CHECK(parses_as_xml(heatmap_svg(PhaseDiagramGrid::make({}, {}, MapSource::josephson, 2), {})));
}

TEST_CASE("atomic write")
{
    const auto dir = std::filesystem::temp_directory_path() / "jmott_atomic" / "nested";
    std::filesystem::remove_all(dir.parent_path());
    const auto file = dir / "out.csv";
    write_atomic(file, "first\n");
    write_atomic(file, "second\n");
    std::ifstream in(file);
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == "second\n");
    CHECK_FALSE(std::filesystem::exists(file.string() + ".tmp"));
    std::filesystem::remove_all(dir.parent_path());
}

TEST_CASE("run metadata")
{
    const auto out = run_protocol(small_map({"params.g=0"}));
    const auto meta = run_meta(out.record);
    CHECK(meta["software"]["version"] == software_version());
    CHECK(meta["failures"] == 0);
    CHECK(meta["config"]["params"]["g"] == 0.0);
}
