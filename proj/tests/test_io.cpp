#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qion/dynamics.hpp"
#include "qion/io.hpp"
#include "qion/runner.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace qion;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
    return lines;
}

} // namespace

TEST_CASE("format_g17 round-trips doubles") {
    for (double v : {0.0, 1.0 / 3.0, -1.7976931348623157e308, 2.2250738585072014e-308,
                     0.05001, 3.141592653589793}) {
        CHECK(std::stod(io::format_g17(v)) == v);
    }
}

TEST_CASE("trajectory CSV layout") {
    const auto params = qcore::QParams::from_tau(0.0, 0.0, 2.0, 0.0);
    const auto h = hamiltonian::build_h_harmonic(params, qcore::TruncationDim(3));
    const auto prop = dynamics::spectral_propagator(h);
    const auto psi0 = qstates::joint_state(qstates::InternalLevel::ground,
                                           qstates::fock_state(0, qcore::TruncationDim(3)));
    const auto traj = dynamics::evolve(prop, psi0, {0.0, 0.5, 1.0});

    const auto path = fs::temp_directory_path() / "qion_test_traj.csv";
    io::write_trajectory_csv(path, traj);
    const auto lines = lines_of(slurp(path));
    REQUIRE(lines.size() == 4); // header + 3 snapshots
    // header: t plus a re/im pair per basis index, g-block first
    CHECK(lines[0] == "t,re_0,im_0,re_1,im_1,re_2,im_2,re_3,im_3,re_4,im_4,re_5,im_5");
    // first row is the initial state at t = 0
    std::stringstream row(lines[1]);
    std::string cell;
    std::getline(row, cell, ',');
    CHECK(std::stod(cell) == 0.0);
    std::getline(row, cell, ',');
    CHECK(std::stod(cell) == 1.0); // re of |g,0>
    fs::remove(path);
}

TEST_CASE("qgrid CSV layout: axis headers and flat triplets") {
    const auto vac = qstates::joint_state(qstates::InternalLevel::ground,
                                          qstates::fock_state(0, qcore::TruncationDim(8)));
    observables::QGridSpec spec;
    spec.re_min = -1.0;
    spec.re_max = 1.0;
    spec.im_min = -2.0;
    spec.im_max = 2.0;
    spec.re_points = 5;
    spec.im_points = 3;
    const auto grid = observables::husimi_q(observables::reduced_motional_density(vac), spec);

    const auto path = fs::temp_directory_path() / "qion_test_grid.csv";
    io::write_qgrid_csv(path, grid);
    auto lines = lines_of(slurp(path));
    REQUIRE(lines.size() == 4); // axis header + one row per im value
    CHECK(lines[0] == "im\\re,-1,-0.5,0,0.5,1");
    CHECK(lines[1].rfind("-2,", 0) == 0);
    CHECK(lines[3].rfind("2,", 0) == 0);

    io::write_qgrid_flat_csv(path, grid);
    lines = lines_of(slurp(path));
    REQUIRE(lines.size() == 1 + 5 * 3);
    CHECK(lines[0] == "re,im,q");
    // row-major over (im, re): second row is (re = -0.5, im = -2)
    CHECK(lines[2].rfind("-0.5,-2,", 0) == 0);
    fs::remove(path);
}

TEST_CASE("a run is reproducible from its manifest alone") {
    const auto base = runner::parse_config(
        "q = 1.05\ndim = 48\ntime.max = 3\ntime.points = 61\nqgrid.points = 31\n"
        "qgrid.snapshots = 0, 3\nqgrid.flat = true\n");
    const auto dir1 = fs::temp_directory_path() / "qion_test_manifest_a";
    const auto dir2 = fs::temp_directory_path() / "qion_test_manifest_b";
    fs::remove_all(dir1);
    fs::remove_all(dir2);
    (void)runner::run_scenario(base, dir1);

    const auto manifest = nlohmann::json::parse(slurp(dir1 / "manifest.json"));
    const auto rebuilt = runner::config_from_json(manifest["config"]);
    (void)runner::run_scenario(rebuilt, dir2);

    for (const char* name :
         {"inversion.csv", "qgrid_0.csv", "qgrid_1.csv", "qgrid_0_flat.csv", "diagnostics.json",
          "manifest.json"}) {
        CHECK(slurp(dir1 / name) == slurp(dir2 / name));
    }
    fs::remove_all(dir1);
    fs::remove_all(dir2);
}
