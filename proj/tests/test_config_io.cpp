/*
* Copyright (C) 2026 rthome contributors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
*/
#include "rthome/config.h"
#include "rthome/csv.h"
#include "rthome/error.h"
#include "rthome/scenario.h"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

using namespace rthome;
namespace fs = std::filesystem;

namespace
{

fs::path scratch(const std::string& name)
{
    const fs::path dir = fs::temp_directory_path() / ("rthome_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

SimulationConfig parse(const std::string& text)
{
    std::istringstream in(text);
    return parse_config(in);
}

int run_cli(const std::string& args)
{
    const std::string cmd = std::string(RTHOME_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const char* small_scenario = R"(
[domain]
n1 = 20
n2 = 20
[homes]
count = 5
seed = 9
[time]
dt = 0.002
t_end = 1
output_interval = 0.1
snapshot_times = 0.5, 1
)";

} // namespace

TEST(Config, reference_defaults_file)
{
    const auto c = load_config(fs::path(RTHOME_SCENARIO_DIR) / "default.ini");
    EXPECT_EQ(c.params.gamma, 2.0);
    EXPECT_EQ(c.params.alpha, 12.0);
    EXPECT_EQ(c.params.chi, 2.4);
    EXPECT_EQ(c.params.epsilon, 1.0);
    EXPECT_EQ(c.params.sigma, 0.05);
    EXPECT_EQ(c.n1, 50);
    EXPECT_EQ(c.n2, 50);
    EXPECT_EQ(c.homes.size(), 100u);
    EXPECT_EQ(c.run.dt, 1e-3);
    EXPECT_EQ(c.run.t_end, 2.0);
    for (const auto& h : c.homes) {
        EXPECT_GE(h.occupancy, 50.0);
        EXPECT_LE(h.occupancy, 200.0);
        EXPECT_EQ(h.occupancy, std::round(h.occupancy));
    }
}

TEST(Config, every_shipped_scenario_loads)
{
    int count = 0;
    for (const auto& entry : fs::directory_iterator(RTHOME_SCENARIO_DIR)) {
        if (entry.path().extension() == ".ini") {
            EXPECT_NO_THROW(load_config(entry.path())) << entry.path();
            ++count;
        }
    }
    EXPECT_GE(count, 1);
}

TEST(Config, same_seed_same_homes)
{
    auto a = parse(small_scenario), b = parse(small_scenario);
    finalize_config(a);
    finalize_config(b);
    ASSERT_EQ(a.homes.size(), b.homes.size());
    for (std::size_t i = 0; i < a.homes.size(); ++i) {
        EXPECT_EQ(a.homes[i].location.x1, b.homes[i].location.x1);
        EXPECT_EQ(a.homes[i].location.x2, b.homes[i].location.x2);
        EXPECT_EQ(a.homes[i].occupancy, b.homes[i].occupancy);
    }
    auto c = parse(small_scenario);
    c.placement.seed = 10;
    finalize_config(c);
    EXPECT_NE(a.homes[0].location.x1, c.homes[0].location.x1);
}

TEST(Config, explicit_homes_and_circadian_sections)
{
    auto c = parse(R"(
[homes]
placement = explicit
list = 0.2 0.3 100; 0.9 0.9 40
[circadian]
gamma_profile = piecewise
gamma_windows = 0.25 0.5 2
chi_profile = sinusoidal
chi_amplitude = 0.5
[velocity]
kind = rotation
omega = 1.5
)");
    finalize_config(c);
    ASSERT_EQ(c.homes.size(), 2u);
    EXPECT_EQ(c.homes[1].occupancy, 40.0);
    EXPECT_EQ(c.schedule.gamma.at(0.3), 2.0);
    EXPECT_EQ(c.schedule.gamma.at(0.6), 1.0);
    EXPECT_NEAR(c.schedule.chi.at(0.0), 1.5, 1e-15);
    ASSERT_EQ(c.velocities.size(), 1u);
    EXPECT_NEAR(c.velocities[0]({1.0, 0.5})[1], 0.75, 1e-15);
}

TEST(Config, radial_field_per_home)
{
    auto c = parse(R"(
[homes]
placement = explicit
list = 0.2 0.3 100; 0.7 0.6 40
[velocity]
kind = radial
kappa = 0.5
)");
    finalize_config(c);
    ASSERT_EQ(c.velocities.size(), 2u);
    EXPECT_EQ(c.homes[1].velocity, 1u);
    const Vec2 v = c.velocities[1]({0.9, 0.6});
    EXPECT_NEAR(v[0], 0.1, 1e-15);
    EXPECT_NEAR(v[1], 0.0, 1e-15);
}

TEST(Config, gridded_velocity_from_csv)
{
    const auto dir = scratch("gridded");
    {
        std::ofstream f(dir / "vel.csv");
        f << "m,c1,c2\n";
        for (int m = 1; m <= 16; ++m) {
            f << m << ",0.5,-0.25\n";
        }
    }
    std::ofstream(dir / "s.ini") << "[domain]\nn1 = 4\nn2 = 4\n[homes]\ncount = 2\n"
                                    "[velocity]\nkind = gridded\nfile = vel.csv\n";
    const auto c = load_config(dir / "s.ini");
    EXPECT_NEAR(c.velocities[0]({0.4, 0.4})[0], 0.5, 1e-15);
    EXPECT_NEAR(c.velocities[0]({0.4, 0.4})[1], -0.25, 1e-15);
}

TEST(Config, errors_are_reported)
{
    auto coarse = parse("[domain]\nn1 = 1\n[homes]\ncount=2\n");
    EXPECT_THROW(finalize_config(coarse), ConfigError);
    EXPECT_THROW(parse("[bogus]\nx = 1\n"), ConfigError);
    EXPECT_THROW(parse("[model]\nbeta = 1\n"), ConfigError);
    EXPECT_THROW(parse("[model]\ngamma = fast\n"), ConfigError);
    EXPECT_THROW(parse("[velocity]\nkind = swirl\n"), ConfigError);
    EXPECT_THROW(parse("this is not ini\n"), ConfigError);

    auto outside = parse("[homes]\nplacement = explicit\nlist = 0.5 0.5 10; 1.5 0.5 10\n");
    try {
        finalize_config(outside);
        FAIL() << "expected ConfigError";
    }
    catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("home 1"), std::string::npos) << e.what();
    }

    auto zero_rate = parse("[model]\nchi = 0\n");
    EXPECT_THROW(finalize_config(zero_rate), ConfigError);
    auto big_dt = parse("[time]\ndt = 0.1\nt_end = 1\n");
    EXPECT_THROW(finalize_config(big_dt), ConfigError);
    auto ragged = parse("[time]\ndt = 0.001\nt_end = 1.0005\n");
    EXPECT_THROW(finalize_config(ragged), ConfigError);
    auto late = parse("[time]\nt_end = 1\nsnapshot_times = 2\n");
    EXPECT_THROW(finalize_config(late), ConfigError);
    auto fast = parse("[velocity]\nkind = constant\nc1 = 100\n");
    EXPECT_THROW(finalize_config(fast), ConfigError);
    EXPECT_THROW(load_config("/nonexistent/rthome.ini"), IoError);
}

TEST(Csv, number_round_trip)
{
    for (double x : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 12360.0}) {
        EXPECT_EQ(std::stod(format_double(x)), x);
    }
}

TEST(Csv, empty_trajectory_gives_header_only)
{
    const auto dir = scratch("empty");
    write_timeseries(Trajectory{}, dir / "ts.csv");
    std::ifstream in(dir / "ts.csv");
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str(), "t,U,V,W,total\n");
    const auto table = read_csv(dir / "ts.csv");
    EXPECT_TRUE(table.rows.empty());
    EXPECT_EQ(table.column("W"), 3u);
    EXPECT_THROW(table.column("X"), IoError);
}

TEST(Csv, snapshot_round_trip_and_layout)
{
    const auto dir = scratch("snapshot");
    const Grid g = build_grid({0.0, 2.0, 0.0, 1.0}, 5, 3);
    const Field f = g.sample([](Point x) { return std::sin(x.x1) * std::exp(x.x2) / 3.0; });
    write_snapshot(f, g, dir / "s.csv");
    EXPECT_EQ(read_snapshot(dir / "s.csv"), f);
    const auto table = read_csv(dir / "s.csv");
    ASSERT_EQ(table.rows.size(), 15u);
    const auto& row = table.rows[12]; // m = 13 -> (i, j) = (3, 3)
    EXPECT_EQ(row[table.column("m")], "13");
    EXPECT_EQ(row[table.column("i")], "3");
    EXPECT_EQ(row[table.column("j")], "3");
    EXPECT_DOUBLE_EQ(std::stod(row[table.column("x1")]), g.x1(2));
    EXPECT_THROW(read_csv(dir / "missing.csv"), IoError);
}

TEST(Scenario, small_run_outputs)
{
    auto c = parse(small_scenario);
    c.output_dir = scratch("scenario");
    finalize_config(c);
    const auto report = run_scenario(c);
    for (const char* name : {"aggregates.csv", "home_aggregates.csv", "homes.csv", "initial_density.csv",
                             "homes_t0.5.csv", "travelers_t1.csv", "workers_t1.csv", "equilibrium_comparison.csv"}) {
        EXPECT_TRUE(fs::exists(c.output_dir / name)) << name;
    }
    const auto agg = read_csv(c.output_dir / "aggregates.csv");
    ASSERT_EQ(agg.rows.size(), 11u);
    double total = 0.0;
    for (const auto& h : c.homes) {
        total += h.occupancy;
    }
    for (const auto& row : agg.rows) {
        EXPECT_NEAR(std::stod(row[agg.column("total")]), total, 1e-8 * total);
    }
    const Field v = read_snapshot(c.output_dir / "travelers_t1.csv");
    const Field w = read_snapshot(c.output_dir / "workers_t1.csv");
    EXPECT_EQ(v.size(), 400);
    // totals follow the forward Euler aggregate system exactly, so W(1)/V(1) is known independently
    const auto ode = run_aggregate_ode({1.0, 0.0, 0.0}, c.params, 1.0, c.run.dt, OdeMethod::forward_euler);
    EXPECT_NEAR(w.sum() / v.sum(), ode.back().state.W / ode.back().state.V, 1e-9);
    EXPECT_NEAR(w.sum() / v.sum(), 5.0, 0.15);
    ASSERT_EQ(report.comparisons.size(), 2u);
    EXPECT_LT(report.comparisons[1].max_distance_over_n, report.comparisons[0].max_distance_over_n);
}

TEST(Scenario, equilibrium_files)
{
    auto c = parse(small_scenario);
    c.output_dir = scratch("equilibrium");
    finalize_config(c);
    const auto report = run_equilibrium(c);
    ASSERT_EQ(report.equilibria.size(), 5u);
    const auto table = read_csv(c.output_dir / "equilibrium_homes.csv");
    ASSERT_EQ(table.rows.size(), 5u);
    for (const auto& row : table.rows) {
        const double n = std::stod(row[table.column("n_i")]);
        EXPECT_NEAR(std::stod(row[table.column("u_i")]) / n, 0.5, 1e-12);
        EXPECT_NEAR(std::stod(row[table.column("int_v_i")]) / n, 1.0 / 12.0, 1e-8);
        EXPECT_NEAR(std::stod(row[table.column("int_w_i")]) / n, 5.0 / 12.0, 1e-8);
    }
    const Field v = read_snapshot(c.output_dir / "equilibrium_travelers.csv");
    const Field w = read_snapshot(c.output_dir / "equilibrium_workers.csv");
    EXPECT_LT((w - 5.0 * v).cwiseAbs().maxCoeff(), 1e-10 * w.maxCoeff());
}

TEST(Scenario, deterministic_output_files)
{
    auto read_all = [](const fs::path& p) {
        std::ifstream in(p);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    };
    auto a = parse(small_scenario), b = parse(small_scenario);
    a.output_dir = scratch("det_a");
    b.output_dir = scratch("det_b");
    b.run.execution = Execution::serial;
    a.run.t_end = b.run.t_end = 0.2;
    a.run.snapshot_times = b.run.snapshot_times = {0.2};
    finalize_config(a);
    finalize_config(b);
    run_scenario(a);
    run_scenario(b);
    for (const auto& entry : fs::directory_iterator(a.output_dir)) {
        EXPECT_EQ(read_all(entry.path()), read_all(b.output_dir / entry.path().filename())) << entry.path();
    }
}

TEST(Cli, exit_codes)
{
    const auto dir = scratch("cli");
    const fs::path ok = dir / "ok.ini";
    std::ofstream(ok) << small_scenario;
    EXPECT_EQ(run_cli("validate " + ok.string()), 0);
    EXPECT_EQ(run_cli("simulate " + ok.string() + " --out " + (dir / "out").string()), 0);
    EXPECT_TRUE(fs::exists(dir / "out" / "aggregates.csv"));
    EXPECT_EQ(run_cli("equilibrium " + ok.string() + " --out " + (dir / "eq").string()), 0);

    const fs::path bad = dir / "bad.ini";
    std::ofstream(bad) << "[model]\ngamma = -1\n";
    EXPECT_EQ(run_cli("validate " + bad.string()), 2);
    EXPECT_EQ(run_cli("simulate"), 2);
    EXPECT_EQ(run_cli("simulate " + ok.string() + " --dt 0.5"), 2);

    const fs::path singular = dir / "singular.ini";
    std::ofstream(singular) << "[model]\nsigma = 1e6\n[homes]\ncount = 2\n";
    EXPECT_EQ(run_cli("validate " + singular.string()), 3);

    EXPECT_EQ(run_cli("validate " + (dir / "missing.ini").string()), 4);
}
