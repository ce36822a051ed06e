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
// rthome: simulate | equilibrium | validate
//
// Exit codes: 0 success, 1 unexpected failure, 2 configuration error, 3 numerical error, 4 I/O error.

#include "rthome/config.h"
#include "rthome/error.h"
#include "rthome/scenario.h"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <chrono>
#include <exception>
#include <cstdio>
#include <fstream>
#include <optional>

namespace
{

constexpr int exit_config = 2;
constexpr int exit_numerical = 3;
constexpr int exit_io = 4;

struct Overrides {
    std::optional<std::string> out;
    std::optional<long> seed;
    std::optional<double> dt;
    std::optional<double> t_end;
    bool serial = false;
};

rthome::SimulationConfig load(const std::string& path, const Overrides& o)
{
    std::ifstream in(path);
    if (!in) {
        throw rthome::IoError(fmt::format("cannot open config '{}'", path));
    }
    rthome::SimulationConfig c;
    try {
        c = rthome::parse_config(in, std::filesystem::path(path).parent_path());
    }
    catch (const rthome::ConfigError& e) {
        throw rthome::ConfigError(fmt::format("{}: {}", path, e.what()));
    }
    if (o.out) {
        c.output_dir = *o.out;
    }
    if (o.seed) {
        if (*o.seed < 0) {
            throw rthome::ConfigError("--seed must be nonnegative");
        }
        c.placement.seed = static_cast<std::uint64_t>(*o.seed);
    }
    if (o.dt) {
        c.run.dt = *o.dt;
    }
    if (o.t_end) {
        c.run.t_end = *o.t_end;
    }
    if (o.serial) {
        c.run.execution = rthome::Execution::serial;
    }
    rthome::finalize_config(c);
    return c;
}

int simulate(const std::string& path, const Overrides& o)
{
    const auto config = load(path, o);
    const auto start = std::chrono::steady_clock::now();
    const auto report = rthome::run_scenario(config);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const auto& traj = report.trajectory;
    fmt::print("homes {}  grid {}x{}  dt {}  t_end {}  ({:.2f} s)\n", config.homes.size(), config.n1, config.n2,
               config.run.dt, config.run.t_end, seconds);
    if (!traj.global.empty()) {
        const auto& last = traj.global.back();
        fmt::print("t = {:g}: U = {:.6g}  V = {:.6g}  W = {:.6g}  total = {:.12g}\n", traj.times.back(), last.u,
                   last.v, last.w, last.total());
    }
    fmt::print("max relative per-home mass error {:.3e}; clamped values {}\n",
               traj.diagnostics.max_relative_mass_error, traj.diagnostics.steps.clamped_values);
    for (const auto& c : report.comparisons) {
        fmt::print("t = {:g}: max distance to equilibrium / n_i = {:.3e}\n", c.t, c.max_distance_over_n);
    }
    fmt::print("wrote {} files to {}\n", report.files.size(), config.output_dir.string());
    return 0;
}

int equilibrium(const std::string& path, const Overrides& o)
{
    const auto config = load(path, o);
    const auto report = rthome::run_equilibrium(config);
    fmt::print("equilibria for {} homes written to {}\n", report.equilibria.size(), config.output_dir.string());
    return 0;
}

int validate(const std::string& path)
{
    const auto config = load(path, {});
    const auto grid = config.grid();
    // Building the home set checks kernel normalizations as well.
    const rthome::HomeSet homes(grid, rthome::KernelSpec{config.params.sigma}, config.homes, config.velocities,
                                config.simpson_nodes);
    fmt::print("{}: ok ({} homes, {} people, grid {}x{}, dt {}, t_end {})\n", path, homes.size(),
               homes.total_occupancy(), config.n1, config.n2, config.run.dt, config.run.t_end);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Return-to-home commuting model simulator"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides overrides;

    auto* sim = app.add_subcommand("simulate", "run a scenario and write CSV outputs");
    sim->add_option("config", config_path, "scenario file")->required();
    sim->add_option("--out", overrides.out, "output directory");
    sim->add_option("--seed", overrides.seed, "home placement seed");
    sim->add_option("--dt", overrides.dt, "time step in days");
    sim->add_option("--t-end", overrides.t_end, "final time in days");
    sim->add_flag("--serial", overrides.serial, "step homes sequentially");

    auto* eq = app.add_subcommand("equilibrium", "compute per-home steady states only");
    eq->add_option("config", config_path, "scenario file")->required();
    eq->add_option("--out", overrides.out, "output directory");
    eq->add_option("--seed", overrides.seed, "home placement seed");

    auto* val = app.add_subcommand("validate", "check a scenario file and exit");
    val->add_option("config", config_path, "scenario file")->required();

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_config;
    }

    try {
        if (sim->parsed()) {
            return simulate(config_path, overrides);
        }
        if (eq->parsed()) {
            return equilibrium(config_path, overrides);
        }
        return validate(config_path);
    }
    catch (const rthome::ConfigError& e) {
        fmt::print(stderr, "configuration error: {}\n", e.what());
        return exit_config;
    }
    catch (const rthome::IoError& e) {
        fmt::print(stderr, "I/O error: {}\n", e.what());
        return exit_io;
    }
    catch (const rthome::NumericalError& e) {
        fmt::print(stderr, "numerical error: {}\n", e.what());
        return exit_numerical;
    }
    catch (const rthome::ResourceError& e) {
        fmt::print(stderr, "numerical error: {}\n", e.what());
        return exit_numerical;
    }
    catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }
}
