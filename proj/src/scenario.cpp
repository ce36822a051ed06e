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
#include "rthome/scenario.h"
#include "rthome/csv.h"
#include "rthome/error.h"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>

namespace rthome
{

std::string time_tag(double t)
{
    return fmt::format("t{:g}", t);
}

std::vector<EquilibriumComparison> compare_to_equilibrium(const Trajectory& trajectory, const HomeSet& homes,
                                                          const std::vector<FieldEquilibrium>& equilibria)
{
    std::vector<EquilibriumComparison> out;
    for (const auto& snap : trajectory.snapshots) {
        EquilibriumComparison c;
        c.t = snap.t;
        for (std::size_t i = 0; i < homes.size(); ++i) {
            const auto& s = snap.homes[i];
            const auto& eq = equilibria[i];
            const double n = homes.home(i).occupancy;
            c.max_rel_u = std::max(c.max_rel_u, std::abs(s.u - eq.u) / n);
            c.max_rel_v = std::max(c.max_rel_v, (s.v - eq.v).lpNorm<Eigen::Infinity>() /
                                                    eq.v.lpNorm<Eigen::Infinity>());
            c.max_rel_w = std::max(c.max_rel_w, (s.w - eq.w).lpNorm<Eigen::Infinity>() /
                                                    eq.w.lpNorm<Eigen::Infinity>());
            c.max_distance_over_n = std::max(c.max_distance_over_n, max_distance(s, eq) / n);
        }
        out.push_back(c);
    }
    return out;
}

Field initial_density(const Grid& grid, const HomeSet& homes, const KernelSpec& kernel)
{
    Field out = grid.zeros();
    for (const auto& h : homes.homes()) {
        out += grid.sample([&](Point x) { return h.occupancy * gaussian_kernel(x, h.location, kernel); });
    }
    return out;
}

namespace
{

std::ofstream open(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
    }
    return out;
}

void close(std::ofstream& out, const std::filesystem::path& path)
{
    out.flush();
    if (!out) {
        throw IoError(fmt::format("write to '{}' failed", path.string()));
    }
}

void prepare_dir(const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw IoError(fmt::format("cannot create output directory '{}': {}", dir.string(), ec.message()));
    }
}

HomeSet make_home_set(const SimulationConfig& config, const Grid& grid)
{
    return HomeSet(grid, KernelSpec{config.params.sigma}, config.homes, config.velocities, config.simpson_nodes);
}

void write_home_table(const HomeSet& homes, const std::filesystem::path& path)
{
    auto out = open(path);
    out << "i,y1,y2,n_i\n";
    for (std::size_t i = 0; i < homes.size(); ++i) {
        const auto& h = homes.home(i);
        out << i << ',' << format_double(h.location.x1) << ',' << format_double(h.location.x2) << ','
            << format_double(h.occupancy) << '\n';
    }
    close(out, path);
}

} // namespace

ScenarioReport run_scenario(const SimulationConfig& config)
{
    if (config.homes.empty()) {
        throw ConfigError("configuration was not finalized: no homes placed");
    }
    const Grid grid = config.grid();
    const HomeSet homes = make_home_set(config, grid);
    const auto& dir = config.output_dir;
    prepare_dir(dir);

    ScenarioReport report;
    report.trajectory = run_simulation(grid, config.params, config.schedule, homes, config.run);
    const auto& traj = report.trajectory;
    const auto equilibria = field_equilibria(grid, homes, config.params, config.run.execution);
    report.comparisons = compare_to_equilibrium(traj, homes, equilibria);

    auto path = dir / "aggregates.csv";
    write_timeseries(traj, path);
    report.files.push_back(path);

    path = dir / "home_aggregates.csv";
    {
        auto out = open(path);
        out << "t,i,u_i,int_v_i,int_w_i\n";
        for (std::size_t k = 0; k < traj.times.size(); ++k) {
            for (std::size_t i = 0; i < homes.size(); ++i) {
                const auto& a = traj.per_home[k][i];
                out << format_double(traj.times[k]) << ',' << i << ',' << format_double(a.u) << ','
                    << format_double(a.v) << ',' << format_double(a.w) << '\n';
            }
        }
        close(out, path);
    }
    report.files.push_back(path);

    path = dir / "homes.csv";
    write_home_table(homes, path);
    report.files.push_back(path);

    path = dir / "initial_density.csv";
    write_snapshot(initial_density(grid, homes, KernelSpec{config.params.sigma}), grid, path);
    report.files.push_back(path);

    for (const auto& snap : traj.snapshots) {
        const auto tag = time_tag(snap.t);
        path = dir / fmt::format("homes_{}.csv", tag);
        {
            auto out = open(path);
            out << "i,y1,y2,n_i,u_i,int_v_i,int_w_i\n";
            for (std::size_t i = 0; i < homes.size(); ++i) {
                const auto& h = homes.home(i);
                const auto& s = snap.homes[i];
                out << i << ',' << format_double(h.location.x1) << ',' << format_double(h.location.x2) << ','
                    << format_double(h.occupancy) << ',' << format_double(s.u) << ','
                    << format_double(euler_sum(grid, s.v)) << ',' << format_double(euler_sum(grid, s.w)) << '\n';
            }
            close(out, path);
        }
        report.files.push_back(path);
        path = dir / fmt::format("travelers_{}.csv", tag);
        write_snapshot(snap.travelers, grid, path);
        report.files.push_back(path);
        path = dir / fmt::format("workers_{}.csv", tag);
        write_snapshot(snap.workers, grid, path);
        report.files.push_back(path);
    }

    path = dir / "equilibrium_comparison.csv";
    {
        auto out = open(path);
        out << "t,max_rel_u,max_rel_v,max_rel_w,max_distance_over_n\n";
        for (const auto& c : report.comparisons) {
            out << format_double(c.t) << ',' << format_double(c.max_rel_u) << ',' << format_double(c.max_rel_v)
                << ',' << format_double(c.max_rel_w) << ',' << format_double(c.max_distance_over_n) << '\n';
        }
        close(out, path);
    }
    report.files.push_back(path);
    return report;
}

EquilibriumReport run_equilibrium(const SimulationConfig& config)
{
    if (config.homes.empty()) {
        throw ConfigError("configuration was not finalized: no homes placed");
    }
    const Grid grid = config.grid();
    const HomeSet homes = make_home_set(config, grid);
    prepare_dir(config.output_dir);

    EquilibriumReport report;
    report.equilibria = field_equilibria(grid, homes, config.params, config.run.execution);

    auto path = config.output_dir / "equilibrium_homes.csv";
    {
        auto out = open(path);
        out << "i,y1,y2,n_i,u_i,int_v_i,int_w_i\n";
        for (std::size_t i = 0; i < homes.size(); ++i) {
            const auto& h = homes.home(i);
            const auto& eq = report.equilibria[i];
            out << i << ',' << format_double(h.location.x1) << ',' << format_double(h.location.x2) << ','
                << format_double(h.occupancy) << ',' << format_double(eq.u) << ','
                << format_double(euler_sum(grid, eq.v)) << ',' << format_double(euler_sum(grid, eq.w)) << '\n';
        }
        close(out, path);
    }
    report.files.push_back(path);

    Field travelers = grid.zeros(), workers = grid.zeros();
    for (const auto& eq : report.equilibria) {
        travelers += eq.v;
        workers += eq.w;
    }
    path = config.output_dir / "equilibrium_travelers.csv";
    write_snapshot(travelers, grid, path);
    report.files.push_back(path);
    path = config.output_dir / "equilibrium_workers.csv";
    write_snapshot(workers, grid, path);
    report.files.push_back(path);
    return report;
}

} // namespace rthome
