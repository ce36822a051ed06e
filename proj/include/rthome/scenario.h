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
#ifndef RTHOME_SCENARIO_H
#define RTHOME_SCENARIO_H

#include "rthome/config.h"
#include "rthome/dynamics.h"
#include "rthome/equilibrium.h"

#include <filesystem>
#include <vector>

namespace rthome
{

/// Largest relative deviations of a snapshot from the per-home equilibria.
struct EquilibriumComparison {
    double t = 0.0;
    double max_rel_u = 0.0; ///< max_i |u_i - u_eq| / n_i
    double max_rel_v = 0.0; ///< max_i |v_i - v_eq|_inf / |v_eq|_inf
    double max_rel_w = 0.0;
    double max_distance_over_n = 0.0; ///< max_i max_distance / n_i
};

std::vector<EquilibriumComparison> compare_to_equilibrium(const Trajectory& trajectory, const HomeSet& homes,
                                                          const std::vector<FieldEquilibrium>& equilibria);

/// x -> sum_i n_i g(x - y_i) at cell centers.
Field initial_density(const Grid& grid, const HomeSet& homes, const KernelSpec& kernel);

struct ScenarioReport {
    std::vector<std::filesystem::path> files;
    Trajectory trajectory;
    std::vector<EquilibriumComparison> comparisons;
};

/**
 * @brief Run a finalized configuration and write its CSV outputs into config.output_dir.
 *
 * Files: aggregates.csv, home_aggregates.csv, homes.csv, initial_density.csv,
 * homes_t<T>.csv, travelers_t<T>.csv and workers_t<T>.csv per snapshot time,
 * and equilibrium_comparison.csv.
 */
ScenarioReport run_scenario(const SimulationConfig& config);

struct EquilibriumReport {
    std::vector<std::filesystem::path> files;
    std::vector<FieldEquilibrium> equilibria;
};

/// Writes equilibrium_homes.csv, equilibrium_travelers.csv and equilibrium_workers.csv.
EquilibriumReport run_equilibrium(const SimulationConfig& config);

/// Snapshot file stem suffix: 2 -> "t2", 0.5 -> "t0.5".
std::string time_tag(double t);

} // namespace rthome

#endif // RTHOME_SCENARIO_H
