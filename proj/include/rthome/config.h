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
#ifndef RTHOME_CONFIG_H
#define RTHOME_CONFIG_H

#include "rthome/dynamics.h"
#include "rthome/grid.h"
#include "rthome/velocity.h"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rthome
{

struct VelocitySpec {
    enum class Kind { zero, constant, linear, rotation, radial, gridded };
    Kind kind = Kind::zero;
    Vec2 constant = Vec2::Zero();
    Mat2 matrix = Mat2::Zero();
    Vec2 offset = Vec2::Zero();
    double omega = 0.0;
    Point center{0.5, 0.5};
    /// radial: C_i(x) = kappa (x - y_i), one field per home
    double kappa = 0.0;
    /// gridded: CSV with columns m,c1,c2 in linear index order
    std::filesystem::path file;
};

struct HomePlacement {
    enum class Mode { random, explicit_list };
    Mode mode = Mode::random;
    long count = 100;
    std::uint64_t seed = 1;
    long occupancy_min = 50;
    long occupancy_max = 200;
    std::vector<Home> listed;
};

/**
 * @brief Everything needed to run one scenario.
 *
 * parse_config() fills the raw fields; finalize_config() places the homes,
 * builds velocity fields and applies every load-time check.
 */
struct SimulationConfig {
    Bounds bounds{0.0, 1.0, 0.0, 1.0};
    int n1 = 50;
    int n2 = 50;
    ModelParams params;
    CircadianSchedule schedule;
    HomePlacement placement;
    VelocitySpec velocity;
    RunOptions run{1e-3, 2.0, 0.01, {1.0, 2.0}, Execution::parallel};
    std::filesystem::path output_dir = "out";
    int simpson_nodes = 0;

    // filled by finalize_config()
    std::vector<Home> homes;
    std::vector<VelocityField> velocities;

    Grid grid() const
    {
        return Grid(bounds, n1, n2);
    }
};

/// @throws ConfigError with the offending line or key.
SimulationConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = ".");

/// Place homes deterministically from the seed, build velocities and validate stability bounds.
void finalize_config(SimulationConfig& config);

/// parse_config + finalize_config. @throws IoError if the file cannot be read.
SimulationConfig load_config(const std::filesystem::path& path);

/// Homes drawn uniformly in the domain with integer occupancies in [min, max].
std::vector<Home> place_random_homes(const Bounds& bounds, long count, std::uint64_t seed, long occupancy_min,
                                     long occupancy_max);

} // namespace rthome

#endif // RTHOME_CONFIG_H
