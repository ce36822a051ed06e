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
#ifndef RTHOME_CSV_H
#define RTHOME_CSV_H

#include "rthome/dynamics.h"
#include "rthome/grid.h"

#include <filesystem>
#include <string>
#include <vector>

namespace rthome
{

/// Shortest decimal text that reads back to the same double (17 significant digits).
std::string format_double(double value);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// @throws IoError if the column is missing.
    std::size_t column(const std::string& name) const;
};

/// @throws IoError on open failure or ragged rows.
CsvTable read_csv(const std::filesystem::path& path);

/// Columns t,U,V,W,total; one row per recorded time.
void write_timeseries(const Trajectory& trajectory, const std::filesystem::path& path);

/// Columns m,i,j,x1,x2,value with 1-based indices, rows ordered by m.
void write_snapshot(const Field& field, const Grid& grid, const std::filesystem::path& path);

/// Reads the value column of a file written by write_snapshot.
Field read_snapshot(const std::filesystem::path& path);

} // namespace rthome

#endif // RTHOME_CSV_H
