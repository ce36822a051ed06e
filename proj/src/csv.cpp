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
#include "rthome/csv.h"
#include "rthome/error.h"

#include <fmt/format.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace rthome
{

std::string format_double(double value)
{
    return fmt::format("{:.17g}", value);
}

std::size_t CsvTable::column(const std::string& name) const
{
    for (std::size_t k = 0; k < header.size(); ++k) {
        if (header[k] == name) {
            return k;
        }
    }
    throw IoError(fmt::format("CSV column '{}' not found", name));
}

namespace
{

std::vector<std::string> split_line(const std::string& line)
{
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

std::ofstream open_for_writing(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
    }
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path)
{
    out.flush();
    if (!out) {
        throw IoError(fmt::format("write to '{}' failed", path.string()));
    }
}

} // namespace

CsvTable read_csv(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
    }
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) {
        throw IoError(fmt::format("'{}' is empty", path.string()));
    }
    table.header = split_line(line);
    long number = 1;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty()) {
            continue;
        }
        auto cells = split_line(line);
        if (cells.size() != table.header.size()) {
            throw IoError(fmt::format("{}:{}: expected {} fields, got {}", path.string(), number,
                                      table.header.size(), cells.size()));
        }
        table.rows.push_back(std::move(cells));
    }
    return table;
}

void write_timeseries(const Trajectory& trajectory, const std::filesystem::path& path)
{
    auto out = open_for_writing(path);
    out << "t,U,V,W,total\n";
    for (std::size_t k = 0; k < trajectory.times.size(); ++k) {
        const auto& g = trajectory.global[k];
        out << format_double(trajectory.times[k]) << ',' << format_double(g.u) << ',' << format_double(g.v) << ','
            << format_double(g.w) << ',' << format_double(g.total()) << '\n';
    }
    finish(out, path);
}

void write_snapshot(const Field& field, const Grid& grid, const std::filesystem::path& path)
{
    if (static_cast<std::size_t>(field.size()) != grid.size()) {
        throw IoError(fmt::format("snapshot has {} values for a grid of {}", field.size(), grid.size()));
    }
    auto out = open_for_writing(path);
    out << "m,i,j,x1,x2,value\n";
    for (int j = 0; j < grid.n2(); ++j) {
        for (int i = 0; i < grid.n1(); ++i) {
            out << grid.linear_index(i + 1, j + 1) << ',' << i + 1 << ',' << j + 1 << ','
                << format_double(grid.x1(i)) << ',' << format_double(grid.x2(j)) << ','
                << format_double(field[static_cast<Eigen::Index>(grid.offset(i, j))]) << '\n';
        }
    }
    finish(out, path);
}

Field read_snapshot(const std::filesystem::path& path)
{
    const auto table = read_csv(path);
    const auto col = table.column("value");
    Field out(static_cast<Eigen::Index>(table.rows.size()));
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& text = table.rows[r][col];
        char* end = nullptr;
        const double v = std::strtod(text.c_str(), &end);
        if (end == text.c_str() || *end != '\0') {
            throw IoError(fmt::format("{}: row {}: '{}' is not a number", path.string(), r + 2, text));
        }
        out[static_cast<Eigen::Index>(r)] = v;
    }
    return out;
}

} // namespace rthome
