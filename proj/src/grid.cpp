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
#include "rthome/grid.h"
#include "rthome/error.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace rthome
{

Grid::Grid(const Bounds& bounds, int n1, int n2)
    : m_bounds(bounds)
    , m_n1(n1)
    , m_n2(n2)
    , m_dx1(0.0)
    , m_dx2(0.0)
{
    if (!(bounds.b1 > bounds.a1) || !(bounds.b2 > bounds.a2)) {
        throw ConfigError(fmt::format("degenerate domain [{}, {}] x [{}, {}]", bounds.a1, bounds.b1, bounds.a2,
                                      bounds.b2));
    }
    if (n1 < 2 || n2 < 2) {
        throw ConfigError(fmt::format("grid needs at least 2 cells per axis, got {} x {}", n1, n2));
    }
    m_dx1 = (bounds.b1 - bounds.a1) / n1;
    m_dx2 = (bounds.b2 - bounds.a2) / n2;
}

long Grid::linear_index(int i, int j) const
{
    return static_cast<long>(j - 1) * m_n1 + i;
}

std::pair<int, int> Grid::cell_of(long m) const
{
    // mod(m, n1) with the convention that a remainder of 0 means the last column
    auto i = static_cast<int>(m % m_n1);
    if (i == 0) {
        i = m_n1;
    }
    const auto j = static_cast<int>((m - i) / m_n1) + 1;
    return {i, j};
}

bool Grid::contains(const Point& p) const
{
    return p.x1 >= m_bounds.a1 && p.x1 <= m_bounds.b1 && p.x2 >= m_bounds.a2 && p.x2 <= m_bounds.b2;
}

Field Grid::sample(const std::function<double(Point)>& f) const
{
    Field out(static_cast<Eigen::Index>(size()));
    for (int j = 0; j < m_n2; ++j) {
        for (int i = 0; i < m_n1; ++i) {
            out[static_cast<Eigen::Index>(offset(i, j))] = f({x1(i), x2(j)});
        }
    }
    return out;
}

Grid build_grid(const Bounds& bounds, int n1, int n2)
{
    return Grid(bounds, n1, n2);
}

void KernelSpec::validate() const
{
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw ConfigError(fmt::format("kernel width sigma must be positive, got {}", sigma));
    }
}

double gaussian_kernel(const Point& x, const Point& y, const KernelSpec& spec)
{
    const double d1 = x.x1 - y.x1;
    const double d2 = x.x2 - y.x2;
    const double s2 = spec.sigma * spec.sigma;
    return std::exp(-(d1 * d1 + d2 * d2) / (2.0 * s2)) / (2.0 * std::numbers::pi * s2);
}

namespace
{

std::vector<double> simpson_weights(int nodes, double h)
{
    std::vector<double> w(static_cast<std::size_t>(nodes));
    for (int k = 0; k < nodes; ++k) {
        if (k == 0 || k == nodes - 1) {
            w[static_cast<std::size_t>(k)] = h / 3.0;
        }
        else {
            w[static_cast<std::size_t>(k)] = (k % 2 == 1 ? 4.0 : 2.0) * h / 3.0;
        }
    }
    return w;
}

void check_simpson_nodes(int n1_nodes, int n2_nodes)
{
    if (n1_nodes < 3 || n2_nodes < 3 || n1_nodes % 2 == 0 || n2_nodes % 2 == 0) {
        throw ConfigError(
            fmt::format("composite Simpson rule needs odd node counts >= 3, got {} x {}", n1_nodes, n2_nodes));
    }
}

} // namespace

double simpson_2d(std::span<const double> values, int n1_nodes, int n2_nodes, const Bounds& bounds)
{
    check_simpson_nodes(n1_nodes, n2_nodes);
    if (values.size() != static_cast<std::size_t>(n1_nodes) * static_cast<std::size_t>(n2_nodes)) {
        throw ConfigError(fmt::format("Simpson input has {} values, expected {} x {}", values.size(), n1_nodes,
                                      n2_nodes));
    }
    const auto w1 = simpson_weights(n1_nodes, (bounds.b1 - bounds.a1) / (n1_nodes - 1));
    const auto w2 = simpson_weights(n2_nodes, (bounds.b2 - bounds.a2) / (n2_nodes - 1));
    double total = 0.0;
    for (int j = 0; j < n2_nodes; ++j) {
        double row = 0.0;
        for (int i = 0; i < n1_nodes; ++i) {
            row += w1[static_cast<std::size_t>(i)] *
                   values[static_cast<std::size_t>(j) * static_cast<std::size_t>(n1_nodes) + static_cast<std::size_t>(i)];
        }
        total += w2[static_cast<std::size_t>(j)] * row;
    }
    return total;
}

double simpson_2d(const std::function<double(Point)>& f, const Bounds& bounds, int n1_nodes, int n2_nodes)
{
    check_simpson_nodes(n1_nodes, n2_nodes);
    const double h1 = (bounds.b1 - bounds.a1) / (n1_nodes - 1);
    const double h2 = (bounds.b2 - bounds.a2) / (n2_nodes - 1);
    std::vector<double> values(static_cast<std::size_t>(n1_nodes) * static_cast<std::size_t>(n2_nodes));
    for (int j = 0; j < n2_nodes; ++j) {
        const double x2 = (j == n2_nodes - 1) ? bounds.b2 : bounds.a2 + j * h2;
        for (int i = 0; i < n1_nodes; ++i) {
            const double x1 = (i == n1_nodes - 1) ? bounds.b1 : bounds.a1 + i * h1;
            values[static_cast<std::size_t>(j) * static_cast<std::size_t>(n1_nodes) + static_cast<std::size_t>(i)] =
                f({x1, x2});
        }
    }
    return simpson_2d(values, n1_nodes, n2_nodes, bounds);
}

int default_simpson_nodes(const Bounds& bounds, const KernelSpec& spec)
{
    const double longest = std::max(bounds.b1 - bounds.a1, bounds.b2 - bounds.a2);
    auto intervals = static_cast<int>(std::ceil(16.0 * longest / spec.sigma));
    intervals = std::max(intervals, 100);
    if (intervals % 2 == 1) {
        ++intervals;
    }
    return intervals + 1;
}

double normalization_G(const Point& y, const Grid& grid, const KernelSpec& spec, int nodes)
{
    spec.validate();
    if (!grid.contains(y)) {
        throw ConfigError(fmt::format("home location ({}, {}) lies outside the domain", y.x1, y.x2));
    }
    if (nodes == 0) {
        nodes = default_simpson_nodes(grid.bounds(), spec);
    }
    return simpson_2d([&](Point x) { return gaussian_kernel(x, y, spec); }, grid.bounds(), nodes, nodes);
}

namespace
{

double checked_normalization(const Point& y, const Grid& grid, const KernelSpec& spec, int nodes)
{
    const double G = normalization_G(y, grid, spec, nodes);
    if (!(G >= singular_normalization_threshold)) {
        throw NumericalError(fmt::format("singular kernel normalization G = {} at ({}, {})", G, y.x1, y.x2));
    }
    return G;
}

} // namespace

double rho(const Point& x, const Point& y, const Grid& grid, const KernelSpec& spec, int nodes)
{
    return gaussian_kernel(x, y, spec) / checked_normalization(y, grid, spec, nodes);
}

double euler_sum(const Grid& grid, const Field& field)
{
    return grid.cell_area() * field.sum();
}

SourceProfile make_source_profile(const Point& y, const Grid& grid, const KernelSpec& spec, int nodes)
{
    SourceProfile profile;
    profile.normalization = checked_normalization(y, grid, spec, nodes);
    profile.density = grid.sample([&](Point x) { return gaussian_kernel(x, y, spec) / profile.normalization; });
    const double mass = euler_sum(grid, profile.density);
    if (!(mass >= singular_normalization_threshold)) {
        throw NumericalError(
            fmt::format("home kernel at ({}, {}) is unresolved by the grid (discrete mass {})", y.x1, y.x2, mass));
    }
    profile.density /= mass;
    return profile;
}

} // namespace rthome
