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
#ifndef RTHOME_GRID_H
#define RTHOME_GRID_H

#include <Eigen/Core>

#include <cstddef>
#include <functional>
#include <span>
#include <utility>

namespace rthome
{

struct Point {
    double x1 = 0.0;
    double x2 = 0.0;
};

/// Rectangle [a1,b1] x [a2,b2].
struct Bounds {
    double a1 = 0.0;
    double b1 = 1.0;
    double a2 = 0.0;
    double b2 = 1.0;
};

/// Grid function: one value per cell, stored in linear index order.
using Field = Eigen::VectorXd;

/**
 * @brief Cell-centered rectangular grid.
 *
 * Cells are numbered from left to right and from bottom to top. Internally a
 * cell (i, j) with 0-based indices lives at storage offset j * n1 + i. The
 * 1-based linear index m = (j - 1) n1 + i used in output files is available
 * through linear_index() and cell_of().
 */
class Grid
{
public:
    /// @throws ConfigError if the bounds are degenerate or n1, n2 < 2.
    Grid(const Bounds& bounds, int n1, int n2);

    const Bounds& bounds() const
    {
        return m_bounds;
    }
    int n1() const
    {
        return m_n1;
    }
    int n2() const
    {
        return m_n2;
    }
    std::size_t size() const
    {
        return static_cast<std::size_t>(m_n1) * static_cast<std::size_t>(m_n2);
    }
    double dx1() const
    {
        return m_dx1;
    }
    double dx2() const
    {
        return m_dx2;
    }
    double cell_area() const
    {
        return m_dx1 * m_dx2;
    }

    /// Cell-center coordinates, 0-based.
    double x1(int i) const
    {
        return m_bounds.a1 + (i + 0.5) * m_dx1;
    }
    double x2(int j) const
    {
        return m_bounds.a2 + (j + 0.5) * m_dx2;
    }

    std::size_t offset(int i, int j) const
    {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(m_n1) + static_cast<std::size_t>(i);
    }
    Point center(std::size_t offset) const
    {
        const auto i = static_cast<int>(offset % static_cast<std::size_t>(m_n1));
        const auto j = static_cast<int>(offset / static_cast<std::size_t>(m_n1));
        return {x1(i), x2(j)};
    }

    /// 1-based (i, j) -> 1-based m.
    long linear_index(int i, int j) const;
    /// 1-based m -> 1-based (i, j).
    std::pair<int, int> cell_of(long m) const;

    bool contains(const Point& p) const;

    Field zeros() const
    {
        return Field::Zero(static_cast<Eigen::Index>(size()));
    }
    Field sample(const std::function<double(Point)>& f) const;

private:
    Bounds m_bounds;
    int m_n1;
    int m_n2;
    double m_dx1;
    double m_dx2;
};

Grid build_grid(const Bounds& bounds, int n1, int n2);

struct KernelSpec {
    double sigma = 0.05;

    /// @throws ConfigError unless sigma > 0.
    void validate() const;
};

/// Isotropic Gaussian home footprint g(x - y).
double gaussian_kernel(const Point& x, const Point& y, const KernelSpec& spec);

/**
 * @brief Composite tensor-product Simpson rule on a node lattice.
 *
 * values holds n1_nodes * n2_nodes samples on the closed rectangle, boundary
 * nodes included, in the same left-to-right, bottom-to-top order as Grid.
 * @throws ConfigError unless both node counts are odd and at least 3.
 */
double simpson_2d(std::span<const double> values, int n1_nodes, int n2_nodes, const Bounds& bounds);
double simpson_2d(const std::function<double(Point)>& f, const Bounds& bounds, int n1_nodes, int n2_nodes);

/// Odd node count per axis giving at least 16 nodes per kernel width, never below 101.
int default_simpson_nodes(const Bounds& bounds, const KernelSpec& spec);

/**
 * @brief G(y): mass of g(. - y) inside the domain, by 2-D Simpson quadrature.
 *
 * @param nodes per-axis Simpson node count; 0 selects default_simpson_nodes().
 * @throws ConfigError if y lies outside the closed domain.
 */
double normalization_G(const Point& y, const Grid& grid, const KernelSpec& spec, int nodes = 0);

/// Below this normalization the kernel is considered lost outside the domain.
inline constexpr double singular_normalization_threshold = 1e-12;

/// rho(x, y) = g(x - y) / G(y). @throws NumericalError if G(y) is below threshold.
double rho(const Point& x, const Point& y, const Grid& grid, const KernelSpec& spec, int nodes = 0);

/// dx1 dx2 times the sum of all cell values; the mass functional used by the dynamics.
double euler_sum(const Grid& grid, const Field& field);

/**
 * @brief Discrete home source profile.
 *
 * rho(., y) sampled at cell centers and rescaled so that its euler_sum is
 * exactly one. normalization keeps the Simpson value of G(y).
 */
struct SourceProfile {
    Field density;
    double normalization = 1.0;
};

SourceProfile make_source_profile(const Point& y, const Grid& grid, const KernelSpec& spec, int nodes = 0);

} // namespace rthome

#endif // RTHOME_GRID_H
