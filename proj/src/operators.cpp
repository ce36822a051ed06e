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
#include "rthome/operators.h"
#include "rthome/error.h"

#include <fmt/format.h>


#include <algorithm>
#include <limits>
#include <vector>

namespace rthome
{

using Triplet = Eigen::Triplet<double>;

SparseMatrix second_difference_1d(int n)
{
    if (n < 2) {
        throw ConfigError(fmt::format("second difference needs at least 2 points, got {}", n));
    }
    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(3 * n));
    for (int k = 0; k < n; ++k) {
        double diag = 0.0;
        if (k > 0) {
            entries.emplace_back(k, k - 1, 1.0);
            diag -= 1.0;
        }
        if (k < n - 1) {
            entries.emplace_back(k, k + 1, 1.0);
            diag -= 1.0;
        }
        entries.emplace_back(k, k, diag);
    }
    SparseMatrix b(n, n);
    b.setFromTriplets(entries.begin(), entries.end());
    return b;
}

SparseOperator build_laplacian(const Grid& grid)
{
    const int n1 = grid.n1();
    const int n2 = grid.n2();
    const double c1 = 1.0 / (grid.dx1() * grid.dx1());
    const double c2 = 1.0 / (grid.dx2() * grid.dx2());
    const auto n = static_cast<Eigen::Index>(grid.size());

    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(5 * n));
    for (int j = 0; j < n2; ++j) {
        for (int i = 0; i < n1; ++i) {
            const auto row = static_cast<Eigen::Index>(grid.offset(i, j));
            double diag = 0.0;
            auto link = [&](int ii, int jj, double c) {
                entries.emplace_back(row, static_cast<Eigen::Index>(grid.offset(ii, jj)), c);
                diag -= c;
            };
            if (j > 0) {
                link(i, j - 1, c2);
            }
            if (i > 0) {
                link(i - 1, j, c1);
            }
            if (i < n1 - 1) {
                link(i + 1, j, c1);
            }
            if (j < n2 - 1) {
                link(i, j + 1, c2);
            }
            entries.emplace_back(row, row, diag);
        }
    }
    SparseOperator op;
    op.matrix.resize(n, n);
    op.matrix.setFromTriplets(entries.begin(), entries.end());
    op.symmetric = true;
    return op;
}

SparseOperator build_convection(const Grid& grid, const VelocityField& velocity)
{
    const int n1 = grid.n1();
    const int n2 = grid.n2();
    const auto n = static_cast<Eigen::Index>(grid.size());
    SparseOperator op;
    op.matrix.resize(n, n);
    if (velocity.is_zero()) {
        return op;
    }

    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(8 * n));
    // Interior face between cells `left` and `right` (in the positive axis
    // direction) with normal speed c: the flux c * f_upwind leaves one cell
    // and enters the other, scaled by 1/h of the axis.
    auto face = [&](Eigen::Index left, Eigen::Index right, double c, double inv_h) {
        if (c > 0.0) {
            entries.emplace_back(left, left, -c * inv_h);
            entries.emplace_back(right, left, c * inv_h);
        }
        else if (c < 0.0) {
            entries.emplace_back(right, right, c * inv_h);
            entries.emplace_back(left, right, -c * inv_h);
        }
    };
    for (int j = 0; j < n2; ++j) {
        for (int i = 0; i < n1; ++i) {
            const auto here = static_cast<Eigen::Index>(grid.offset(i, j));
            if (i < n1 - 1) {
                const Point mid{grid.x1(i) + 0.5 * grid.dx1(), grid.x2(j)};
                face(here, static_cast<Eigen::Index>(grid.offset(i + 1, j)), velocity(mid)[0], 1.0 / grid.dx1());
            }
            if (j < n2 - 1) {
                const Point mid{grid.x1(i), grid.x2(j) + 0.5 * grid.dx2()};
                face(here, static_cast<Eigen::Index>(grid.offset(i, j + 1)), velocity(mid)[1], 1.0 / grid.dx2());
            }
        }
    }
    op.matrix.setFromTriplets(entries.begin(), entries.end());
    op.matrix.prune(0.0);
    return op;
}

Field apply_convection(const Field& field, const VelocityField& velocity, const Grid& grid)
{
    return build_convection(grid, velocity).apply(field);
}

double convection_step_limit(const SparseOperator& convection)
{
    double rate = 0.0;
    for (Eigen::Index k = 0; k < convection.matrix.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(convection.matrix, k); it; ++it) {
            if (it.row() == it.col()) {
                rate = std::max(rate, -it.value());
            }
        }
    }
    return rate > 0.0 ? 1.0 / rate : std::numeric_limits<double>::infinity();
}

} // namespace rthome
