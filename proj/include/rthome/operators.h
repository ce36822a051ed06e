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
#ifndef RTHOME_OPERATORS_H
#define RTHOME_OPERATORS_H

#include "rthome/grid.h"
#include "rthome/velocity.h"

#include <Eigen/SparseCore>

namespace rthome
{

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Linear operator on grid functions.
struct SparseOperator {
    SparseMatrix matrix;
    bool symmetric = false;

    std::size_t dimension() const
    {
        return static_cast<std::size_t>(matrix.rows());
    }
    Field apply(const Field& f) const
    {
        return matrix * f;
    }
};

/// 1-D Neumann second difference: diagonal (-1, -2, ..., -2, -1), off-diagonals 1.
SparseMatrix second_difference_1d(int n);

/**
 * @brief Five-point Laplacian with no-flux closure on a cell-centered grid.
 *
 * Ghost cells mirror the boundary cell, so each boundary face drops out of
 * the stencil. The result equals kron(I, B)/dx1^2 + kron(B, I)/dx2^2 with B
 * from second_difference_1d; every row and column sums to zero.
 */
SparseOperator build_laplacian(const Grid& grid);

/**
 * @brief First-order donor-cell discretization of f -> -div(f C).
 *
 * Normal velocities are evaluated at face midpoints and the flux takes the
 * upwind cell value. Faces on the domain boundary carry no flux, so the
 * euler_sum of the output vanishes for every f.
 */
SparseOperator build_convection(const Grid& grid, const VelocityField& velocity);

Field apply_convection(const Field& field, const VelocityField& velocity, const Grid& grid);

/**
 * @brief Largest explicit step keeping f + dt * D f nonnegative for f >= 0.
 *
 * Equals 1 / max_k(-D_kk), the inverse of the largest cell outflow rate.
 * Returns +infinity for an operator without outflow.
 */
double convection_step_limit(const SparseOperator& convection);

} // namespace rthome

#endif // RTHOME_OPERATORS_H
