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
#ifndef RTHOME_LINSOLVE_H
#define RTHOME_LINSOLVE_H

#include "rthome/grid.h"
#include "rthome/operators.h"
#include "rthome/velocity.h"

#include <memory>

namespace rthome
{

/// Relative residual every returned solution is checked against.
inline constexpr double solve_tolerance = 1e-10;

/**
 * @brief Factorization of I - dt eps^2 A, reused for every implicit diffusion step.
 *
 * The factorization is immutable after construction and solve() may be
 * called concurrently. If the direct solution misses solve_tolerance, a
 * conjugate-gradient refinement capped at 10 * n iterations is attempted
 * before giving up with NumericalError.
 */
class ImplicitDiffusionSolver
{
public:
    ImplicitDiffusionSolver(const SparseOperator& laplacian, double dt, double epsilon);

    Field solve(const Field& rhs) const;

private:
    struct Impl;
    std::shared_ptr<const Impl> m_impl;
};

Field solve_implicit_diffusion(const SparseOperator& laplacian, double dt, double epsilon, const Field& rhs);

/**
 * @brief Factorization of alpha I - eps^2 A - D for steady traveler fields.
 *
 * D is the upwind convection operator (f -> -div(f C)); with D empty the
 * system is symmetric and factored by LDL^T, otherwise by sparse LU with
 * BiCGSTAB as refinement fallback.
 */
class ResolventSolver
{
public:
    ResolventSolver(double alpha, const SparseOperator& laplacian, const SparseOperator& convection, double epsilon);

    Field solve(const Field& source) const;

private:
    struct Impl;
    std::shared_ptr<const Impl> m_impl;
};

Field solve_resolvent(double alpha, const SparseOperator& laplacian, const VelocityField& velocity,
                      const Field& source, double epsilon, const Grid& grid);

} // namespace rthome

#endif // RTHOME_LINSOLVE_H
