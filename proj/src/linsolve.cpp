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
#include "rthome/linsolve.h"
#include "rthome/error.h"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <fmt/format.h>

#include <cmath>
#include <optional>

namespace rthome
{

namespace
{

SparseMatrix identity(Eigen::Index n)
{
    SparseMatrix id(n, n);
    id.setIdentity();
    return id;
}

double relative_residual(const SparseMatrix& m, const Field& x, const Field& b)
{
    const double scale = b.norm();
    const double r = (m * x - b).norm();
    return scale > 0.0 ? r / scale : r;
}

template <class Iterative>
Field refine_or_throw(const SparseMatrix& m, const Field& rhs, Field x, const char* what)
{
    double residual = relative_residual(m, x, rhs);
    if (residual <= solve_tolerance && std::isfinite(residual)) {
        return x;
    }
    Iterative it;
    it.setTolerance(0.1 * solve_tolerance);
    it.setMaxIterations(10 * m.rows());
    it.compute(m);
    if (!x.allFinite()) {
        x.setZero();
    }
    x = it.solveWithGuess(rhs, x);
    residual = relative_residual(m, x, rhs);
    if (!(residual <= solve_tolerance)) {
        throw NumericalError(fmt::format("{} solve did not converge: relative residual {:.3e} after {} iterations",
                                         what, residual, it.iterations()));
    }
    return x;
}

} // namespace

struct ImplicitDiffusionSolver::Impl {
    SparseMatrix system;
    Eigen::SimplicialLDLT<SparseMatrix> factor;
};

ImplicitDiffusionSolver::ImplicitDiffusionSolver(const SparseOperator& laplacian, double dt, double epsilon)
{
    if (!(dt > 0.0)) {
        throw ConfigError(fmt::format("time step must be positive, got {}", dt));
    }
    auto impl = std::make_shared<Impl>();
    const auto n = laplacian.matrix.rows();
    impl->system = identity(n) - (dt * epsilon * epsilon) * laplacian.matrix;
    impl->factor.compute(impl->system);
    if (impl->factor.info() != Eigen::Success) {
        throw NumericalError("factorization of the implicit diffusion matrix failed");
    }
    m_impl = std::move(impl);
}

Field ImplicitDiffusionSolver::solve(const Field& rhs) const
{
    Field x = m_impl->factor.solve(rhs);
    return refine_or_throw<Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper>>(
        m_impl->system, rhs, std::move(x), "implicit diffusion");
}

Field solve_implicit_diffusion(const SparseOperator& laplacian, double dt, double epsilon, const Field& rhs)
{
    return ImplicitDiffusionSolver(laplacian, dt, epsilon).solve(rhs);
}

struct ResolventSolver::Impl {
    SparseMatrix system;
    std::optional<Eigen::SimplicialLDLT<SparseMatrix>> symmetric;
    std::optional<Eigen::SparseLU<SparseMatrix>> general;
};

ResolventSolver::ResolventSolver(double alpha, const SparseOperator& laplacian, const SparseOperator& convection,
                                 double epsilon)
{
    if (!(alpha > 0.0)) {
        throw ConfigError(fmt::format("resolvent rate alpha must be positive, got {}", alpha));
    }
    auto impl = std::make_shared<Impl>();
    const auto n = laplacian.matrix.rows();
    impl->system = alpha * identity(n) - (epsilon * epsilon) * laplacian.matrix;
    const bool has_convection = convection.matrix.nonZeros() > 0;
    if (has_convection) {
        impl->system -= convection.matrix;
        impl->system.makeCompressed();
        impl->general.emplace();
        impl->general->analyzePattern(impl->system);
        impl->general->factorize(impl->system);
        if (impl->general->info() != Eigen::Success) {
            throw NumericalError("LU factorization of the resolvent matrix failed");
        }
    }
    else {
        impl->symmetric.emplace();
        impl->symmetric->compute(impl->system);
        if (impl->symmetric->info() != Eigen::Success) {
            throw NumericalError("factorization of the resolvent matrix failed");
        }
    }
    m_impl = std::move(impl);
}

Field ResolventSolver::solve(const Field& source) const
{
    if (m_impl->symmetric) {
        Field x = m_impl->symmetric->solve(source);
        return refine_or_throw<Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper>>(
            m_impl->system, source, std::move(x), "resolvent");
    }
    Field x = m_impl->general->solve(source);
    return refine_or_throw<Eigen::BiCGSTAB<SparseMatrix>>(m_impl->system, source, std::move(x), "resolvent");
}

Field solve_resolvent(double alpha, const SparseOperator& laplacian, const VelocityField& velocity,
                      const Field& source, double epsilon, const Grid& grid)
{
    return ResolventSolver(alpha, laplacian, build_convection(grid, velocity), epsilon).solve(source);
}

} // namespace rthome
