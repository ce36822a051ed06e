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
#include "rthome/equilibrium.h"
#include "rthome/error.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>

namespace rthome
{

RateMatrix ode_matrix(double gamma, double alpha, double chi)
{
    ModelParams{gamma, alpha, chi, 0.0, 1.0}.validate_positive_rates();
    RateMatrix l;
    // clang-format off
    l << -gamma,    0.0,   chi,
          gamma, -alpha,   0.0,
            0.0,  alpha,  -chi;
    // clang-format on
    return l;
}

double harmonic_rate(double gamma, double alpha, double chi)
{
    return 1.0 / (1.0 / gamma + 1.0 / alpha + 1.0 / chi);
}

AggregateState aggregate_equilibrium(double n, double gamma, double alpha, double chi)
{
    ModelParams{gamma, alpha, chi, 0.0, 1.0}.validate_positive_rates();
    return {n / (1.0 + gamma / alpha + gamma / chi), n / (alpha / gamma + 1.0 + alpha / chi),
            n / (chi / gamma + chi / alpha + 1.0)};
}

std::vector<AggregateSample> run_aggregate_ode(const AggregateState& init, const ModelParams& params, double t_end,
                                               double dt, OdeMethod method)
{
    const RateMatrix l = ode_matrix(params.gamma, params.alpha, params.chi);
    if (!(dt > 0.0) || dt > rate_step_limit(params, {})) {
        throw ConfigError(fmt::format("aggregate ODE step {} outside (0, {}]", dt, rate_step_limit(params, {})));
    }
    const long steps = std::max(0L, std::lround(t_end / dt));
    std::vector<AggregateSample> out;
    out.reserve(static_cast<std::size_t>(steps) + 1);
    Eigen::Vector3d x(init.u, init.V, init.W);
    out.push_back({0.0, init});
    for (long n = 0; n < steps; ++n) {
        if (method == OdeMethod::forward_euler) {
            x += dt * (l * x);
        }
        else {
            const Eigen::Vector3d k1 = l * x;
            const Eigen::Vector3d k2 = l * (x + 0.5 * dt * k1);
            const Eigen::Vector3d k3 = l * (x + 0.5 * dt * k2);
            const Eigen::Vector3d k4 = l * (x + dt * k3);
            x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        out.push_back({static_cast<double>(n + 1) * dt, {x[0], x[1], x[2]}});
    }
    return out;
}

double fit_decay_rate(const std::vector<double>& times, const std::vector<double>& deviations, double t0, double t1,
                      double floor)
{
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    long count = 0;
    for (std::size_t k = 0; k < std::min(times.size(), deviations.size()); ++k) {
        const double t = times[k];
        const double d = std::abs(deviations[k]);
        if (t < t0 || t > t1 || !(d > floor)) {
            continue;
        }
        const double y = std::log(d);
        sx += t;
        sy += y;
        sxx += t * t;
        sxy += t * y;
        ++count;
    }
    if (count < 2) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    const double c = static_cast<double>(count);
    const double slope = (c * sxy - sx * sy) / (c * sxx - sx * sx);
    return -slope;
}

FieldEquilibrium field_equilibrium(const ResolventSolver& resolvent, const Field& source_profile, double occupancy,
                                   const ModelParams& params)
{
    const double tau = harmonic_rate(params.gamma, params.alpha, params.chi);
    FieldEquilibrium eq;
    eq.u = aggregate_equilibrium(occupancy, params.gamma, params.alpha, params.chi).u;
    eq.v = resolvent.solve((tau * occupancy) * source_profile);
    eq.w = (params.alpha / params.chi) * eq.v;
    return eq;
}

FieldEquilibrium field_equilibrium(const Grid& grid, const HomeSet& homes, std::size_t i, const ModelParams& params)
{
    const ResolventSolver resolvent(params.alpha, build_laplacian(grid), build_convection(grid, homes.velocity_of(i)),
                                    params.epsilon);
    return field_equilibrium(resolvent, homes.source(i), homes.home(i).occupancy, params);
}

std::vector<FieldEquilibrium> field_equilibria(const Grid& grid, const HomeSet& homes, const ModelParams& params,
                                               Execution execution)
{
    params.validate_positive_rates();
    const SparseOperator laplacian = build_laplacian(grid);
    std::vector<ResolventSolver> solvers;
    solvers.reserve(homes.velocities().size());
    for (const auto& velocity : homes.velocities()) {
        solvers.emplace_back(params.alpha, laplacian, build_convection(grid, velocity), params.epsilon);
    }
    std::vector<FieldEquilibrium> out(homes.size());
    std::vector<std::exception_ptr> failures(homes.size());
    const auto count = static_cast<long>(homes.size());
    const bool parallel = execution == Execution::parallel;
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long i = 0; i < count; ++i) {
        const auto k = static_cast<std::size_t>(i);
        try {
            out[k] = field_equilibrium(solvers[homes.home(k).velocity], homes.source(k), homes.home(k).occupancy,
                                       params);
        }
        catch (...) {
            failures[k] = std::current_exception();
        }
    }
    for (const auto& f : failures) {
        if (f) {
            std::rethrow_exception(f);
        }
    }
    return out;
}

double max_distance(const HomeState& state, const FieldEquilibrium& eq)
{
    return std::max({std::abs(state.u - eq.u), (state.v - eq.v).lpNorm<Eigen::Infinity>(),
                     (state.w - eq.w).lpNorm<Eigen::Infinity>()});
}

} // namespace rthome
