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
#ifndef RTHOME_EQUILIBRIUM_H
#define RTHOME_EQUILIBRIUM_H

#include "rthome/dynamics.h"
#include "rthome/grid.h"
#include "rthome/linsolve.h"
#include "rthome/operators.h"

#include <Eigen/Core>

#include <vector>

namespace rthome
{

/// Home-wide totals: people at home, travelers and workers.
struct AggregateState {
    double u = 0.0;
    double V = 0.0;
    double W = 0.0;

    double total() const
    {
        return u + V + W;
    }
};

/// Generator of the aggregate cycle home -> travel -> work -> home, ordered (u, V, W).
using RateMatrix = Eigen::Matrix3d;

/// @throws ConfigError for nonpositive rates.
RateMatrix ode_matrix(double gamma, double alpha, double chi);

/// 1 / (1/gamma + 1/alpha + 1/chi)
double harmonic_rate(double gamma, double alpha, double chi);

/// Unique steady state of the aggregate cycle carrying n people.
AggregateState aggregate_equilibrium(double n, double gamma, double alpha, double chi);

enum class OdeMethod { rk4, forward_euler };

struct AggregateSample {
    double t;
    AggregateState state;
};

/**
 * @brief Fixed-step integration of d/dt (u, V, W) = L (u, V, W).
 *
 * forward_euler reproduces the time discretization the field stepper applies
 * to the totals. @throws ConfigError if dt is not positive or exceeds 0.5 / max rate.
 */
std::vector<AggregateSample> run_aggregate_ode(const AggregateState& init, const ModelParams& params, double t_end,
                                               double dt, OdeMethod method = OdeMethod::rk4);

/**
 * @brief Least-squares slope delta of log|u(t) - u_eq| ~ log M - delta t over [t0, t1].
 *
 * Samples whose deviation is at or below floor are skipped. Returns NaN if fewer than two remain.
 */
double fit_decay_rate(const std::vector<double>& times, const std::vector<double>& deviations, double t0, double t1,
                      double floor = 0.0);

struct FieldEquilibrium {
    double u = 0.0;
    Field v;
    Field w;
};

/**
 * @brief Steady state of one home: closed-form u, resolvent traveler field, and w = (alpha/chi) v.
 */
FieldEquilibrium field_equilibrium(const ResolventSolver& resolvent, const Field& source_profile, double occupancy,
                                   const ModelParams& params);

/// Convenience overload building the resolvent for home i of homes.
FieldEquilibrium field_equilibrium(const Grid& grid, const HomeSet& homes, std::size_t i, const ModelParams& params);

/// Equilibria for every home, one resolvent factorization per distinct velocity field.
std::vector<FieldEquilibrium> field_equilibria(const Grid& grid, const HomeSet& homes, const ModelParams& params,
                                               Execution execution = Execution::parallel);

/// max(|u - u_eq|, |v - v_eq|_inf, |w - w_eq|_inf)
double max_distance(const HomeState& state, const FieldEquilibrium& eq);

} // namespace rthome

#endif // RTHOME_EQUILIBRIUM_H
