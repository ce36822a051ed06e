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
#ifndef RTHOME_DYNAMICS_H
#define RTHOME_DYNAMICS_H

#include "rthome/grid.h"
#include "rthome/linsolve.h"
#include "rthome/operators.h"
#include "rthome/velocity.h"

#include <cstddef>
#include <vector>

namespace rthome
{

/// Rates per day; epsilon multiplies the Laplacian as epsilon^2.
struct ModelParams {
    double gamma = 2.0; ///< home-leaving rate
    double alpha = 12.0; ///< arrival rate of travelers
    double chi = 2.4; ///< work-leaving rate
    double epsilon = 1.0;
    double sigma = 0.05;

    /// @throws ConfigError unless gamma, alpha, chi, epsilon >= 0 and sigma > 0.
    void validate() const;
    /// Also requires gamma, alpha, chi > 0, which the steady state needs to be unique.
    void validate_positive_rates() const;
};

/**
 * @brief Dimensionless one-day-periodic multiplier applied to a base rate.
 *
 * Either flat (1 everywhere), piecewise (a factor on each window of t mod 1,
 * 1 outside), or sinusoidal 1 + amplitude * cos(2 pi (t - phase)).
 */
class DailyProfile
{
public:
    struct Window {
        double begin;
        double end;
        double factor;
    };

    static DailyProfile flat()
    {
        return DailyProfile();
    }
    /// @throws ConfigError for windows outside [0, 1], empty, overlapping, or with factor <= 0.
    static DailyProfile piecewise(std::vector<Window> windows);
    /// @throws ConfigError unless |amplitude| < 1.
    static DailyProfile sinusoidal(double amplitude, double phase);

    double at(double t) const;
    double max_factor() const;

private:
    enum class Kind { flat, piecewise, sinusoidal };
    Kind m_kind = Kind::flat;
    std::vector<Window> m_windows;
    double m_amplitude = 0.0;
    double m_phase = 0.0;
};

/// Daily modulation of the home-leaving and work-leaving rates; alpha is never modulated.
struct CircadianSchedule {
    DailyProfile gamma = DailyProfile::flat();
    DailyProfile chi = DailyProfile::flat();
};

struct CircadianRates {
    double gamma;
    double chi;
};

CircadianRates circadian_rate(const CircadianSchedule& schedule, const ModelParams& params, double t);

struct Home {
    Point location;
    double occupancy = 0.0;
    /// Index into HomeSet::velocities().
    std::size_t velocity = 0;
};

/**
 * @brief Fixed homes with their cached kernel normalizations and source profiles.
 */
class HomeSet
{
public:
    /// @throws ConfigError naming the offending home for locations outside the domain,
    ///         nonpositive occupancy, or an out-of-range velocity index.
    HomeSet(const Grid& grid, const KernelSpec& kernel, std::vector<Home> homes,
            std::vector<VelocityField> velocities = {VelocityField::zero()}, int simpson_nodes = 0);

    std::size_t size() const
    {
        return m_homes.size();
    }
    const Home& home(std::size_t i) const
    {
        return m_homes[i];
    }
    const std::vector<Home>& homes() const
    {
        return m_homes;
    }
    const std::vector<VelocityField>& velocities() const
    {
        return m_velocities;
    }
    const VelocityField& velocity_of(std::size_t i) const
    {
        return m_velocities[m_homes[i].velocity];
    }
    double normalization(std::size_t i) const
    {
        return m_profiles[i].normalization;
    }
    const Field& source(std::size_t i) const
    {
        return m_profiles[i].density;
    }
    double total_occupancy() const;

private:
    std::vector<Home> m_homes;
    std::vector<VelocityField> m_velocities;
    std::vector<SourceProfile> m_profiles;
};

struct HomeState {
    double u = 0.0;
    Field v;
    Field w;
    double t = 0.0;

    /// Everybody at home: (n, 0, 0) at t = 0.
    static HomeState at_home(const Grid& grid, double occupancy);
};

/// u + euler_sum(v) + euler_sum(w).
double mass_per_home(const Grid& grid, const HomeState& state);

/// Values in [-clamp_threshold, 0) are reset to zero; anything below abort_threshold is an error.
inline constexpr double clamp_threshold = 1e-12;
inline constexpr double abort_threshold = -1e-9;

struct StepDiagnostics {
    long clamped_values = 0;
    double clamped_mass = 0.0;
    double min_value = 0.0;

    void merge(const StepDiagnostics& other);
};

/**
 * @brief One-home semi-implicit stepper sharing the grid operators across homes.
 *
 * A step from (u, v, w) at time t uses start-of-step values on every explicit
 * term:
 *   u+ = u + dt (chi(t) euler_sum(w) - gamma(t) u)
 *   (I - dt eps^2 A) v* = v + dt (gamma(t) rho u - alpha v),  v+ = v* + dt D v*
 *   w+ = w + dt (alpha v - chi(t) w)
 * where D is the home's upwind convection operator (skipped when zero).
 * advance() only reads shared state, so distinct homes may be stepped concurrently.
 */
class HomeStepper
{
public:
    /// @throws ConfigError if dt > 0.5 / max(gamma, alpha, chi) over the schedule or
    ///         dt exceeds the convection step limit of any velocity field.
    HomeStepper(const Grid& grid, const ModelParams& params, const CircadianSchedule& schedule, const HomeSet& homes,
                double dt);

    /// Advance state of home i from time t to t + dt in place. @throws NumericalError on negative values.
    void advance(HomeState& state, std::size_t i, double t, StepDiagnostics& diagnostics) const;

    double dt() const
    {
        return m_dt;
    }
    const SparseOperator& laplacian() const
    {
        return m_laplacian;
    }
    const SparseOperator& convection(std::size_t velocity) const
    {
        return m_convection[velocity];
    }

private:
    const Grid& m_grid;
    const HomeSet& m_homes;
    ModelParams m_params;
    CircadianSchedule m_schedule;
    double m_dt;
    SparseOperator m_laplacian;
    ImplicitDiffusionSolver m_diffusion;
    std::vector<SparseOperator> m_convection;
};

/// Largest dt allowed by the explicit rate terms: 0.5 / max(gamma, alpha, chi) over the day.
double rate_step_limit(const ModelParams& params, const CircadianSchedule& schedule);

/// Single step with freshly built operators; convenient for tests, use HomeStepper in loops.
HomeState step_home(const HomeState& state, const Grid& grid, const ModelParams& params, const HomeSet& homes,
                    std::size_t i, double dt, const CircadianSchedule& schedule = {});

enum class Execution { serial, parallel };

struct RunOptions {
    double dt = 1e-3;
    double t_end = 2.0;
    double output_interval = 0.01;
    std::vector<double> snapshot_times;
    Execution execution = Execution::parallel;
};

struct HomeAggregate {
    double u = 0.0;
    double v = 0.0;
    double w = 0.0;

    double total() const
    {
        return u + v + w;
    }
};

struct Snapshot {
    double t = 0.0;
    std::vector<HomeState> homes;
    Field travelers; ///< sum over homes of v_i
    Field workers; ///< sum over homes of w_i
};

struct RunDiagnostics {
    /// max over homes and every step of |mass_per_home - n_i| / n_i
    double max_relative_mass_error = 0.0;
    StepDiagnostics steps;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<HomeAggregate>> per_home; ///< per_home[k][i] at times[k]
    std::vector<HomeAggregate> global; ///< (U, V, W) at times[k]
    std::vector<Snapshot> snapshots;
    RunDiagnostics diagnostics;
};

/**
 * @brief Advance every home from everybody-at-home at t = 0 to t_end with a fixed dt.
 *
 * Homes are independent; Execution::parallel distributes them over OpenMP
 * threads and Execution::serial is the reference loop. Both produce
 * bitwise-identical trajectories since all cross-home sums are formed
 * afterwards in home order. Aggregates are recorded at t = 0, every
 * output_interval and at t_end; snapshot times are rounded to the nearest step.
 * @throws ConfigError for inconsistent time settings, NumericalError tagged with home and step.
 */
Trajectory run_simulation(const Grid& grid, const ModelParams& params, const CircadianSchedule& schedule,
                          const HomeSet& homes, const RunOptions& options);

} // namespace rthome

#endif // RTHOME_DYNAMICS_H
