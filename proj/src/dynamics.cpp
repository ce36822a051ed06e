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
#include "rthome/dynamics.h"
#include "rthome/error.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>

namespace rthome
{

void ModelParams::validate() const
{
    auto nonnegative = [](double value, const char* name) {
        if (!(value >= 0.0) || !std::isfinite(value)) {
            throw ConfigError(fmt::format("{} must be nonnegative, got {}", name, value));
        }
    };
    nonnegative(gamma, "gamma");
    nonnegative(alpha, "alpha");
    nonnegative(chi, "chi");
    nonnegative(epsilon, "epsilon");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw ConfigError(fmt::format("sigma must be positive, got {}", sigma));
    }
}

void ModelParams::validate_positive_rates() const
{
    validate();
    if (!(gamma > 0.0 && alpha > 0.0 && chi > 0.0)) {
        throw ConfigError(
            fmt::format("rates must be positive, got gamma = {}, alpha = {}, chi = {}", gamma, alpha, chi));
    }
}

DailyProfile DailyProfile::piecewise(std::vector<Window> windows)
{
    std::sort(windows.begin(), windows.end(), [](const Window& a, const Window& b) { return a.begin < b.begin; });
    for (std::size_t k = 0; k < windows.size(); ++k) {
        const auto& win = windows[k];
        if (!(win.begin >= 0.0 && win.end <= 1.0 && win.begin < win.end)) {
            throw ConfigError(fmt::format("daily window [{}, {}) must be a nonempty part of [0, 1)", win.begin,
                                          win.end));
        }
        if (!(win.factor > 0.0)) {
            throw ConfigError(fmt::format("daily window factor must be positive, got {}", win.factor));
        }
        if (k > 0 && win.begin < windows[k - 1].end) {
            throw ConfigError(fmt::format("daily windows overlap at {}", win.begin));
        }
    }
    DailyProfile p;
    p.m_kind = Kind::piecewise;
    p.m_windows = std::move(windows);
    return p;
}

DailyProfile DailyProfile::sinusoidal(double amplitude, double phase)
{
    if (!(std::abs(amplitude) < 1.0)) {
        throw ConfigError(fmt::format("sinusoidal amplitude must satisfy |a| < 1, got {}", amplitude));
    }
    DailyProfile p;
    p.m_kind = Kind::sinusoidal;
    p.m_amplitude = amplitude;
    p.m_phase = phase;
    return p;
}

double DailyProfile::at(double t) const
{
    const double s = t - std::floor(t);
    switch (m_kind) {
    case Kind::flat:
        return 1.0;
    case Kind::piecewise:
        for (const auto& win : m_windows) {
            if (s >= win.begin && s < win.end) {
                return win.factor;
            }
        }
        return 1.0;
    case Kind::sinusoidal:
        return 1.0 + m_amplitude * std::cos(2.0 * std::numbers::pi * (s - m_phase));
    }
    return 1.0;
}

double DailyProfile::max_factor() const
{
    switch (m_kind) {
    case Kind::flat:
        return 1.0;
    case Kind::piecewise: {
        double best = 1.0;
        for (const auto& win : m_windows) {
            best = std::max(best, win.factor);
        }
        return best;
    }
    case Kind::sinusoidal:
        return 1.0 + std::abs(m_amplitude);
    }
    return 1.0;
}

CircadianRates circadian_rate(const CircadianSchedule& schedule, const ModelParams& params, double t)
{
    return {params.gamma * schedule.gamma.at(t), params.chi * schedule.chi.at(t)};
}

HomeSet::HomeSet(const Grid& grid, const KernelSpec& kernel, std::vector<Home> homes,
                 std::vector<VelocityField> velocities, int simpson_nodes)
    : m_homes(std::move(homes))
    , m_velocities(std::move(velocities))
{
    kernel.validate();
    for (std::size_t i = 0; i < m_homes.size(); ++i) {
        const auto& h = m_homes[i];
        if (!grid.contains(h.location)) {
            throw ConfigError(
                fmt::format("home {} at ({}, {}) lies outside the domain", i, h.location.x1, h.location.x2));
        }
        if (!(h.occupancy > 0.0) || !std::isfinite(h.occupancy)) {
            throw ConfigError(fmt::format("home {} has nonpositive occupancy {}", i, h.occupancy));
        }
        if (h.velocity >= m_velocities.size()) {
            throw ConfigError(fmt::format("home {} refers to velocity field {} of {}", i, h.velocity,
                                          m_velocities.size()));
        }
    }
    m_profiles.resize(m_homes.size());
    std::vector<std::exception_ptr> failures(m_homes.size());
    const auto count = static_cast<long>(m_homes.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < count; ++i) {
        const auto k = static_cast<std::size_t>(i);
        try {
            m_profiles[k] = make_source_profile(m_homes[k].location, grid, kernel, simpson_nodes);
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
}

double HomeSet::total_occupancy() const
{
    double total = 0.0;
    for (const auto& h : m_homes) {
        total += h.occupancy;
    }
    return total;
}

HomeState HomeState::at_home(const Grid& grid, double occupancy)
{
    return {occupancy, grid.zeros(), grid.zeros(), 0.0};
}

double mass_per_home(const Grid& grid, const HomeState& state)
{
    return state.u + euler_sum(grid, state.v) + euler_sum(grid, state.w);
}

void StepDiagnostics::merge(const StepDiagnostics& other)
{
    clamped_values += other.clamped_values;
    clamped_mass += other.clamped_mass;
    min_value = std::min(min_value, other.min_value);
}

double rate_step_limit(const ModelParams& params, const CircadianSchedule& schedule)
{
    const double fastest = std::max({params.gamma * schedule.gamma.max_factor(), params.alpha,
                                     params.chi * schedule.chi.max_factor()});
    return fastest > 0.0 ? 0.5 / fastest : std::numeric_limits<double>::infinity();
}

HomeStepper::HomeStepper(const Grid& grid, const ModelParams& params, const CircadianSchedule& schedule,
                         const HomeSet& homes, double dt)
    : m_grid(grid)
    , m_homes(homes)
    , m_params(params)
    , m_schedule(schedule)
    , m_dt(dt)
    , m_laplacian(build_laplacian(grid))
    , m_diffusion(m_laplacian, dt, params.epsilon)
{
    params.validate();
    const double rate_limit = rate_step_limit(params, schedule);
    if (dt > rate_limit) {
        throw ConfigError(
            fmt::format("dt = {} exceeds the explicit rate bound 0.5 / max(gamma, alpha, chi) = {}", dt, rate_limit));
    }
    m_convection.reserve(homes.velocities().size());
    for (std::size_t k = 0; k < homes.velocities().size(); ++k) {
        m_convection.push_back(build_convection(grid, homes.velocities()[k]));
        const double cfl = convection_step_limit(m_convection.back());
        if (dt > cfl) {
            throw ConfigError(fmt::format("dt = {} violates the CFL bound {} of velocity field {}", dt, cfl, k));
        }
    }
}

namespace
{

void sanitize(double& value, StepDiagnostics& diagnostics)
{
    if (value >= 0.0) {
        return;
    }
    diagnostics.min_value = std::min(diagnostics.min_value, value);
    if (value < abort_threshold) {
        throw NumericalError(fmt::format("negative density {} below tolerance {}", value, abort_threshold));
    }
    if (value >= -clamp_threshold) {
        ++diagnostics.clamped_values;
        diagnostics.clamped_mass -= value;
        value = 0.0;
    }
}

void sanitize(Field& field, StepDiagnostics& diagnostics)
{
    for (auto& value : field) {
        sanitize(value, diagnostics);
    }
}

} // namespace

void HomeStepper::advance(HomeState& state, std::size_t i, double t, StepDiagnostics& diagnostics) const
{
    const auto rates = circadian_rate(m_schedule, m_params, t);
    const double dt = m_dt;
    const double alpha = m_params.alpha;

    const double workers = euler_sum(m_grid, state.w);
    const double u_next = state.u + dt * (rates.chi * workers - rates.gamma * state.u);

    Field rhs = (1.0 - dt * alpha) * state.v + (dt * rates.gamma * state.u) * m_homes.source(i);
    state.w = (1.0 - dt * rates.chi) * state.w + (dt * alpha) * state.v;
    state.v = m_diffusion.solve(rhs);
    const auto& convection = m_convection[m_homes.home(i).velocity];
    if (convection.matrix.nonZeros() > 0) {
        state.v += dt * (convection.matrix * state.v);
    }
    state.u = u_next;
    state.t = t + dt;

    sanitize(state.u, diagnostics);
    sanitize(state.v, diagnostics);
    sanitize(state.w, diagnostics);
}

HomeState step_home(const HomeState& state, const Grid& grid, const ModelParams& params, const HomeSet& homes,
                    std::size_t i, double dt, const CircadianSchedule& schedule)
{
    const HomeStepper stepper(grid, params, schedule, homes, dt);
    HomeState next = state;
    StepDiagnostics diagnostics;
    stepper.advance(next, i, state.t, diagnostics);
    return next;
}

namespace
{

struct Schedule {
    long steps;
    std::vector<long> output_steps;
    std::vector<long> snapshot_steps;
};

Schedule plan_steps(const RunOptions& options)
{
    if (!(options.dt > 0.0) || !(options.t_end > 0.0)) {
        throw ConfigError(fmt::format("need dt > 0 and t_end > 0, got dt = {}, t_end = {}", options.dt,
                                      options.t_end));
    }
    Schedule s;
    s.steps = std::lround(options.t_end / options.dt);
    if (s.steps < 1 || std::abs(static_cast<double>(s.steps) * options.dt - options.t_end) >
                           1e-9 * std::max(1.0, options.t_end)) {
        throw ConfigError(
            fmt::format("t_end = {} is not an integer multiple of dt = {}", options.t_end, options.dt));
    }
    if (!(options.output_interval > 0.0)) {
        throw ConfigError(fmt::format("output interval must be positive, got {}", options.output_interval));
    }
    const long every = std::max(1L, std::lround(options.output_interval / options.dt));
    for (long n = 0; n < s.steps; n += every) {
        s.output_steps.push_back(n);
    }
    s.output_steps.push_back(s.steps);
    for (double ts : options.snapshot_times) {
        if (!(ts >= 0.0 && ts <= options.t_end + 0.5 * options.dt)) {
            throw ConfigError(fmt::format("snapshot time {} outside [0, {}]", ts, options.t_end));
        }
        s.snapshot_steps.push_back(std::lround(ts / options.dt));
    }
    return s;
}

struct HomeRun {
    std::vector<HomeAggregate> aggregates;
    std::vector<HomeState> snapshots;
    StepDiagnostics diagnostics;
    double max_relative_mass_error = 0.0;
    std::exception_ptr failure;
    long failed_step = -1;
};

HomeAggregate aggregate(const Grid& grid, const HomeState& s)
{
    return {s.u, euler_sum(grid, s.v), euler_sum(grid, s.w)};
}

void run_home(const Grid& grid, const HomeStepper& stepper, const HomeSet& homes, std::size_t i,
              const Schedule& plan, HomeRun& out)
{
    const double n_i = homes.home(i).occupancy;
    HomeState state = HomeState::at_home(grid, n_i);
    out.aggregates.reserve(plan.output_steps.size());
    out.snapshots.resize(plan.snapshot_steps.size());

    std::size_t next_output = 0;
    auto record = [&](long n) {
        while (next_output < plan.output_steps.size() && plan.output_steps[next_output] == n) {
            out.aggregates.push_back(aggregate(grid, state));
            ++next_output;
        }
        for (std::size_t k = 0; k < plan.snapshot_steps.size(); ++k) {
            if (plan.snapshot_steps[k] == n) {
                out.snapshots[k] = state;
            }
        }
    };

    record(0);
    for (long n = 0; n < plan.steps; ++n) {
        try {
            stepper.advance(state, i, static_cast<double>(n) * stepper.dt(), out.diagnostics);
        }
        catch (...) {
            out.failure = std::current_exception();
            out.failed_step = n + 1;
            return;
        }
        state.t = static_cast<double>(n + 1) * stepper.dt();
        out.max_relative_mass_error =
            std::max(out.max_relative_mass_error, std::abs(mass_per_home(grid, state) - n_i) / n_i);
        record(n + 1);
    }
}

[[noreturn]] void rethrow_tagged(const HomeRun& run, std::size_t i)
{
    try {
        std::rethrow_exception(run.failure);
    }
    catch (const NumericalError& e) {
        throw NumericalError(fmt::format("home {} step {}: {}", i, run.failed_step, e.what()));
    }
    catch (const ConfigError& e) {
        throw ConfigError(fmt::format("home {} step {}: {}", i, run.failed_step, e.what()));
    }
}

} // namespace

Trajectory run_simulation(const Grid& grid, const ModelParams& params, const CircadianSchedule& schedule,
                          const HomeSet& homes, const RunOptions& options)
{
    const Schedule plan = plan_steps(options);
    const HomeStepper stepper(grid, params, schedule, homes, options.dt);

    const auto count = static_cast<long>(homes.size());
    std::vector<HomeRun> runs(homes.size());
    const bool parallel = options.execution == Execution::parallel;
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (long i = 0; i < count; ++i) {
        run_home(grid, stepper, homes, static_cast<std::size_t>(i), plan, runs[static_cast<std::size_t>(i)]);
    }

    for (std::size_t i = 0; i < runs.size(); ++i) {
        if (runs[i].failure) {
            rethrow_tagged(runs[i], i);
        }
    }

    Trajectory traj;
    for (long n : plan.output_steps) {
        traj.times.push_back(static_cast<double>(n) * options.dt);
    }
    traj.per_home.assign(plan.output_steps.size(), std::vector<HomeAggregate>(homes.size()));
    traj.global.assign(plan.output_steps.size(), HomeAggregate{});
    for (std::size_t i = 0; i < runs.size(); ++i) {
        for (std::size_t k = 0; k < plan.output_steps.size(); ++k) {
            const auto& a = runs[i].aggregates[k];
            traj.per_home[k][i] = a;
            traj.global[k].u += a.u;
            traj.global[k].v += a.v;
            traj.global[k].w += a.w;
        }
        traj.diagnostics.steps.merge(runs[i].diagnostics);
        traj.diagnostics.max_relative_mass_error =
            std::max(traj.diagnostics.max_relative_mass_error, runs[i].max_relative_mass_error);
    }
    for (std::size_t k = 0; k < plan.snapshot_steps.size(); ++k) {
        Snapshot snap;
        snap.t = static_cast<double>(plan.snapshot_steps[k]) * options.dt;
        snap.travelers = grid.zeros();
        snap.workers = grid.zeros();
        snap.homes.reserve(runs.size());
        for (auto& run : runs) {
            snap.travelers += run.snapshots[k].v;
            snap.workers += run.snapshots[k].w;
            snap.homes.push_back(std::move(run.snapshots[k]));
        }
        traj.snapshots.push_back(std::move(snap));
    }
    return traj;
}

} // namespace rthome
