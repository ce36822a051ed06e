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
#ifndef RTHOME_CHARACTERISTICS_H
#define RTHOME_CHARACTERISTICS_H

#include "rthome/grid.h"
#include "rthome/velocity.h"

#include <functional>

namespace rthome
{

/// Step control for characteristic integration: classic RK4 with h <= relative_step * max(1, |t|).
struct FlowOptions {
    double relative_step = 1e-3;
    double max_steps = 1e8;
};

/**
 * @brief Position at time t of the trajectory of dx/dt = C(x) started at z.
 *
 * Negative t integrates the reversed field. @throws ResourceError if the
 * step count would exceed options.max_steps or t is not finite.
 */
Point characteristic_flow(const Point& z, double t, const VelocityField& velocity, const FlowOptions& options = {});

/**
 * @brief Determinant of the Jacobian of z -> characteristic_flow(z, t).
 *
 * Computed as exp of the divergence integrated along the trajectory (Jacobi's
 * formula); for t < 0 the exponent is the negated integral along the
 * reversed trajectory.
 */
double flow_jacobian_det(const Point& z, double t, const VelocityField& velocity, const FlowOptions& options = {});

/**
 * @brief Exact solution at (t, x) of the pure transport problem dv/dt = -div(v C), v(0) = v0.
 *
 * Follows the characteristic back from x to its foot z and scales v0(z) by the
 * volume change along the way. @throws std::domain_error if t < 0.
 */
double pure_convection_oracle(const std::function<double(Point)>& v0, double t, const VelocityField& velocity,
                              const Point& x, const FlowOptions& options = {});

} // namespace rthome

#endif // RTHOME_CHARACTERISTICS_H
