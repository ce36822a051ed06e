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
#include "rthome/characteristics.h"
#include "rthome/error.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rthome
{

namespace
{

struct FlowResult {
    Point position;
    double log_det;
};

// RK4 on the augmented system x' = C(x), s' = div C(x); s(t) is the log of the
// Jacobian determinant. A negative t runs the same system backwards in time.
FlowResult integrate(const Point& z, double t, const VelocityField& velocity, const FlowOptions& options)
{
    if (!std::isfinite(t)) {
        throw ResourceError(fmt::format("characteristic time {} is not finite", t));
    }
    const double h_max = options.relative_step * std::max(1.0, std::abs(t));
    const double steps_needed = std::ceil(std::abs(t) / h_max);
    if (steps_needed > options.max_steps) {
        throw ResourceError(fmt::format("characteristic integration needs {} steps (limit {})", steps_needed,
                                        options.max_steps));
    }
    const auto steps = static_cast<long>(steps_needed);
    if (steps == 0) {
        return {z, 0.0};
    }
    const double h = t / static_cast<double>(steps);

    Vec2 x(z.x1, z.x2);
    double s = 0.0;
    auto rhs = [&](const Vec2& p, Vec2& dx) {
        const Point q{p[0], p[1]};
        dx = velocity(q);
        return velocity.divergence(q);
    };
    Vec2 k1, k2, k3, k4;
    for (long n = 0; n < steps; ++n) {
        const double d1 = rhs(x, k1);
        const double d2 = rhs(x + 0.5 * h * k1, k2);
        const double d3 = rhs(x + 0.5 * h * k2, k3);
        const double d4 = rhs(x + h * k3, k4);
        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        s += (h / 6.0) * (d1 + 2.0 * d2 + 2.0 * d3 + d4);
    }
    return {{x[0], x[1]}, s};
}

} // namespace

Point characteristic_flow(const Point& z, double t, const VelocityField& velocity, const FlowOptions& options)
{
    return integrate(z, t, velocity, options).position;
}

double flow_jacobian_det(const Point& z, double t, const VelocityField& velocity, const FlowOptions& options)
{
    return std::exp(integrate(z, t, velocity, options).log_det);
}

double pure_convection_oracle(const std::function<double(Point)>& v0, double t, const VelocityField& velocity,
                              const Point& x, const FlowOptions& options)
{
    if (t < 0.0) {
        throw std::domain_error("pure transport solution requires t >= 0");
    }
    const auto back = integrate(x, -t, velocity, options);
    return std::exp(back.log_det) * v0(back.position);
}

} // namespace rthome
