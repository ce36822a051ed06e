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
#include "rthome/heat_kernel.h"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rthome
{

HeatKernelOracle::HeatKernelOracle(double epsilon)
    : m_epsilon(epsilon)
{
    if (!(epsilon >= 0.0)) {
        throw std::domain_error("diffusion coefficient must be nonnegative");
    }
}

void HeatKernelOracle::check(double t) const
{
    if (!(t > 0.0)) {
        throw std::domain_error("heat kernel requires t > 0");
    }
    if (!(m_epsilon > 0.0)) {
        throw std::domain_error("heat kernel requires epsilon > 0");
    }
}

double HeatKernelOracle::kernel(double t, const Point& x) const
{
    check(t);
    const double spread = 4.0 * m_epsilon * m_epsilon * t;
    return std::exp(-(x.x1 * x.x1 + x.x2 * x.x2) / spread) / (std::numbers::pi * spread);
}

double HeatKernelOracle::convolve(const std::function<double(Point)>& v0, double t, const Point& x,
                                  const Bounds& support, int nodes) const
{
    check(t);
    return simpson_2d(
        [&](Point z) { return kernel(t, {x.x1 - z.x1, x.x2 - z.x2}) * v0(z); }, support, nodes, nodes);
}

double HeatKernelOracle::gaussian_solution(double mass, const Point& center, double sigma, double t,
                                           const Point& x) const
{
    check(t);
    // Variances add under convolution: sigma^2 + 2 eps^2 t per axis.
    const double variance = sigma * sigma + 2.0 * m_epsilon * m_epsilon * t;
    const double d1 = x.x1 - center.x1;
    const double d2 = x.x2 - center.x2;
    return mass * std::exp(-(d1 * d1 + d2 * d2) / (2.0 * variance)) / (2.0 * std::numbers::pi * variance);
}

} // namespace rthome
