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
#ifndef RTHOME_HEAT_KERNEL_H
#define RTHOME_HEAT_KERNEL_H

#include "rthome/grid.h"

#include <functional>

namespace rthome
{

/**
 * @brief Free-space solutions of dv/dt = eps^2 Laplacian(v) on the plane.
 *
 * The kernel is K(t, x) = exp(-|x|^2 / (4 eps^2 t)) / (4 pi eps^2 t). All
 * members throw std::domain_error unless t > 0 and epsilon > 0.
 */
class HeatKernelOracle
{
public:
    explicit HeatKernelOracle(double epsilon);

    double epsilon() const
    {
        return m_epsilon;
    }

    double kernel(double t, const Point& x) const;

    /// (K(t, .) * v0)(x) by Simpson quadrature over the support box of v0.
    double convolve(const std::function<double(Point)>& v0, double t, const Point& x, const Bounds& support,
                    int nodes = 401) const;

    /// Closed form for v0 = mass * g(. - center) with standard deviation sigma.
    double gaussian_solution(double mass, const Point& center, double sigma, double t, const Point& x) const;

private:
    void check(double t) const;

    double m_epsilon;
};

} // namespace rthome

#endif // RTHOME_HEAT_KERNEL_H
