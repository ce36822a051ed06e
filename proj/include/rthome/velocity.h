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
#ifndef RTHOME_VELOCITY_H
#define RTHOME_VELOCITY_H

#include "rthome/grid.h"

#include <Eigen/Core>

#include <functional>
#include <memory>
#include <variant>

namespace rthome
{

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/**
 * @brief Time-independent transport speed x -> C(x) together with its divergence.
 *
 * Closed forms carry an analytic divergence. Gridded samples are interpolated
 * bilinearly and their divergence comes from centered differences of the
 * samples (one-sided on the outer ring), interpolated the same way.
 */
class VelocityField
{
public:
    struct Zero {
    };
    struct Constant {
        Vec2 value;
    };
    /// C(x) = matrix * x + offset
    struct Linear {
        Mat2 matrix;
        Vec2 offset;
    };
    struct Gridded {
        std::shared_ptr<const Grid> grid;
        Field c1;
        Field c2;
        Field divergence;
    };
    struct Custom {
        std::function<Vec2(const Point&)> evaluate;
        std::function<double(const Point&)> divergence;
    };

    VelocityField()
        : m_form(Zero{})
    {
    }

    static VelocityField zero()
    {
        return VelocityField();
    }
    static VelocityField constant(const Vec2& c);
    static VelocityField linear(const Mat2& matrix, const Vec2& offset);
    /// Rigid rotation with angular speed omega (radians per unit time) about center.
    static VelocityField rotation(double omega, const Point& center);
    /// @throws ConfigError if sample sizes do not match the grid.
    static VelocityField gridded(const Grid& grid, Field c1, Field c2);
    static VelocityField custom(std::function<Vec2(const Point&)> evaluate,
                                std::function<double(const Point&)> divergence);

    Vec2 operator()(const Point& x) const;
    double divergence(const Point& x) const;

    bool is_zero() const
    {
        return std::holds_alternative<Zero>(m_form);
    }

    /// Largest |C| over the cell centers and face midpoints of grid.
    double max_speed(const Grid& grid) const;

private:
    using Form = std::variant<Zero, Constant, Linear, Gridded, Custom>;
    explicit VelocityField(Form form)
        : m_form(std::move(form))
    {
    }

    Form m_form;
};

} // namespace rthome

#endif // RTHOME_VELOCITY_H
