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
#include "rthome/velocity.h"
#include "rthome/error.h"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace rthome
{

namespace
{

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

struct Stencil {
    std::size_t i0, i1, j0, j1;
    double s, t;
};

Stencil locate(const Grid& grid, const Point& x)
{
    auto axis = [](double coord, double first, double h, int n, std::size_t& lo, std::size_t& hi, double& frac) {
        double r = (coord - first) / h;
        r = std::clamp(r, 0.0, static_cast<double>(n - 1));
        auto k = static_cast<int>(std::floor(r));
        k = std::min(k, n - 2);
        lo = static_cast<std::size_t>(k);
        hi = lo + 1;
        frac = r - k;
    };
    Stencil st{};
    axis(x.x1, grid.x1(0), grid.dx1(), grid.n1(), st.i0, st.i1, st.s);
    axis(x.x2, grid.x2(0), grid.dx2(), grid.n2(), st.j0, st.j1, st.t);
    return st;
}

double bilinear(const Grid& grid, const Field& f, const Stencil& st)
{
    const auto n1 = static_cast<std::size_t>(grid.n1());
    auto at = [&](std::size_t i, std::size_t j) { return f[static_cast<Eigen::Index>(j * n1 + i)]; };
    return (1 - st.s) * (1 - st.t) * at(st.i0, st.j0) + st.s * (1 - st.t) * at(st.i1, st.j0) +
           (1 - st.s) * st.t * at(st.i0, st.j1) + st.s * st.t * at(st.i1, st.j1);
}

Field sample_divergence(const Grid& grid, const Field& c1, const Field& c2)
{
    const int n1 = grid.n1();
    const int n2 = grid.n2();
    Field div(static_cast<Eigen::Index>(grid.size()));
    auto at = [&](const Field& f, int i, int j) { return f[static_cast<Eigen::Index>(grid.offset(i, j))]; };
    for (int j = 0; j < n2; ++j) {
        for (int i = 0; i < n1; ++i) {
            const int il = std::max(i - 1, 0), ir = std::min(i + 1, n1 - 1);
            const int jl = std::max(j - 1, 0), jr = std::min(j + 1, n2 - 1);
            const double d1 = (at(c1, ir, j) - at(c1, il, j)) / ((ir - il) * grid.dx1());
            const double d2 = (at(c2, i, jr) - at(c2, i, jl)) / ((jr - jl) * grid.dx2());
            div[static_cast<Eigen::Index>(grid.offset(i, j))] = d1 + d2;
        }
    }
    return div;
}

} // namespace

VelocityField VelocityField::constant(const Vec2& c)
{
    return VelocityField(Constant{c});
}

VelocityField VelocityField::linear(const Mat2& matrix, const Vec2& offset)
{
    return VelocityField(Linear{matrix, offset});
}

VelocityField VelocityField::rotation(double omega, const Point& center)
{
    Mat2 m;
    m << 0.0, -omega, omega, 0.0;
    const Vec2 c(center.x1, center.x2);
    return linear(m, -m * c);
}

VelocityField VelocityField::gridded(const Grid& grid, Field c1, Field c2)
{
    const auto n = static_cast<Eigen::Index>(grid.size());
    if (c1.size() != n || c2.size() != n) {
        throw ConfigError(fmt::format("gridded velocity needs {} samples per component, got {} and {}", n,
                                      c1.size(), c2.size()));
    }
    Field div = sample_divergence(grid, c1, c2);
    return VelocityField(Gridded{std::make_shared<const Grid>(grid), std::move(c1), std::move(c2), std::move(div)});
}

VelocityField VelocityField::custom(std::function<Vec2(const Point&)> evaluate,
                                    std::function<double(const Point&)> divergence)
{
    return VelocityField(Custom{std::move(evaluate), std::move(divergence)});
}

Vec2 VelocityField::operator()(const Point& x) const
{
    return std::visit(overloaded{
                          [](const Zero&) -> Vec2 { return Vec2::Zero(); },
                          [](const Constant& c) -> Vec2 { return c.value; },
                          [&](const Linear& l) -> Vec2 { return l.matrix * Vec2(x.x1, x.x2) + l.offset; },
                          [&](const Gridded& g) -> Vec2 {
                              const auto st = locate(*g.grid, x);
                              return {bilinear(*g.grid, g.c1, st), bilinear(*g.grid, g.c2, st)};
                          },
                          [&](const Custom& c) -> Vec2 { return c.evaluate(x); },
                      },
                      m_form);
}

double VelocityField::divergence(const Point& x) const
{
    return std::visit(overloaded{
                          [](const Zero&) { return 0.0; },
                          [](const Constant&) { return 0.0; },
                          [](const Linear& l) { return l.matrix.trace(); },
                          [&](const Gridded& g) { return bilinear(*g.grid, g.divergence, locate(*g.grid, x)); },
                          [&](const Custom& c) { return c.divergence(x); },
                      },
                      m_form);
}

double VelocityField::max_speed(const Grid& grid) const
{
    if (is_zero()) {
        return 0.0;
    }
    double best = 0.0;
    for (int j = 0; j < grid.n2(); ++j) {
        for (int i = 0; i < grid.n1(); ++i) {
            const double x1 = grid.x1(i), x2 = grid.x2(j);
            best = std::max(best, (*this)({x1, x2}).norm());
            best = std::max(best, (*this)({x1 + 0.5 * grid.dx1(), x2}).norm());
            best = std::max(best, (*this)({x1 - 0.5 * grid.dx1(), x2}).norm());
            best = std::max(best, (*this)({x1, x2 + 0.5 * grid.dx2()}).norm());
            best = std::max(best, (*this)({x1, x2 - 0.5 * grid.dx2()}).norm());
        }
    }
    return best;
}

} // namespace rthome
