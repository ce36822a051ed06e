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
#include "rthome/error.h"
#include "rthome/grid.h"
#include "rthome/operators.h"
#include "rthome/velocity.h"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

using namespace rthome;

namespace
{
const Bounds unit{0.0, 1.0, 0.0, 1.0};

Field random_field(const Grid& g, unsigned seed, double lo = -1.0, double hi = 1.0)
{
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    Field f = g.zeros();
    for (Eigen::Index m = 0; m < f.size(); ++m) {
        f[m] = u(rng);
    }
    return f;
}

/// Row of four values repeated on every grid row.
Field rows_of(const Grid& g, std::vector<double> row)
{
    Field f = g.zeros();
    for (int j = 0; j < g.n2(); ++j) {
        for (int i = 0; i < g.n1(); ++i) {
            f[static_cast<Eigen::Index>(g.offset(i, j))] = row[static_cast<std::size_t>(i)];
        }
    }
    return f;
}
} // namespace

TEST(SecondDifference, neumann_closure_for_n4)
{
    const Eigen::MatrixXd b = Eigen::MatrixXd(second_difference_1d(4));
    Eigen::MatrixXd expected(4, 4);
    expected << -1, 1, 0, 0, 1, -2, 1, 0, 0, 1, -2, 1, 0, 0, 1, -1;
    EXPECT_EQ(b, expected);
    EXPECT_THROW(second_difference_1d(1), ConfigError);
}

TEST(Laplacian, equals_kronecker_form)
{
    const Grid g = build_grid({0.0, 2.0, -1.0, 0.5}, 5, 3);
    const auto a = build_laplacian(g);
    EXPECT_TRUE(a.symmetric);
    const Eigen::MatrixXd b1 = Eigen::MatrixXd(second_difference_1d(5));
    const Eigen::MatrixXd b2 = Eigen::MatrixXd(second_difference_1d(3));
    const Eigen::MatrixXd i1 = Eigen::MatrixXd::Identity(5, 5);
    const Eigen::MatrixXd i2 = Eigen::MatrixXd::Identity(3, 3);
    // Kronecker products written out explicitly, offset = j*n1 + i
    Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(15, 15);
    for (int j = 0; j < 3; ++j) {
        for (int i = 0; i < 5; ++i) {
            for (int l = 0; l < 3; ++l) {
                for (int k = 0; k < 5; ++k) {
                    expected(j * 5 + i, l * 5 + k) = i2(j, l) * b1(i, k) / (g.dx1() * g.dx1()) +
                                                     b2(j, l) * i1(i, k) / (g.dx2() * g.dx2());
                }
            }
        }
    }
    EXPECT_LT((Eigen::MatrixXd(a.matrix) - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Laplacian, zero_row_sums_symmetry_and_mass)
{
    const Grid g = build_grid(unit, 17, 11);
    const auto a = build_laplacian(g);
    const Eigen::MatrixXd dense(a.matrix);
    EXPECT_LT(dense.rowwise().sum().cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT((dense - dense.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    const Field ones = Field::Ones(static_cast<Eigen::Index>(g.size()));
    EXPECT_LT(a.apply(ones).cwiseAbs().maxCoeff(), 1e-9);
    for (unsigned s = 0; s < 5; ++s) {
        EXPECT_NEAR(euler_sum(g, a.apply(random_field(g, s))), 0.0, 1e-9);
    }
}

TEST(Laplacian, spectrum_matches_cosine_modes)
{
    const Grid g = build_grid(unit, 4, 4);
    const Eigen::MatrixXd dense(build_laplacian(g).matrix);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
    std::vector<double> got(es.eigenvalues().data(), es.eigenvalues().data() + 16);

    std::vector<double> expected;
    const double h2 = g.dx1() * g.dx1();
    for (int p = 0; p < 4; ++p) {
        for (int q = 0; q < 4; ++q) {
            const double sp = std::sin(p * std::numbers::pi / 8.0);
            const double sq = std::sin(q * std::numbers::pi / 8.0);
            expected.push_back(-4.0 * (sp * sp + sq * sq) / h2);
        }
    }
    std::sort(expected.begin(), expected.end());
    for (std::size_t k = 0; k < 16; ++k) {
        EXPECT_NEAR(got[k], expected[k], 1e-10);
    }
    EXPECT_NEAR(got.back(), 0.0, 1e-10);
    EXPECT_LT(got[14], -1e-3); // null space is the constants only
}

TEST(Laplacian, second_order_on_a_cosine_mode)
{
    // cos(pi x1) satisfies the no-flux condition; its Laplacian is -pi^2 cos(pi x1)
    double previous = 0.0;
    for (int n : {16, 32, 64}) {
        const Grid g = build_grid(unit, n, 4);
        const Field f = g.sample([](Point x) { return std::cos(std::numbers::pi * x.x1); });
        const Field exact = -std::numbers::pi * std::numbers::pi * f;
        const double err = (build_laplacian(g).apply(f) - exact).cwiseAbs().maxCoeff();
        if (previous > 0.0) {
            EXPECT_NEAR(previous / err, 4.0, 0.2);
        }
        previous = err;
    }
}

TEST(Convection, rightward_shift_on_4x2)
{
    const Grid g = build_grid(unit, 4, 2);
    const auto d = build_convection(g, VelocityField::constant({1.0, 0.0}));
    const Field out = d.apply(rows_of(g, {1, 1, 0, 0}));
    const Field expected = rows_of(g, {-4, 0, 4, 0});
    EXPECT_LT((out - expected).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_DOUBLE_EQ(convection_step_limit(d), 0.25);
}

TEST(Convection, leftward_shift_on_4x2)
{
    const Grid g = build_grid(unit, 4, 2);
    const Field out = apply_convection(rows_of(g, {1, 1, 0, 0}), VelocityField::constant({-1.0, 0.0}), g);
    const Field expected = rows_of(g, {4, -4, 0, 0});
    EXPECT_LT((out - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Convection, zero_field_gives_empty_operator)
{
    const Grid g = build_grid(unit, 6, 5);
    const auto d = build_convection(g, VelocityField::zero());
    EXPECT_EQ(d.matrix.nonZeros(), 0);
    EXPECT_TRUE(std::isinf(convection_step_limit(d)));
    EXPECT_EQ(apply_convection(random_field(g, 1), VelocityField::zero(), g), g.zeros());
}

TEST(Convection, conserves_mass_for_every_field_kind)
{
    const Grid g = build_grid({-1.0, 1.0, -1.0, 1.0}, 23, 19);
    Field c1 = random_field(g, 40), c2 = random_field(g, 41);
    const std::vector<VelocityField> fields = {
        VelocityField::constant({0.7, -1.3}),
        VelocityField::rotation(2.0, {0.1, -0.2}),
        VelocityField::linear((Mat2() << 0.5, -1.0, 0.3, 0.2).finished(), {0.1, 0.4}),
        VelocityField::gridded(g, c1, c2),
        VelocityField::custom([](const Point& x) { return Vec2(std::sin(3 * x.x2), x.x1 * x.x1); },
                              [](const Point&) { return 0.0; }),
    };
    for (const auto& c : fields) {
        const auto d = build_convection(g, c);
        for (unsigned s = 0; s < 4; ++s) {
            const Field f = random_field(g, 100 + s, 0.0, 3.0);
            EXPECT_NEAR(euler_sum(g, d.apply(f)), 0.0, 1e-11);
        }
        // columns sum to zero: mass leaving one cell enters a neighbour
        const Eigen::RowVectorXd colsum = Eigen::MatrixXd(d.matrix).colwise().sum();
        EXPECT_LT(colsum.cwiseAbs().maxCoeff(), 1e-9);
    }
}

TEST(Convection, positivity_at_step_limit)
{
    const Grid g = build_grid(unit, 20, 20);
    const auto c = VelocityField::rotation(3.0, {0.5, 0.5});
    const auto d = build_convection(g, c);
    const double dt = convection_step_limit(d);
    ASSERT_TRUE(std::isfinite(dt));
    const Eigen::VectorXd diag = Eigen::MatrixXd(d.matrix).diagonal();
    EXPECT_DOUBLE_EQ(dt, 1.0 / (-diag.minCoeff()));
    for (unsigned s = 0; s < 5; ++s) {
        const Field f = random_field(g, s, 0.0, 1.0);
        const Field next = f + dt * d.apply(f);
        EXPECT_GE(next.minCoeff(), -1e-12);
    }
    // off-diagonals carry inflow, so they are never negative
    for (int k = 0; k < d.matrix.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(d.matrix, k); it; ++it) {
            if (it.row() != it.col()) {
                EXPECT_GE(it.value(), 0.0);
            }
        }
    }
}

TEST(Convection, first_order_consistency_for_smooth_flux)
{
    // -div(f C) with C = (1, 0) and f = x1^2 is -2 x1 away from the inflow face
    const Grid g = build_grid(unit, 200, 3);
    const Field f = g.sample([](Point x) { return x.x1 * x.x1; });
    const Field out = apply_convection(f, VelocityField::constant({1.0, 0.0}), g);
    for (int i = 1; i < g.n1() - 1; ++i) {
        const double x = g.x1(i);
        EXPECT_NEAR(out[static_cast<Eigen::Index>(g.offset(i, 1))], -2.0 * x, 2.0 * g.dx1());
    }
}

TEST(Velocity, closed_form_values_and_divergence)
{
    const auto rot = VelocityField::rotation(2.0, {0.5, 0.5});
    const Vec2 v = rot({1.0, 0.5});
    EXPECT_NEAR(v[0], 0.0, 1e-15);
    EXPECT_NEAR(v[1], 1.0, 1e-15);
    EXPECT_EQ(rot.divergence({0.2, 0.9}), 0.0);

    const auto lin = VelocityField::linear((Mat2() << 0.3, 1.0, -2.0, 0.4).finished(), {1.0, 2.0});
    EXPECT_NEAR(lin.divergence({5.0, -3.0}), 0.7, 1e-15);
    const Vec2 lv = lin({1.0, 1.0});
    EXPECT_NEAR(lv[0], 2.3, 1e-15);
    EXPECT_NEAR(lv[1], 0.4, 1e-15);

    EXPECT_TRUE(VelocityField::zero().is_zero());
    EXPECT_FALSE(VelocityField::constant({0.0, 0.0}).is_zero());
    const Grid g = build_grid(unit, 4, 4);
    EXPECT_NEAR(VelocityField::constant({3.0, 4.0}).max_speed(g), 5.0, 1e-15);
}

TEST(Velocity, divergence_against_finite_differences)
{
    const auto custom = VelocityField::custom(
        [](const Point& x) { return Vec2(x.x1 * x.x2, std::sin(x.x2)); },
        [](const Point& x) { return x.x2 + std::cos(x.x2); });
    const auto lin = VelocityField::linear((Mat2() << -0.4, 2.0, 1.0, 0.9).finished(), {0.0, 0.0});
    const double h = 1e-6;
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        const Point x{u(rng), u(rng)};
        for (const auto* c : {&custom, &lin}) {
            const double fd = ((*c)({x.x1 + h, x.x2})[0] - (*c)({x.x1 - h, x.x2})[0]) / (2 * h) +
                              ((*c)({x.x1, x.x2 + h})[1] - (*c)({x.x1, x.x2 - h})[1]) / (2 * h);
            EXPECT_NEAR(c->divergence(x), fd, 1e-7);
        }
    }
}

TEST(Velocity, gridded_reproduces_linear_samples)
{
    // bilinear interpolation is exact for linear data inside the center hull
    const Grid g = build_grid(unit, 12, 9);
    const Field c1 = g.sample([](Point x) { return 0.5 * x.x1 - x.x2; });
    const Field c2 = g.sample([](Point x) { return 2.0 * x.x2 + 0.25; });
    const auto c = VelocityField::gridded(g, c1, c2);
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> u1(g.x1(0), g.x1(11)), u2(g.x2(0), g.x2(8));
    for (int k = 0; k < 50; ++k) {
        const Point x{u1(rng), u2(rng)};
        EXPECT_NEAR(c(x)[0], 0.5 * x.x1 - x.x2, 1e-12);
        EXPECT_NEAR(c(x)[1], 2.0 * x.x2 + 0.25, 1e-12);
        EXPECT_NEAR(c.divergence(x), 2.5, 1e-10);
    }
    EXPECT_THROW(VelocityField::gridded(g, Field::Zero(3), c2), ConfigError);
}
