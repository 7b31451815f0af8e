/*
 Copyright 2026 The switchopt Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/

#include "support.hpp"

#include "switchopt/builtin_models.hpp"
#include "switchopt/errors.hpp"
#include "switchopt/model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>

namespace switchopt {
namespace {

using testing::Rng;

constexpr double kInf = std::numeric_limits<double>::infinity();

TEST(ControlSet, BoxClampContainsViolation) {
    const ControlSet box = ControlSet::box(Vector{{-1.0, 0.0}}, Vector{{1.0, 2.0}});
    EXPECT_EQ(box.kind(), ControlSet::Kind::Box);
    EXPECT_EQ(box.clamp(Vector{{3.0, -1.0}}), (Vector{{1.0, 0.0}}));
    EXPECT_TRUE(box.contains(Vector{{0.5, 1.0}}));
    EXPECT_FALSE(box.contains(Vector{{1.001, 1.0}}));
    EXPECT_NEAR(box.violation(Vector{{1.001, 1.0}}), 1e-3, 1e-15);
    EXPECT_EQ(box.violation(Vector{{0.0, 0.0}}), 0.0);
}

TEST(ControlSet, RejectsInvertedOrInfiniteBoxBounds) {
    EXPECT_THROW(ControlSet::box(Vector{{1.0}}, Vector{{0.0}}), InvalidArgument);
    EXPECT_THROW(ControlSet::box(Vector{{-kInf}}, Vector{{0.0}}), InvalidArgument);
    EXPECT_THROW(ControlSet::box(Vector{{0.0, 1.0}}, Vector{{1.0}}), InvalidArgument);
    EXPECT_NO_THROW(ControlSet::unbounded_box(Vector{{-kInf}}, Vector{{0.0}}));
}

TEST(ControlSet, UnboundedClampIsIdentity) {
    const ControlSet set = ControlSet::unbounded(2);
    const Vector u{{1e6, -1e6}};
    EXPECT_EQ(set.clamp(u), u);
    EXPECT_TRUE(set.contains(u));
}

TEST(Builtins, NamesAndShapes) {
    const auto names = builtin_names();
    ASSERT_EQ(names.size(), 3u);

    const HybridModel tank = builtin_model("double_tank");
    EXPECT_EQ(tank.num_modes(), 2);
    EXPECT_EQ(tank.state_dim, 2);
    EXPECT_EQ(tank.x0, (Vector{{2.0, 2.0}}));
    EXPECT_EQ(tank.t_f, 30.0);

    const HybridModel lqr = builtin_model("unstable_lqr");
    EXPECT_EQ(lqr.num_modes(), 2);
    EXPECT_EQ(lqr.x0, (Vector{{0.0, 2.0}}));
    EXPECT_EQ(lqr.t_f, 2.0);

    const HybridModel msd = builtin_model("mass_spring_damper");
    EXPECT_EQ(msd.num_modes(), 2);
    EXPECT_EQ(msd.x0, (Vector{{3.0, 4.0}}));
    EXPECT_EQ(msd.t_f, 12.0);
    const ParameterMap p = builtin_parameters("mass_spring_damper");
    EXPECT_EQ(p.at("b1"), 1.0);
    EXPECT_EQ(p.at("b2"), 50.0);
}

TEST(Builtins, UnknownNameAndParameter) {
    EXPECT_THROW(builtin_model("triple_tank"), NotFound);
    EXPECT_THROW(builtin_parameters("triple_tank"), NotFound);
    try {
        builtin_model("double_tank", {{"gamma", 1.0}});
        FAIL() << "expected InvalidArgument";
    } catch (const InvalidArgument& e) {
        EXPECT_NE(std::string(e.what()).find("v1"), std::string::npos);
    }
}

TEST(Builtins, OverridesApply) {
    const HybridModel tank = builtin_model("double_tank", {{"t_f", 10.0}, {"x0_1", 1.0}});
    EXPECT_EQ(tank.t_f, 10.0);
    EXPECT_EQ(tank.x0[0], 1.0);
}

TEST(Dynamics, DoubleTankHighInflow) {
    const HybridModel tank = builtin_model("double_tank");
    const Vector f = eval_mode_dynamics(tank, 1, Vector{{2.0, 2.0}}, Vector());
    EXPECT_NEAR(f[0], 2.0 - std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(f[1], 0.0, 1e-15);
    EXPECT_NEAR(f[0], 0.585786, 1e-6);
}

TEST(Dynamics, DoubleTankJacobian) {
    const HybridModel tank = builtin_model("double_tank");
    const Matrix jac = eval_mode_dynamics_jac(tank, 0, Vector{{2.0, 2.0}}, Vector());
    const double s = 1.0 / (2.0 * std::sqrt(2.0));
    EXPECT_NEAR(jac(0, 0), -s, 1e-15);
    EXPECT_NEAR(jac(0, 1), 0.0, 1e-15);
    EXPECT_NEAR(jac(1, 0), s, 1e-15);
    EXPECT_NEAR(jac(1, 1), -s, 1e-15);
}

TEST(Dynamics, DoubleTankClampsNegativeLevels) {
    const HybridModel tank = builtin_model("double_tank");
    const Vector f = eval_mode_dynamics(tank, 0, Vector{{-0.1, 1.0}}, Vector());
    EXPECT_TRUE(f.allFinite());
    EXPECT_NEAR(f[0], 1.0, 1e-15);
    EXPECT_NEAR(f[1], -1.0, 1e-15);
    EXPECT_FALSE(tank.state_domain(Vector{{-0.1, 1.0}}));
}

TEST(Dynamics, UnstableLqrModeOne) {
    const HybridModel lqr = builtin_model("unstable_lqr");
    const Vector f = eval_mode_dynamics(lqr, 0, Vector{{0.0, 2.0}}, Vector{{0.0}});
    EXPECT_NEAR(f[0], 2.4, 1e-14);
    EXPECT_NEAR(f[1], 6.8, 1e-14);
}

TEST(Dynamics, LtiJacobianIsA) {
    const HybridModel lqr = builtin_model("unstable_lqr");
    const Matrix jac = eval_mode_dynamics_jac(lqr, 1, Vector{{0.3, -0.7}}, Vector{{5.0}});
    EXPECT_EQ(jac, (Matrix{{4.0, 3.0}, {-1.0, 0.0}}));
}

TEST(Dynamics, ZeroInputMatrixGivesDrift) {
    AffineQuadraticSpec spec;
    spec.x0 = Vector::Zero(2);
    spec.t_f = 1.0;
    AffineQuadraticMode m;
    m.A = Matrix{{1.0, 2.0}, {3.0, 4.0}};
    m.B = Matrix::Zero(2, 1);
    m.d = Vector{{0.5, -0.5}};
    m.Q = Matrix::Zero(2, 2);
    m.x_ref = Vector::Zero(2);
    m.R = Matrix::Identity(1, 1);
    m.u_ref = Vector::Zero(1);
    m.lower = Vector{{-1.0}};
    m.upper = Vector{{1.0}};
    spec.modes = {m};
    spec.terminal_Q = Matrix::Zero(2, 2);
    spec.terminal_ref = Vector::Zero(2);
    const HybridModel model = affine_quadratic_model(spec);
    const Vector x{{1.0, 1.0}};
    EXPECT_EQ(eval_mode_dynamics(model, 0, x, Vector{{-1.0}}), eval_mode_dynamics(model, 0, x, Vector{{1.0}}));
    EXPECT_EQ(eval_mode_dynamics(model, 0, x, Vector{{0.3}}), (Vector{{3.5, 6.5}}));
}

TEST(Dynamics, ArgumentErrors) {
    const HybridModel lqr = builtin_model("unstable_lqr");
    EXPECT_THROW(eval_mode_dynamics(lqr, 2, Vector{{0.0, 2.0}}, Vector{{0.0}}), InvalidArgument);
    EXPECT_THROW(eval_mode_dynamics(lqr, -1, Vector{{0.0, 2.0}}, Vector{{0.0}}), InvalidArgument);
    EXPECT_THROW(eval_mode_dynamics(lqr, 0, Vector{{0.0}}, Vector{{0.0}}), InvalidArgument);
    EXPECT_THROW(eval_mode_dynamics(lqr, 0, Vector{{0.0, 2.0}}, Vector{{0.0, 1.0}}), InvalidArgument);
    EXPECT_THROW(eval_mode_dynamics_jac(lqr, 5, Vector{{0.0, 2.0}}, Vector{{0.0}}), InvalidArgument);
    EXPECT_THROW(eval_run_cost(lqr, 0, 0.0, Vector{{0.0, 2.0}}, Vector()), InvalidArgument);
}

TEST(RunCost, OracleValues) {
    const HybridModel tank = builtin_model("double_tank");
    // r(0) = 2.5
    EXPECT_NEAR(eval_run_cost(tank, 0, 0.0, Vector{{1.0, 2.5}}, Vector()), 0.0, 1e-15);
    EXPECT_NEAR(eval_run_cost(tank, 0, 0.0, Vector{{1.0, 3.5}}, Vector()), 2.0, 1e-14);

    const HybridModel msd = builtin_model("mass_spring_damper");
    EXPECT_NEAR(eval_run_cost(msd, 1, 0.0, Vector{{0.0, 0.0}}, Vector{{1.0}}), 1.2, 1e-15);
    EXPECT_NEAR(eval_run_cost(msd, 0, 0.0, Vector{{0.0, 0.0}}, Vector{{1.0}}), 0.2, 1e-15);

    const HybridModel lqr = builtin_model("unstable_lqr");
    EXPECT_EQ(eval_run_cost(lqr, 0, 0.0, Vector{{0.0, 2.0}}, Vector{{0.0}}), 0.0);
}

TEST(Terminal, BuiltinTerminalTerms) {
    const HybridModel lqr = builtin_model("unstable_lqr");
    const Vector x{{5.0, 1.0}};
    EXPECT_NEAR(lqr.terminal_cost(x), 1.0, 1e-15);
    EXPECT_EQ(lqr.terminal_cost_grad(x), (Vector{{1.0, -1.0}}));

    const HybridModel msd = builtin_model("mass_spring_damper");
    const Vector y{{1.0, 2.0}};
    EXPECT_NEAR(msd.terminal_penalty_value(y), 5.0 + 120.0, 1e-12);
    EXPECT_NEAR(msd.terminal_cost(y), 5.0 + 125.0, 1e-12);
    EXPECT_EQ(msd.terminal_cost_grad(y), (Vector{{2.0 + 10.0, 4.0 + 120.0}}));
}

TEST(Terminal, GradientSelfCheck) {
    Rng rng(11);
    for (const auto& name : builtin_names()) {
        const HybridModel model = builtin_model(name);
        for (int trial = 0; trial < 20; ++trial) {
            const Vector x = testing::random_vector(rng, model.state_dim, 0.1, 5.0);
            EXPECT_LT(terminal_gradient_error(model, x), 1e-5) << name;
        }
    }
}

// Central differences at 100 random (x, u) per builtin and mode.
TEST(Derivatives, BuiltinJacobiansAndCostGradients) {
    Rng rng(7);
    for (const auto& name : builtin_names()) {
        const HybridModel model = builtin_model(name);
        for (int i = 0; i < model.num_modes(); ++i) {
            const ModeSpec& mode = model.modes[static_cast<std::size_t>(i)];
            for (int trial = 0; trial < 100; ++trial) {
                Vector x = testing::random_vector(rng, model.state_dim, 0.2, 4.0);
                if (name == "mass_spring_damper" && std::abs(x[0] - 1.0) < 1e-3) {
                    x[0] += 0.01;
                }
                const Vector u = testing::random_input(rng, mode);
                const double t = testing::uniform(rng, 0.0, model.t_f);
                const Matrix jac = eval_mode_dynamics_jac(model, i, x, u);
                const Matrix fd = testing::fd_jacobian(
                    [&](const Vector& y) { return eval_mode_dynamics(model, i, y, u); }, x, 1e-6);
                EXPECT_LT(testing::relative_error(jac, fd), 1e-4) << name << " mode " << i;

                const Vector g = eval_run_cost_grad_x(model, i, t, x, u);
                const Vector gfd = testing::fd_gradient(
                    [&](const Vector& y) { return eval_run_cost(model, i, t, y, u); }, x, 1e-6);
                EXPECT_LT(testing::relative_error(g, gfd), 1e-4) << name << " mode " << i;
            }
        }
    }
}

TEST(Derivatives, SpringKinkUsesLeftBranch) {
    const HybridModel msd = builtin_model("mass_spring_damper");
    const Matrix jac = eval_mode_dynamics_jac(msd, 0, Vector{{1.0, 0.0}}, Vector{{0.0}});
    EXPECT_EQ(jac(1, 0), -1.0);
    const Matrix right = eval_mode_dynamics_jac(msd, 0, Vector{{1.0 + 1e-12, 0.0}}, Vector{{0.0}});
    EXPECT_EQ(right(1, 0), -3.0);
}

TEST(Properties, DynamicsAffineInInput) {
    Rng rng(3);
    for (const auto& name : builtin_names()) {
        const HybridModel model = builtin_model(name);
        for (int i = 0; i < model.num_modes(); ++i) {
            const ModeSpec& mode = model.modes[static_cast<std::size_t>(i)];
            for (int trial = 0; trial < 50; ++trial) {
                const Vector x = testing::random_vector(rng, model.state_dim, 0.1, 4.0);
                const Vector u = testing::random_input(rng, mode);
                const Vector v = testing::random_input(rng, mode);
                const Vector mid = eval_mode_dynamics(model, i, x, (u + v) / 2.0);
                const Vector avg =
                    (eval_mode_dynamics(model, i, x, u) + eval_mode_dynamics(model, i, x, v)) / 2.0;
                EXPECT_LT((mid - avg).norm(), 1e-12 * std::max(1.0, avg.norm())) << name;
            }
        }
    }
}

TEST(Properties, RunCostMidpointConvex) {
    Rng rng(5);
    for (const auto& name : builtin_names()) {
        const HybridModel model = builtin_model(name);
        for (int i = 0; i < model.num_modes(); ++i) {
            const ModeSpec& mode = model.modes[static_cast<std::size_t>(i)];
            for (int trial = 0; trial < 50; ++trial) {
                const Vector x = testing::random_vector(rng, model.state_dim, 0.1, 4.0);
                const double t = testing::uniform(rng, 0.0, model.t_f);
                const Vector u = testing::random_input(rng, mode);
                const Vector v = testing::random_input(rng, mode);
                const double mid = eval_run_cost(model, i, t, x, (u + v) / 2.0);
                const double avg = (eval_run_cost(model, i, t, x, u) + eval_run_cost(model, i, t, x, v)) / 2.0;
                EXPECT_LE(mid, avg + 1e-12) << name;
            }
        }
    }
}

AffineQuadraticSpec lqr_as_affine() {
    const HybridModel ref = builtin_model("unstable_lqr");
    AffineQuadraticSpec spec;
    spec.name = "lqr_affine";
    spec.x0 = ref.x0;
    spec.t_f = ref.t_f;
    const Matrix a[] = {Matrix{{0.6, 1.2}, {-0.8, 3.4}}, Matrix{{4.0, 3.0}, {-1.0, 0.0}}};
    const Matrix b[] = {Matrix{{1.0}, {1.0}}, Matrix{{2.0}, {-1.0}}};
    for (int i = 0; i < 2; ++i) {
        AffineQuadraticMode m;
        m.A = a[i];
        m.B = b[i];
        m.d = Vector::Zero(2);
        m.Q = Matrix{{0.0, 0.0}, {0.0, 0.5}};
        m.x_ref = Vector{{0.0, 2.0}};
        m.R = Matrix::Constant(1, 1, 0.5);
        m.u_ref = Vector::Zero(1);
        m.lower = Vector::Constant(1, -kInf);
        m.upper = Vector::Constant(1, kInf);
        spec.modes.push_back(m);
    }
    spec.terminal_Q = 0.5 * Matrix::Identity(2, 2);
    spec.terminal_ref = Vector{{4.0, 2.0}};
    return spec;
}

TEST(AffineQuadratic, ReproducesUnstableLqr) {
    const HybridModel ref = builtin_model("unstable_lqr");
    const HybridModel aq = affine_quadratic_model(lqr_as_affine());
    Rng rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const int i = testing::uniform_int(rng, 0, 1);
        const Vector x = testing::random_vector(rng, 2, -5.0, 5.0);
        const Vector u = testing::random_vector(rng, 1, -5.0, 5.0);
        const Vector p = testing::random_vector(rng, 2, -5.0, 5.0);
        const double t = testing::uniform(rng, 0.0, 2.0);
        EXPECT_LT((eval_mode_dynamics(aq, i, x, u) - eval_mode_dynamics(ref, i, x, u)).norm(), 1e-12);
        EXPECT_NEAR(eval_run_cost(aq, i, t, x, u), eval_run_cost(ref, i, t, x, u), 1e-12);
        EXPECT_LT((eval_run_cost_grad_x(aq, i, t, x, u) - eval_run_cost_grad_x(ref, i, t, x, u)).norm(), 1e-12);
        EXPECT_NEAR(aq.terminal_cost(x), ref.terminal_cost(x), 1e-12);
        EXPECT_LT((aq.terminal_cost_grad(x) - ref.terminal_cost_grad(x)).norm(), 1e-12);
        EXPECT_NEAR(box_quad_min(aq, i, x, p)[0], box_quad_min(ref, i, x, p)[0], 1e-12);
    }
}

TEST(AffineQuadratic, Errors) {
    AffineQuadraticSpec spec = lqr_as_affine();
    spec.modes[0].R = Matrix::Zero(1, 1);
    EXPECT_THROW(affine_quadratic_model(spec), InvalidArgument);

    spec = lqr_as_affine();
    spec.modes[1].R = Matrix::Constant(1, 1, -1.0);
    spec.modes[1].lower = Vector{{-1.0}};
    spec.modes[1].upper = Vector{{1.0}};
    EXPECT_THROW(affine_quadratic_model(spec), InvalidArgument);

    spec = lqr_as_affine();
    spec.modes[0].B = Matrix{{1.0, 0.0}, {0.0, 1.0}};
    spec.modes[0].R = Matrix{{1.0, 0.2}, {0.2, 1.0}};
    spec.modes[0].u_ref = Vector::Zero(2);
    spec.modes[0].lower = Vector{{-1.0, -1.0}};
    spec.modes[0].upper = Vector{{1.0, 1.0}};
    EXPECT_THROW(affine_quadratic_model(spec), Unsupported);

    spec = lqr_as_affine();
    spec.modes[0].A = Matrix::Zero(3, 3);
    EXPECT_THROW(affine_quadratic_model(spec), InvalidArgument);

    spec = lqr_as_affine();
    spec.modes.clear();
    EXPECT_THROW(affine_quadratic_model(spec), InvalidArgument);
}

TEST(AffineQuadratic, FlatBoxAxisIsAllowed) {
    AffineQuadraticSpec spec = lqr_as_affine();
    spec.modes[0].R = Matrix::Zero(1, 1);
    spec.modes[0].lower = Vector{{-1.0}};
    spec.modes[0].upper = Vector{{1.0}};
    EXPECT_NO_THROW(affine_quadratic_model(spec));
}

TEST(AffineQuadratic, ConstantInputCost) {
    AffineQuadraticSpec spec;
    spec.x0 = Vector::Zero(1);
    spec.t_f = 3.0;
    AffineQuadraticMode m;
    m.A = Matrix::Zero(1, 1);
    m.B = Matrix::Zero(1, 2);
    m.d = Vector::Zero(1);
    m.Q = Matrix::Zero(1, 1);
    m.x_ref = Vector::Zero(1);
    m.R = Matrix::Identity(2, 2);
    m.u_ref = Vector::Zero(2);
    m.lower = Vector::Constant(2, -kInf);
    m.upper = Vector::Constant(2, kInf);
    spec.modes = {m};
    spec.terminal_Q = Matrix::Zero(1, 1);
    spec.terminal_ref = Vector::Zero(1);
    const HybridModel model = affine_quadratic_model(spec);
    const TimeGrid grid = TimeGrid::uniform(3.0, 0.01);
    const Vector u{{0.6, -0.8}};
    for (const Integrator method : {Integrator::Euler, Integrator::Trapezoid}) {
        EXPECT_NEAR(testing::total_cost(model, EmbeddedControl::one_hot(model, grid, 0, {u}), method), 3.0, 1e-12);
        EXPECT_EQ(testing::total_cost(model, EmbeddedControl::one_hot(model, grid, 0), method), 0.0);
    }
}

TEST(HybridModel, ValidateCatchesStructuralErrors) {
    HybridModel model = builtin_model("unstable_lqr");
    EXPECT_NO_THROW(model.validate());
    model.t_f = 0.0;
    EXPECT_THROW(model.validate(), InvalidArgument);
    model = builtin_model("unstable_lqr");
    model.modes.clear();
    EXPECT_THROW(model.validate(), InvalidArgument);
    model = builtin_model("unstable_lqr");
    model.x0 = Vector::Zero(3);
    EXPECT_THROW(model.validate(), InvalidArgument);
}

}  // namespace
}  // namespace switchopt
