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
#include "switchopt/solver.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace switchopt {
namespace {

using testing::Rng;

HybridModel random_model(Rng& rng, int modes, int n) {
    testing::RandomInstanceOptions opt;
    opt.modes = modes;
    opt.state_dim = n;
    return affine_quadratic_model(testing::random_affine_spec(rng, opt));
}

SolveConfig config_for(double dt, int iters, double alpha = 0.1) {
    SolveConfig c;
    c.dt = dt;
    c.max_iters = iters;
    c.armijo_alpha = alpha;
    return c;
}

TEST(SolveConfig, Validation) {
    SolveConfig c;
    EXPECT_NO_THROW(c.validate());
    for (const double a : {0.0, 1.0, -0.5}) {
        c = SolveConfig{};
        c.armijo_alpha = a;
        EXPECT_THROW(c.validate(), InvalidArgument);
        c = SolveConfig{};
        c.armijo_beta = a;
        EXPECT_THROW(c.validate(), InvalidArgument);
    }
    c = SolveConfig{};
    c.dt = 0.0;
    EXPECT_THROW(c.validate(), InvalidArgument);
    c = SolveConfig{};
    c.theta_tol = 0.0;
    EXPECT_THROW(c.validate(), InvalidArgument);
    c = SolveConfig{};
    c.max_backtracks = -1;
    EXPECT_THROW(c.validate(), InvalidArgument);
    c = SolveConfig{};
    c.shooting = ShootingParams{3, std::nullopt, -1};
    EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(Armijo, ConvergedWithoutIntegration) {
    const HybridModel tank = builtin_model("double_tank");
    const EmbeddedControl w = EmbeddedControl::one_hot(tank, TimeGrid::uniform(30.0, 0.1), 1);
    OrdinaryControl bogus;
    const ArmijoResult r = armijo(tank, w, 1.0, bogus, -1e-7, SolveConfig{});
    EXPECT_TRUE(r.converged);
    EXPECT_EQ(r.lambda, 0.0);
}

TEST(Armijo, AcceptsLargestPassingLambda) {
    Rng rng(51);
    for (int trial = 0; trial < 10; ++trial) {
        const HybridModel model = random_model(rng, 2, 2);
        const TimeGrid grid = TimeGrid::uniform(1.0, 0.02);
        const EmbeddedControl w = testing::random_control(rng, model, grid);
        SolveConfig config = config_for(0.02, 1, 0.4);
        const Evaluation ev = evaluate(model, w, Integrator::Euler);
        const double cost = ev.cost.total();
        const ArmijoResult r = armijo(model, w, cost, ev.u_star, ev.theta, config);
        ASSERT_FALSE(r.converged);
        EXPECT_EQ(r.lambda, std::pow(config.armijo_beta, r.backtracks));
        auto test = [&](double lambda) {
            const Trajectory t = integrate_combination(model, w, ev.u_star, lambda, Integrator::Euler);
            return eval_cost_combination(model, w, ev.u_star, lambda, t) - cost < config.armijo_alpha * lambda * ev.theta;
        };
        EXPECT_TRUE(test(r.lambda));
        if (r.backtracks > 0) {
            EXPECT_FALSE(test(r.lambda / config.armijo_beta));
        }
        EXPECT_NEAR(r.combo_cost, eval_cost_combination(model, w, ev.u_star, r.lambda, r.trajectory), 1e-12);
    }
}

TEST(Armijo, StepFailureCarriesDiagnostics) {
    const HybridModel tank = builtin_model("double_tank");
    const EmbeddedControl w = EmbeddedControl::one_hot(tank, TimeGrid::uniform(30.0, 0.1), 1);
    const Evaluation ev = evaluate(tank, w, Integrator::Euler);
    SolveConfig config = config_for(0.1, 1);
    config.max_backtracks = 5;
    // A theta far steeper than the true slope cannot be certified.
    const double fake_theta = 1e3 * ev.theta;
    try {
        armijo(tank, w, ev.cost.total(), ev.u_star, fake_theta, config);
        FAIL() << "expected StepFailure";
    } catch (const StepFailure& e) {
        EXPECT_EQ(e.theta(), fake_theta);
        EXPECT_EQ(e.last_lambda(), std::pow(0.5, 5));
        EXPECT_GE(e.last_gap(), 0.0);
    }
}

TEST(Step, ConvergedAtMinimizer) {
    AffineQuadraticSpec spec;
    spec.x0 = Vector::Zero(1);
    spec.t_f = 1.0;
    AffineQuadraticMode m;
    m.A = Matrix::Zero(1, 1);
    m.B = Matrix::Zero(1, 1);
    m.d = Vector::Zero(1);
    m.Q = Matrix::Zero(1, 1);
    m.x_ref = Vector::Zero(1);
    m.R = Matrix::Ones(1, 1);
    m.u_ref = Vector{{0.5}};
    m.lower = Vector{{-1.0}};
    m.upper = Vector{{1.0}};
    spec.modes = {m};
    spec.terminal_Q = Matrix::Zero(1, 1);
    spec.terminal_ref = Vector::Zero(1);
    const HybridModel model = affine_quadratic_model(spec);
    const EmbeddedControl w = EmbeddedControl::one_hot(model, TimeGrid::uniform(1.0, 0.1), 0, {Vector{{0.5}}});
    const StepResult s = step(model, w, config_for(0.1, 1));
    EXPECT_TRUE(s.converged);
    EXPECT_EQ(s.record.theta, 0.0);

    const SolveResult r = solve(model, w, config_for(0.1, 10));
    EXPECT_EQ(r.status, SolveStatus::Converged);
    EXPECT_TRUE(r.history.empty());
    EXPECT_EQ(r.final_cost, 0.0);
}

TEST(Step, DoubleTankFirstIterationDescends) {
    const HybridModel tank = builtin_model("double_tank");
    SolveConfig config = config_for(0.01, 1, 0.5);
    const EmbeddedControl w = EmbeddedControl::one_hot(tank, TimeGrid::uniform(30.0, 0.01), 1);
    const StepResult s = step(tank, w, config);
    ASSERT_FALSE(s.converged);
    const double next = testing::total_cost(tank, s.next, Integrator::Euler);
    EXPECT_LT(next, s.record.cost);
    EXPECT_LT(next, 84.185);
    EXPECT_LE(s.record.blend_cost, s.record.combo_cost + 1e-9);
    EXPECT_LT(s.record.combo_cost - s.record.cost, config.armijo_alpha * s.record.lambda * s.record.theta);
}

void check_certificates(const SolveResult& r, const SolveConfig& config) {
    double previous = std::numeric_limits<double>::infinity();
    for (const IterationRecord& rec : r.history) {
        EXPECT_LE(rec.theta, 0.0);
        EXPECT_LT(rec.cost, previous) << "iteration " << rec.iter;
        EXPECT_LT(rec.combo_cost - rec.cost, config.armijo_alpha * rec.lambda * rec.theta) << "iteration " << rec.iter;
        EXPECT_GE(rec.combo_cost - rec.blend_cost, -1e-9) << "iteration " << rec.iter;
        previous = rec.cost;
    }
    if (!r.history.empty()) {
        EXPECT_LT(r.final_cost, r.history.back().cost);
    }
}

TEST(Solve, RandomInstancesDescend) {
    Rng rng(61);
    for (int trial = 0; trial < 6; ++trial) {
        const HybridModel model = random_model(rng, 2 + trial % 2, trial < 3 ? 2 : 4);
        const SolveConfig config = config_for(0.02, 15, 0.2);
        const EmbeddedControl w0 = testing::random_control(rng, model, TimeGrid::uniform(1.0, 0.02));
        const SolveResult r = solve(model, w0, config);
        EXPECT_NE(r.status, SolveStatus::StepFailure) << r.message;
        check_certificates(r, config);
        EXPECT_TRUE(validate(r.control, model).ok());
        EXPECT_EQ(r.control.num_modes(), model.num_modes());
    }
}

TEST(Solve, ArmijoOnBlend) {
    Rng rng(67);
    const HybridModel model = random_model(rng, 3, 2);
    SolveConfig config = config_for(0.02, 15, 0.2);
    config.armijo_on_blend = true;
    const EmbeddedControl w0 = testing::random_control(rng, model, TimeGrid::uniform(1.0, 0.02));
    const SolveResult r = solve(model, w0, config);
    EXPECT_NE(r.status, SolveStatus::StepFailure) << r.message;
    double previous = std::numeric_limits<double>::infinity();
    for (const IterationRecord& rec : r.history) {
        EXPECT_LT(rec.blend_cost - rec.cost, config.armijo_alpha * rec.lambda * rec.theta);
        EXPECT_LT(rec.cost, previous);
        previous = rec.cost;
    }
}

TEST(Solve, ConvergesOnSmallProblem) {
    Rng rng(71);
    const HybridModel model = random_model(rng, 2, 2);
    SolveConfig config = config_for(0.01, 500, 0.3);
    config.theta_tol = 1e-5;
    const SolveResult r = solve(model, EmbeddedControl::uniform(model, TimeGrid::uniform(1.0, 0.01)), config);
    EXPECT_EQ(r.status, SolveStatus::Converged) << r.message;
    EXPECT_GE(r.final_theta, -1e-5);
    EXPECT_LT(static_cast<int>(r.history.size()), 500);
}

TEST(Solve, StepFailureIsAStatus) {
    const HybridModel tank = builtin_model("double_tank");
    SolveConfig config = config_for(0.1, 10, 0.99);
    config.max_backtracks = 0;
    const SolveResult r = solve(tank, EmbeddedControl::one_hot(tank, TimeGrid::uniform(30.0, 0.1), 1), config);
    EXPECT_EQ(r.status, SolveStatus::StepFailure);
    EXPECT_FALSE(r.message.empty());
    EXPECT_STREQ(to_string(r.status), "StepFailure");
}

TEST(Solve, InputErrors) {
    const HybridModel tank = builtin_model("double_tank");
    const EmbeddedControl w = EmbeddedControl::one_hot(tank, TimeGrid::uniform(30.0, 0.1), 1);
    EXPECT_THROW(solve(tank, w, config_for(0.01, 1)), InvalidArgument);
    SolveConfig bad = config_for(0.1, 1);
    bad.armijo_alpha = 2.0;
    EXPECT_THROW(solve(tank, w, bad), InvalidArgument);
    std::vector<ControlNode> nodes(w.nodes().begin(), w.nodes().end());
    nodes[5].weights = Vector{{0.7, 0.7}};
    EXPECT_THROW(solve(tank, EmbeddedControl(w.grid(), nodes), config_for(0.1, 1)), InvalidArgument);
}

TEST(Solve, Deterministic) {
    const HybridModel msd = builtin_model("mass_spring_damper");
    const SolveConfig config = config_for(0.05, 10, 0.01);
    const EmbeddedControl w0 = EmbeddedControl::one_hot(msd, TimeGrid::uniform(12.0, 0.05), 0);
    const SolveResult a = solve(msd, w0, config);
    const SolveResult b = solve(msd, w0, config);
    ASSERT_EQ(a.history.size(), b.history.size());
    for (std::size_t k = 0; k < a.history.size(); ++k) {
        EXPECT_EQ(a.history[k].cost, b.history[k].cost);
        EXPECT_EQ(a.history[k].lambda, b.history[k].lambda);
    }
    EXPECT_EQ(a.final_cost, b.final_cost);
}

TEST(Solve, IterationAccounting) {
    const HybridModel tank = builtin_model("double_tank");
    const SolveConfig config = config_for(0.1, 7, 0.5);
    const EmbeddedControl w0 = EmbeddedControl::one_hot(tank, TimeGrid::uniform(30.0, 0.1), 1);
    const SolveResult r = solve(tank, w0, config);
    EXPECT_EQ(r.status, SolveStatus::MaxIters);
    ASSERT_EQ(r.history.size(), 7u);
    EXPECT_EQ(r.history.front().iter, 1);
    EXPECT_EQ(r.history.front().cost, r.initial_cost);
    EXPECT_NEAR(r.initial_cost, testing::total_cost(tank, w0, Integrator::Euler), 1e-12);
    EXPECT_NEAR(r.final_cost, testing::total_cost(tank, r.control, Integrator::Euler), 1e-12);
}

TEST(Solve, ShootingReducesCostAndDefect) {
    const HybridModel lqr = builtin_model("unstable_lqr");
    SolveConfig config = config_for(0.1 / 9.0, 30, 0.1);
    config.integrator = Integrator::Trapezoid;
    config.shooting = ShootingParams{10, 22.5, 20};
    const EmbeddedControl w0 = EmbeddedControl::one_hot(lqr, TimeGrid::uniform(2.0, 0.1 / 9.0), 0);
    const SolveResult r = solve(lqr, w0, config);
    ASSERT_TRUE(r.shooting.has_value());
    EXPECT_EQ(r.shooting->penalty_K, 22.5);
    EXPECT_NE(r.status, SolveStatus::StepFailure) << r.message;
    EXPECT_LT(r.final_cost, 0.01 * r.initial_cost);
    EXPECT_EQ(r.final_trajectory.boundaries.size(), 9u);
    double previous = std::numeric_limits<double>::infinity();
    for (const IterationRecord& rec : r.history) {
        EXPECT_LT(rec.cost, previous);
        EXPECT_GE(rec.defect, 0.0);
        previous = rec.cost;
    }
}

TEST(Solve, ShootingDefaultsPenalty) {
    const HybridModel lqr = builtin_model("unstable_lqr");
    SolveConfig config = config_for(0.1 / 9.0, 0);
    config.integrator = Integrator::Trapezoid;
    config.shooting = ShootingParams{10, std::nullopt, 1};
    const EmbeddedControl w0 = EmbeddedControl::one_hot(lqr, TimeGrid::uniform(2.0, 0.1 / 9.0), 0);
    const auto s = make_shooting(lqr, w0, config);
    ASSERT_TRUE(s.has_value());
    EXPECT_EQ(s->penalty_K, 22.5);
    EXPECT_EQ(s->z.size(), 9u);
}

}  // namespace
}  // namespace switchopt
