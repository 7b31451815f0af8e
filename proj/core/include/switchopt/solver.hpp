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

#ifndef SWITCHOPT_SOLVER_HPP
#define SWITCHOPT_SOLVER_HPP

#include "switchopt/control.hpp"
#include "switchopt/hammin.hpp"
#include "switchopt/model.hpp"
#include "switchopt/sim.hpp"

#include <optional>
#include <string>
#include <vector>

namespace switchopt {

struct ShootingParams {
    int segments = 1;
    std::optional<double> penalty_K;  // default 2.5 (segments - 1)
    /// Backtracking gradient steps on z after each control step. The loop
    /// stops early when a step finds no decrease.
    int z_steps = 20;
};

struct SolveConfig {
    double armijo_alpha = 0.1;
    double armijo_beta = 0.5;
    int max_backtracks = 40;
    double dt = 0.01;
    Integrator integrator = Integrator::Euler;
    int max_iters = 100;
    double theta_tol = 1e-6;
    /// Run the Armijo test on the blended control instead of the measure
    /// combination. Acceptance then implies the combination test as well.
    bool armijo_on_blend = false;
    std::optional<ShootingParams> shooting;

    /// Throws InvalidArgument for out-of-range constants.
    void validate() const;
};

struct IterationRecord {
    int iter = 0;
    double cost = 0.0;        // J(w_k)
    double theta = 0.0;       // theta(w_k)
    double lambda = 0.0;      // accepted step
    int backtracks = 0;
    double wall_ms = 0.0;
    double combo_cost = 0.0;  // J((1 - lambda) w_k (+) lambda u*)
    double blend_cost = 0.0;  // J(blend(w_k, u*, lambda))
    double z_step = 0.0;      // accepted shooting step (0 when none)
    double defect = 0.0;      // max shooting defect after the iteration
};

/// Trajectory, cost, costate, minimizer and theta of one control.
struct Evaluation {
    Trajectory trajectory;
    CostBreakdown cost;
    CostateTrajectory costate;
    OrdinaryControl u_star;
    double theta = 0.0;
};

Evaluation evaluate(const HybridModel& model, const EmbeddedControl& w, Integrator method,
                    const ShootingConfig* shooting = nullptr);

struct ArmijoResult {
    bool converged = false;
    double lambda = 0.0;
    int backtracks = 0;
    Trajectory trajectory;    // trajectory of the accepted candidate
    double combo_cost = 0.0;  // cost used in the accepted test
};

/// Largest lambda in {1, beta, ..., beta^max_backtracks} with
/// J((1 - lambda) w (+) lambda u*) - J(w) < alpha lambda theta.
/// Returns converged (no integration) when theta >= -theta_tol and throws
/// StepFailure when the budget is exhausted.
ArmijoResult armijo(const HybridModel& model, const EmbeddedControl& w, double cost_w,
                    const OrdinaryControl& u_star, double theta, const SolveConfig& config,
                    const ShootingConfig* shooting = nullptr);

struct StepResult {
    bool converged = false;
    EmbeddedControl next;
    IterationRecord record;
};

/// One descent iteration. `shooting`, when given, is updated in place by the
/// z step that follows the control step.
StepResult step(const HybridModel& model, const EmbeddedControl& w, const SolveConfig& config,
                ShootingConfig* shooting = nullptr);

enum class SolveStatus { Converged, MaxIters, StepFailure };

const char* to_string(SolveStatus status);

struct SolveResult {
    EmbeddedControl control;
    std::vector<IterationRecord> history;
    SolveStatus status = SolveStatus::MaxIters;
    double initial_cost = 0.0;
    double final_cost = 0.0;
    double final_theta = 0.0;
    CostBreakdown final_breakdown;
    Trajectory final_trajectory;
    std::optional<ShootingConfig> shooting;
    std::string message;
};

/// Iterates step() until theta >= -theta_tol, max_iters steps, or a step
/// failure. Never throws for those outcomes.
SolveResult solve(const HybridModel& model, const EmbeddedControl& w0, const SolveConfig& config);

/// Shooting layout used by solve(): z from a single-shooting run of w0.
std::optional<ShootingConfig> make_shooting(const HybridModel& model, const EmbeddedControl& w0,
                                            const SolveConfig& config);

}  // namespace switchopt

#endif  // SWITCHOPT_SOLVER_HPP
