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

#include "switchopt/solver.hpp"

#include "switchopt/errors.hpp"

#include <chrono>
#include <limits>
#include <cmath>
#include <sstream>

namespace switchopt {

namespace {

// Sufficient-decrease constant and budget of the shooting-variable step.
constexpr double kZArmijo = 1e-4;
constexpr int kZBacktracks = 40;

double elapsed_ms(std::chrono::steady_clock::time_point since) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - since).count();
}

// One backtracking gradient step on z for the penalized cost of y.
// Returns the accepted step size, or 0 when no decrease was found.
double z_step(const HybridModel& model, const EmbeddedControl& y, const Trajectory& traj_y,
              double cost_y, const SolveConfig& config, ShootingConfig& shooting) {
    const CostateTrajectory costate = integrate_costate(model, y, traj_y, &shooting);
    const std::vector<Vector> grad = shooting_z_gradient(model, y, traj_y, costate, shooting);
    double grad_sq = 0.0;
    for (const Vector& g : grad) {
        grad_sq += g.squaredNorm();
    }
    if (!(grad_sq > 0.0)) {
        return 0.0;
    }
    double s = std::min(1.0, shooting.z_step_hint / config.armijo_beta);
    for (int k = 0; k <= kZBacktracks; ++k, s *= config.armijo_beta) {
        ShootingConfig trial = shooting;
        for (std::size_t j = 0; j < trial.z.size(); ++j) {
            trial.z[j] -= s * grad[j];
        }
        try {
            const Trajectory traj = integrate_state(model, y, config.integrator, &trial);
            if (eval_cost(model, y, traj, &trial) - cost_y <= -kZArmijo * s * grad_sq) {
                trial.z_step_hint = s;
                shooting = std::move(trial);
                return s;
            }
        } catch (const DivergenceError&) {
            // too long a step; keep shrinking
        }
    }
    return 0.0;
}

}  // namespace

void SolveConfig::validate() const {
    if (!(armijo_alpha > 0.0 && armijo_alpha < 1.0)) {
        throw InvalidArgument("SolveConfig: alpha must lie in (0, 1)");
    }
    if (!(armijo_beta > 0.0 && armijo_beta < 1.0)) {
        throw InvalidArgument("SolveConfig: beta must lie in (0, 1)");
    }
    if (max_backtracks < 0) {
        throw InvalidArgument("SolveConfig: max_backtracks must be >= 0");
    }
    if (!(dt > 0.0)) {
        throw InvalidArgument("SolveConfig: dt must be positive");
    }
    if (max_iters < 0) {
        throw InvalidArgument("SolveConfig: max_iters must be >= 0");
    }
    if (!(theta_tol > 0.0)) {
        throw InvalidArgument("SolveConfig: theta_tol must be positive");
    }
    if (shooting) {
        if (shooting->segments < 1) {
            throw InvalidArgument("SolveConfig: shooting segments must be >= 1");
        }
        if (shooting->z_steps < 0) {
            throw InvalidArgument("SolveConfig: shooting z_steps must be >= 0");
        }
        if (shooting->penalty_K && !(*shooting->penalty_K >= 0.0)) {
            throw InvalidArgument("SolveConfig: shooting penalty K must be >= 0");
        }
    }
}

Evaluation evaluate(const HybridModel& model, const EmbeddedControl& w, Integrator method,
                    const ShootingConfig* shooting) {
    Evaluation ev;
    ev.trajectory = integrate_state(model, w, method, shooting);
    ev.cost = eval_cost_breakdown(model, w, ev.trajectory, shooting);
    ev.costate = integrate_costate(model, w, ev.trajectory, shooting);
    ev.u_star = build_ustar(model, ev.trajectory, ev.costate);
    ev.theta = compute_theta(model, w, ev.trajectory, ev.costate, ev.u_star);
    return ev;
}

ArmijoResult armijo(const HybridModel& model, const EmbeddedControl& w, double cost_w,
                    const OrdinaryControl& u_star, double theta, const SolveConfig& config,
                    const ShootingConfig* shooting) {
    ArmijoResult result;
    if (theta >= -config.theta_tol) {
        result.converged = true;
        return result;
    }
    double lambda = 1.0;
    double gap = 0.0;
    for (int k = 0; k <= config.max_backtracks; ++k, lambda *= config.armijo_beta) {
        Trajectory traj;
        double cost = 0.0;
        try {
            if (config.armijo_on_blend) {
                const EmbeddedControl y = blend(w, u_star, lambda);
                traj = integrate_state(model, y, config.integrator, shooting);
                cost = eval_cost(model, y, traj, shooting);
            } else {
                traj = integrate_combination(model, w, u_star, lambda, config.integrator, shooting);
                cost = eval_cost_combination(model, w, u_star, lambda, traj, shooting);
            }
        } catch (const DivergenceError&) {
            gap = std::numeric_limits<double>::infinity();
            continue;
        }
        gap = cost - cost_w - config.armijo_alpha * lambda * theta;
        if (gap < 0.0) {
            result.lambda = lambda;
            result.backtracks = k;
            result.trajectory = std::move(traj);
            result.combo_cost = cost;
            return result;
        }
    }
    std::ostringstream os;
    os << "Armijo search failed after " << config.max_backtracks << " backtracks (theta = " << theta
       << ", last lambda = " << lambda / config.armijo_beta << ", last gap = " << gap << ")";
    throw StepFailure(os.str(), theta, lambda / config.armijo_beta, gap);
}

StepResult step(const HybridModel& model, const EmbeddedControl& w, const SolveConfig& config,
                ShootingConfig* shooting) {
    const auto start = std::chrono::steady_clock::now();
    const Evaluation ev = evaluate(model, w, config.integrator, shooting);

    StepResult result;
    result.record.cost = ev.cost.total();
    result.record.theta = ev.theta;
    const ArmijoResult search = armijo(model, w, result.record.cost, ev.u_star, ev.theta, config, shooting);
    if (search.converged) {
        result.converged = true;
        result.next = w;
        result.record.combo_cost = result.record.cost;
        result.record.blend_cost = result.record.cost;
        result.record.defect = shooting_defect(ev.trajectory);
        result.record.wall_ms = elapsed_ms(start);
        return result;
    }

    result.next = blend(w, ev.u_star, search.lambda);
    result.record.lambda = search.lambda;
    result.record.backtracks = search.backtracks;
    const Trajectory traj_y = integrate_state(model, result.next, config.integrator, shooting);
    const double cost_y = eval_cost(model, result.next, traj_y, shooting);
    result.record.blend_cost = cost_y;
    result.record.combo_cost = config.armijo_on_blend
                                   ? eval_cost_combination(model, w, ev.u_star, search.lambda, traj_y, shooting)
                                   : search.combo_cost;

    if (shooting != nullptr && shooting->active()) {
        const int max_z_steps = config.shooting ? config.shooting->z_steps : 1;
        Trajectory traj = traj_y;
        double cost = cost_y;
        for (int q = 0; q < max_z_steps; ++q) {
            const double s = z_step(model, result.next, traj, cost, config, *shooting);
            if (s == 0.0) {
                break;
            }
            result.record.z_step = s;
            traj = integrate_state(model, result.next, config.integrator, shooting);
            cost = eval_cost(model, result.next, traj, shooting);
        }
        result.record.defect = shooting_defect(traj);
    }
    result.record.wall_ms = elapsed_ms(start);
    return result;
}

const char* to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::Converged:
            return "Converged";
        case SolveStatus::MaxIters:
            return "MaxIters";
        case SolveStatus::StepFailure:
            return "StepFailure";
    }
    return "Unknown";
}

std::optional<ShootingConfig> make_shooting(const HybridModel& model, const EmbeddedControl& w0,
                                            const SolveConfig& config) {
    if (!config.shooting || config.shooting->segments <= 1) {
        return std::nullopt;
    }
    return initialize_shooting(model, w0, config.integrator, config.shooting->segments,
                               config.shooting->penalty_K);
}

SolveResult solve(const HybridModel& model, const EmbeddedControl& w0, const SolveConfig& config) {
    config.validate();
    if (!(w0.grid() == TimeGrid::uniform(model.t_f, config.dt))) {
        throw InvalidArgument("solve: initial control grid does not match t_f and dt");
    }
    const ValidationReport report = validate(w0, model);
    if (!report.ok()) {
        throw InvalidArgument("solve: invalid initial control: " + report.summary());
    }

    SolveResult result;
    result.shooting = make_shooting(model, w0, config);
    ShootingConfig* shooting = result.shooting ? &*result.shooting : nullptr;
    result.control = w0;
    result.status = SolveStatus::MaxIters;

    for (int k = 0; k < config.max_iters; ++k) {
        StepResult s;
        try {
            s = step(model, result.control, config, shooting);
        } catch (const StepFailure& e) {
            result.status = SolveStatus::StepFailure;
            result.message = e.what();
            break;
        }
        s.record.iter = k + 1;
        if (k == 0) {
            result.initial_cost = s.record.cost;
        }
        if (s.converged) {
            result.status = SolveStatus::Converged;
            break;
        }
        result.history.push_back(s.record);
        result.control = std::move(s.next);
    }

    const Evaluation final_ev = evaluate(model, result.control, config.integrator, shooting);
    result.final_cost = final_ev.cost.total();
    result.final_theta = final_ev.theta;
    result.final_breakdown = final_ev.cost;
    result.final_trajectory = final_ev.trajectory;
    if (result.history.empty()) {
        result.initial_cost = result.final_cost;
    }
    return result;
}

}  // namespace switchopt
