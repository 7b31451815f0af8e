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

#include "switchopt/sim.hpp"

#include "switchopt/errors.hpp"

#include <algorithm>
#include <cmath>

namespace switchopt {

namespace {

constexpr int kCorrectorSweeps = 10;
constexpr double kCorrectorTol = 1e-10;

struct Segment {
    int begin;
    int end;
};

std::vector<Segment> segments_of(const TimeGrid& grid, const std::vector<int>& boundaries) {
    std::vector<Segment> out;
    int begin = 0;
    for (const int b : boundaries) {
        out.push_back({begin, b});
        begin = b;
    }
    out.push_back({begin, grid.steps()});
    return out;
}

void require_same_grid(const TimeGrid& a, const TimeGrid& b, const char* where) {
    if (!(a == b)) {
        throw InvalidArgument(std::string(where) + ": grid mismatch");
    }
}

void require_shooting_match(const Trajectory& traj, const ShootingConfig* shooting, const char* where) {
    const std::size_t expected = shooting ? shooting->z.size() : 0;
    if (traj.boundaries.size() != expected) {
        throw InvalidArgument(std::string(where) + ": trajectory and shooting layout disagree");
    }
}

// Sum_i alpha_i f_i(x, u_i) for one control node.
void require_compatible(const HybridModel& model, const EmbeddedControl& w, const char* where) {
    if (w.num_modes() != model.num_modes()) {
        throw InvalidArgument(std::string(where) + ": control has " + std::to_string(w.num_modes()) +
                              " modes, model has " + std::to_string(model.num_modes()));
    }
    if (w.num_nodes() == 0) {
        throw InvalidArgument(std::string(where) + ": control has no nodes");
    }
    const ControlNode& node = w.node(0);
    for (int i = 0; i < model.num_modes(); ++i) {
        const auto si = static_cast<std::size_t>(i);
        if (node.inputs[si].size() != model.modes[si].control_dim) {
            throw InvalidArgument(std::string(where) + ": input dimension of mode " + std::to_string(i + 1) +
                                  " does not match the model");
        }
    }
}

void require_compatible(const HybridModel& model, const OrdinaryControl& u, const char* where) {
    if (u.num_nodes() != u.grid.num_nodes() || u.inputs.size() != u.modes.size()) {
        throw InvalidArgument(std::string(where) + ": ordinary control has the wrong node count");
    }
    for (std::size_t j = 0; j < u.modes.size(); ++j) {
        const int m = u.modes[j];
        if (m < 0 || m >= model.num_modes() ||
            u.inputs[j].size() != model.modes[static_cast<std::size_t>(m)].control_dim) {
            throw InvalidArgument(std::string(where) + ": ordinary control node " + std::to_string(j) +
                                  " does not match the model");
        }
    }
}

Vector mixture_dynamics(const HybridModel& model, const ControlNode& node, const Vector& x, double scale) {
    Vector f = Vector::Zero(x.size());
    for (int i = 0; i < model.num_modes(); ++i) {
        const double a = node.weights[i];
        if (a != 0.0) {
            f += (scale * a) * model.modes[static_cast<std::size_t>(i)].dynamics(x, node.inputs[static_cast<std::size_t>(i)]);
        }
    }
    return f;
}

double mixture_cost(const HybridModel& model, const ControlNode& node, double t, const Vector& x) {
    double cost = 0.0;
    for (int i = 0; i < model.num_modes(); ++i) {
        const double a = node.weights[i];
        if (a != 0.0) {
            cost += a * model.modes[static_cast<std::size_t>(i)].run_cost(t, x, node.inputs[static_cast<std::size_t>(i)]);
        }
    }
    return cost;
}

bool all_finite(const Vector& v) { return v.allFinite(); }

template <class Field>
Trajectory integrate(const HybridModel& model, const TimeGrid& grid, Integrator method,
                     const ShootingConfig* shooting, Field&& field) {
    Trajectory traj;
    traj.grid = grid;
    traj.method = method;
    traj.states.resize(static_cast<std::size_t>(grid.num_nodes()));
    if (shooting != nullptr && shooting->active()) {
        traj.boundaries = shooting->boundaries(grid);
        if (shooting->z.size() != traj.boundaries.size()) {
            throw InvalidArgument("integrate_state: shooting needs one z per interior boundary");
        }
    }
    const double dt = grid.dt();
    const auto segments = segments_of(grid, traj.boundaries);
    for (std::size_t s = 0; s < segments.size(); ++s) {
        const auto [begin, end] = segments[s];
        Vector x = s == 0 ? model.x0 : shooting->z[s - 1];
        if (x.size() != model.state_dim) {
            throw InvalidArgument("integrate_state: segment initial state has wrong dimension");
        }
        if (!all_finite(x)) {
            throw DivergenceError("state integration produced a non-finite value", begin);
        }
        traj.states[static_cast<std::size_t>(begin)] = x;
        for (int j = begin; j < end; ++j) {
            const Vector fj = field(j, x);
            Vector next = x + dt * fj;
            if (method == Integrator::Trapezoid) {
                for (int sweep = 0; sweep < kCorrectorSweeps; ++sweep) {
                    Vector corrected = x + (0.5 * dt) * (fj + field(j + 1, next));
                    const double change = (corrected - next).lpNorm<Eigen::Infinity>();
                    next = std::move(corrected);
                    if (!(change > kCorrectorTol * std::max(1.0, next.lpNorm<Eigen::Infinity>()))) {
                        break;
                    }
                }
            }
            if (!all_finite(next)) {
                throw DivergenceError("state integration produced a non-finite value", j + 1);
            }
            if (j + 1 == end && s + 1 < segments.size()) {
                traj.left_limits.push_back(next);
            } else {
                traj.states[static_cast<std::size_t>(j + 1)] = next;
            }
            x = std::move(next);
        }
    }
    if (model.state_domain) {
        for (const Vector& x : traj.states) {
            traj.domain_warnings += model.state_domain(x) ? 0 : 1;
        }
        for (const Vector& x : traj.left_limits) {
            traj.domain_warnings += model.state_domain(x) ? 0 : 1;
        }
    }
    return traj;
}

// State seen by the quadrature at node j when approached from inside segment s.
const Vector& segment_state(const Trajectory& traj, std::size_t s, int j, int end, std::size_t n_segments) {
    if (j == end && s + 1 < n_segments) {
        return traj.left_limits[s];
    }
    return traj.states[static_cast<std::size_t>(j)];
}

template <class Running>
double running_cost(const Trajectory& traj, Running&& running) {
    const TimeGrid& grid = traj.grid;
    const double dt = grid.dt();
    const auto segments = segments_of(grid, traj.boundaries);
    double total = 0.0;
    for (std::size_t s = 0; s < segments.size(); ++s) {
        const auto [begin, end] = segments[s];
        for (int j = begin; j < end; ++j) {
            const double left = running(j, traj.states[static_cast<std::size_t>(j)]);
            if (traj.method == Integrator::Euler) {
                total += dt * left;
            } else {
                const double right = running(j + 1, segment_state(traj, s, j + 1, end, segments.size()));
                total += 0.5 * dt * (left + right);
            }
        }
    }
    return total;
}

double shooting_penalty(const Trajectory& traj, const ShootingConfig* shooting) {
    if (traj.boundaries.empty()) {
        return 0.0;
    }
    double penalty = 0.0;
    for (std::size_t j = 0; j < traj.boundaries.size(); ++j) {
        penalty += (traj.left_limits[j] - traj.states[static_cast<std::size_t>(traj.boundaries[j])]).squaredNorm();
    }
    return shooting->penalty_K * penalty;
}

}  // namespace

ShootingConfig ShootingConfig::make(int segments, std::optional<double> penalty_K) {
    if (segments < 1) {
        throw InvalidArgument("ShootingConfig: segments must be >= 1");
    }
    ShootingConfig config;
    config.segments = segments;
    config.penalty_K = penalty_K.value_or(default_penalty(segments));
    if (!(config.penalty_K >= 0.0)) {
        throw InvalidArgument("ShootingConfig: penalty K must be >= 0");
    }
    return config;
}

std::vector<int> ShootingConfig::boundaries(const TimeGrid& grid) const {
    std::vector<int> out;
    if (segments < 1) {
        throw InvalidArgument("ShootingConfig: segments must be >= 1");
    }
    if (grid.steps() % segments != 0) {
        throw InvalidArgument("ShootingConfig: " + std::to_string(segments) +
                              " segments do not land on grid nodes of a " + std::to_string(grid.steps()) +
                              "-step grid");
    }
    const int len = grid.steps() / segments;
    for (int s = 1; s < segments; ++s) {
        out.push_back(s * len);
    }
    return out;
}

Trajectory integrate_state(const HybridModel& model, const EmbeddedControl& w, Integrator method,
                           const ShootingConfig* shooting) {
    require_compatible(model, w, "integrate_state");
    return integrate(model, w.grid(), method, shooting,
                     [&](int j, const Vector& x) { return mixture_dynamics(model, w.node(j), x, 1.0); });
}

Trajectory integrate_combination(const HybridModel& model, const EmbeddedControl& w,
                                 const OrdinaryControl& u_star, double lambda, Integrator method,
                                 const ShootingConfig* shooting) {
    require_same_grid(w.grid(), u_star.grid, "integrate_combination");
    require_compatible(model, w, "integrate_combination");
    require_compatible(model, u_star, "integrate_combination");
    return integrate(model, w.grid(), method, shooting, [&](int j, const Vector& x) {
        const auto jj = static_cast<std::size_t>(j);
        Vector f = mixture_dynamics(model, w.node(j), x, 1.0 - lambda);
        f += lambda * model.modes[static_cast<std::size_t>(u_star.modes[jj])].dynamics(x, u_star.inputs[jj]);
        return f;
    });
}

CostBreakdown eval_cost_breakdown(const HybridModel& model, const EmbeddedControl& w,
                                  const Trajectory& traj, const ShootingConfig* shooting) {
    require_same_grid(w.grid(), traj.grid, "eval_cost");
    require_compatible(model, w, "eval_cost");
    require_shooting_match(traj, shooting, "eval_cost");
    CostBreakdown cost;
    cost.running = running_cost(traj, [&](int j, const Vector& x) {
        return mixture_cost(model, w.node(j), w.grid().time(j), x);
    });
    const Vector& xf = traj.final_state();
    cost.terminal = model.terminal ? model.terminal.value(xf) : 0.0;
    cost.terminal_penalty = model.terminal_penalty_value(xf);
    cost.shooting_penalty = shooting_penalty(traj, shooting);
    return cost;
}

double eval_cost(const HybridModel& model, const EmbeddedControl& w, const Trajectory& traj,
                 const ShootingConfig* shooting) {
    return eval_cost_breakdown(model, w, traj, shooting).total();
}

double eval_cost_combination(const HybridModel& model, const EmbeddedControl& w,
                             const OrdinaryControl& u_star, double lambda, const Trajectory& traj,
                             const ShootingConfig* shooting) {
    require_same_grid(w.grid(), traj.grid, "eval_cost_combination");
    require_same_grid(w.grid(), u_star.grid, "eval_cost_combination");
    require_compatible(model, w, "eval_cost_combination");
    require_compatible(model, u_star, "eval_cost_combination");
    require_shooting_match(traj, shooting, "eval_cost_combination");
    const double running = running_cost(traj, [&](int j, const Vector& x) {
        const auto jj = static_cast<std::size_t>(j);
        const double t = w.grid().time(j);
        const ModeSpec& star = model.modes[static_cast<std::size_t>(u_star.modes[jj])];
        return (1.0 - lambda) * mixture_cost(model, w.node(j), t, x) +
               lambda * star.run_cost(t, x, u_star.inputs[jj]);
    });
    return running + model.terminal_cost(traj.final_state()) + shooting_penalty(traj, shooting);
}

CostateTrajectory integrate_costate(const HybridModel& model, const EmbeddedControl& w,
                                    const Trajectory& traj, const ShootingConfig* shooting) {
    require_same_grid(w.grid(), traj.grid, "integrate_costate");
    require_compatible(model, w, "integrate_costate");
    require_shooting_match(traj, shooting, "integrate_costate");
    const TimeGrid& grid = traj.grid;
    const double dt = grid.dt();

    // Mixture Jacobian and cost gradient at node j.
    auto linearize = [&](int j, const Vector& x) {
        const ControlNode& node = w.node(j);
        const double t = grid.time(j);
        Matrix a_mix = Matrix::Zero(x.size(), x.size());
        Vector g = Vector::Zero(x.size());
        for (int i = 0; i < model.num_modes(); ++i) {
            const double a = node.weights[i];
            if (a == 0.0) {
                continue;
            }
            const ModeSpec& mode = model.modes[static_cast<std::size_t>(i)];
            const Vector& u = node.inputs[static_cast<std::size_t>(i)];
            a_mix += a * mode.dynamics_jac(x, u);
            g += a * mode.run_cost_grad_x(t, x, u);
        }
        return std::pair{std::move(a_mix), std::move(g)};
    };
    const auto n = model.state_dim;
    const Matrix eye = Matrix::Identity(n, n);

    CostateTrajectory out;
    out.grid = grid;
    out.costates.resize(static_cast<std::size_t>(grid.num_nodes()));
    out.node_costates.resize(static_cast<std::size_t>(grid.num_nodes()));
    out.left_limits.resize(traj.left_limits.size());
    const auto segments = segments_of(grid, traj.boundaries);
    auto check = [](const Vector& v, int node) {
        if (!all_finite(v)) {
            throw DivergenceError("costate integration produced a non-finite value", node);
        }
    };
    for (std::size_t s = segments.size(); s-- > 0;) {
        const auto [begin, end] = segments[s];
        const bool last = s + 1 == segments.size();
        Vector p;
        if (last) {
            p = model.terminal_cost_grad(traj.final_state());
            out.costates[static_cast<std::size_t>(end)] = p;
        } else {
            const Vector& x_left = traj.left_limits[s];
            p = 2.0 * shooting->penalty_K * (x_left - traj.states[static_cast<std::size_t>(end)]);
            out.left_limits[s] = p;
        }
        check(p, end);
        if (traj.method == Integrator::Euler) {
            if (last) {
                out.node_costates[static_cast<std::size_t>(end)] = p;
            }
            for (int j = end - 1; j >= begin; --j) {
                const auto [a_mix, g] = linearize(j, traj.states[static_cast<std::size_t>(j)]);
                out.node_costates[static_cast<std::size_t>(j)] = p;
                p = p + dt * (a_mix.transpose() * p + g);
                check(p, j);
                out.costates[static_cast<std::size_t>(j)] = p;
            }
            continue;
        }
        // Implicit trapezoid: lambda_{j+1} is the multiplier of step j.
        auto [a_end, g_end] = linearize(end, segment_state(traj, s, end, end, segments.size()));
        Vector lambda = (eye - (0.5 * dt) * a_end.transpose()).partialPivLu().solve(p + (0.5 * dt) * g_end);
        if (last) {
            out.node_costates[static_cast<std::size_t>(end)] = lambda;
        }
        for (int j = end - 1; j >= begin; --j) {
            const auto [a_mix, g] = linearize(j, traj.states[static_cast<std::size_t>(j)]);
            p = (0.5 * dt) * g + lambda + (0.5 * dt) * (a_mix.transpose() * lambda);
            check(p, j);
            out.costates[static_cast<std::size_t>(j)] = p;
            if (j == begin) {
                out.node_costates[static_cast<std::size_t>(j)] = lambda;
                break;
            }
            Vector lambda_j = (eye - (0.5 * dt) * a_mix.transpose()).partialPivLu().solve(p + (0.5 * dt) * g);
            check(lambda_j, j);
            out.node_costates[static_cast<std::size_t>(j)] = 0.5 * (lambda_j + lambda);
            lambda = std::move(lambda_j);
        }
    }
    return out;
}

std::vector<Vector> shooting_z_gradient(const HybridModel& model, const EmbeddedControl& w,
                                        const Trajectory& traj, const CostateTrajectory& costate,
                                        const ShootingConfig& shooting) {
    if (!shooting.active()) {
        throw InvalidArgument("shooting_z_gradient: multiple shooting is not active");
    }
    require_same_grid(w.grid(), traj.grid, "shooting_z_gradient");
    require_same_grid(traj.grid, costate.grid, "shooting_z_gradient");
    require_shooting_match(traj, &shooting, "shooting_z_gradient");
    (void)model;
    std::vector<Vector> g;
    g.reserve(shooting.z.size());
    for (std::size_t j = 0; j < shooting.z.size(); ++j) {
        const auto node = static_cast<std::size_t>(traj.boundaries[j]);
        g.push_back(costate.costates[node] - 2.0 * shooting.penalty_K * (traj.left_limits[j] - shooting.z[j]));
    }
    return g;
}

double shooting_defect(const Trajectory& traj) {
    double worst = 0.0;
    for (std::size_t j = 0; j < traj.boundaries.size(); ++j) {
        worst = std::max(worst, (traj.left_limits[j] - traj.states[static_cast<std::size_t>(traj.boundaries[j])]).norm());
    }
    return worst;
}

ShootingConfig initialize_shooting(const HybridModel& model, const EmbeddedControl& w,
                                   Integrator method, int segments, std::optional<double> penalty_K) {
    ShootingConfig config = ShootingConfig::make(segments, penalty_K);
    if (!config.active()) {
        return config;
    }
    const Trajectory single = integrate_state(model, w, method);
    for (const int b : config.boundaries(w.grid())) {
        config.z.push_back(single.states[static_cast<std::size_t>(b)]);
    }
    return config;
}

std::vector<double> quadrature_weights(const TimeGrid& grid, Integrator method) {
    const double dt = grid.dt();
    std::vector<double> weights(static_cast<std::size_t>(grid.num_nodes()), dt);
    if (method == Integrator::Euler) {
        weights.back() = 0.0;
    } else {
        weights.front() = 0.5 * dt;
        weights.back() = 0.5 * dt;
    }
    return weights;
}

}  // namespace switchopt
