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

#include "switchopt/hammin.hpp"

#include "switchopt/errors.hpp"

#include <cmath>
#include <limits>

namespace switchopt {

namespace {

double hamiltonian(const ModeSpec& mode, double t, const Vector& x, const Vector& u, const Vector& p) {
    return p.dot(mode.dynamics(x, u)) + mode.run_cost(t, x, u);
}

Vector separable_box_min(const ModeSpec& mode, const Vector& x, const Vector& p) {
    const SeparableQuadratic& q = *mode.quadratic_u;
    const Vector linear = mode.dyn_phi(x).transpose() * p;
    const Vector& lo = mode.control_set.lower();
    const Vector& hi = mode.control_set.upper();
    Vector u(mode.control_dim);
    for (int k = 0; k < mode.control_dim; ++k) {
        double value;
        if (q.weight[k] > 0.0) {
            value = q.center[k] - linear[k] / (2.0 * q.weight[k]);
        } else if (linear[k] > 0.0) {
            value = lo[k];
        } else if (linear[k] < 0.0) {
            value = hi[k];
        } else {
            value = 0.0;
        }
        u[k] = std::min(std::max(value, lo[k]), hi[k]);
        if (!std::isfinite(u[k])) {
            throw ConfigurationError("box_quad_min: Hamiltonian is unbounded below along input axis " +
                                     std::to_string(k + 1) + " of mode " + mode.name);
        }
    }
    return u;
}

Vector mode_minimizer(const ModeSpec& mode, int index, double t, const Vector& x, const Vector& p) {
    if (mode.control_dim == 0) {
        return Vector(0);
    }
    if (mode.pointwise_min) {
        return mode.control_set.clamp(mode.pointwise_min(t, x, p));
    }
    if (mode.quadratic_u) {
        return separable_box_min(mode, x, p);
    }
    throw ConfigurationError("mode " + std::to_string(index + 1) +
                             " has inputs but neither a minimizer nor a separable quadratic input cost");
}

}  // namespace

double eval_hamiltonian_mode(const HybridModel& model, int mode, double t, const Vector& x,
                             const Vector& u, const Vector& p) {
    if (p.size() != model.state_dim) {
        throw InvalidArgument("eval_hamiltonian_mode: costate has wrong dimension");
    }
    return p.dot(eval_mode_dynamics(model, mode, x, u)) + eval_run_cost(model, mode, t, x, u);
}

double eval_hamiltonian_embedded(const HybridModel& model, const ControlNode& node, double t,
                                 const Vector& x, const Vector& p) {
    if (node.weights.size() != model.num_modes() || node.inputs.size() != model.modes.size()) {
        throw InvalidArgument("eval_hamiltonian_embedded: node does not match the model's modes");
    }
    double value = 0.0;
    for (int i = 0; i < model.num_modes(); ++i) {
        const double a = node.weights[i];
        if (a != 0.0) {
            value += a * eval_hamiltonian_mode(model, i, t, x, node.inputs[static_cast<std::size_t>(i)], p);
        }
    }
    return value;
}

Vector box_quad_min(const HybridModel& model, int mode, const Vector& x, const Vector& p) {
    if (mode < 0 || mode >= model.num_modes()) {
        throw InvalidArgument("box_quad_min: mode index out of range");
    }
    if (x.size() != model.state_dim || p.size() != model.state_dim) {
        throw InvalidArgument("box_quad_min: state/costate dimension mismatch");
    }
    const ModeSpec& spec = model.modes[static_cast<std::size_t>(mode)];
    if (spec.control_dim == 0) {
        return Vector(0);
    }
    if (!spec.quadratic_u) {
        throw Unsupported("box_quad_min: mode " + std::to_string(mode + 1) +
                          " does not declare a diagonal quadratic input cost");
    }
    return separable_box_min(spec, x, p);
}

PointwiseMin pointwise_min(const HybridModel& model, double t, const Vector& x, const Vector& p) {
    if (x.size() != model.state_dim || p.size() != model.state_dim) {
        throw InvalidArgument("pointwise_min: state/costate dimension mismatch");
    }
    PointwiseMin best;
    best.value = std::numeric_limits<double>::infinity();
    for (int i = 0; i < model.num_modes(); ++i) {
        const ModeSpec& mode = model.modes[static_cast<std::size_t>(i)];
        Vector u = mode_minimizer(mode, i, t, x, p);
        const double value = hamiltonian(mode, t, x, u, p);
        if (value < best.value || i == 0) {
            best.mode = i;
            best.input = std::move(u);
            best.value = value;
        }
    }
    return best;
}

namespace {

const Vector& node_costate(const CostateTrajectory& costate, std::size_t j) {
    if (costate.node_costates.size() != costate.costates.size()) {
        throw InvalidArgument("costate trajectory has no node costates");
    }
    return costate.node_costates[j];
}

}  // namespace

OrdinaryControl build_ustar(const HybridModel& model, const Trajectory& traj,
                            const CostateTrajectory& costate) {
    if (!(traj.grid == costate.grid)) {
        throw InvalidArgument("build_ustar: trajectory and costate grids differ");
    }
    OrdinaryControl u;
    u.grid = traj.grid;
    const auto n = static_cast<std::size_t>(traj.grid.num_nodes());
    u.modes.resize(n);
    u.inputs.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        PointwiseMin m = pointwise_min(model, traj.grid.time(static_cast<int>(j)), traj.states[j],
                                       node_costate(costate, j));
        u.modes[j] = m.mode;
        u.inputs[j] = std::move(m.input);
    }
    return u;
}

double compute_theta(const HybridModel& model, const EmbeddedControl& w, const Trajectory& traj,
                     const CostateTrajectory& costate, const OrdinaryControl& u_star) {
    if (!(w.grid() == traj.grid) || !(traj.grid == costate.grid) || !(u_star.grid == traj.grid)) {
        throw InvalidArgument("compute_theta: grid mismatch");
    }
    const std::vector<double> weights = quadrature_weights(traj.grid, traj.method);
    double theta = 0.0;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        if (weights[j] == 0.0) {
            continue;
        }
        const double t = traj.grid.time(static_cast<int>(j));
        const Vector& x = traj.states[j];
        const Vector& p = node_costate(costate, j);
        const ControlNode& node = w.node(static_cast<int>(j));
        const ModeSpec& star = model.modes[static_cast<std::size_t>(u_star.modes[j])];
        double current = 0.0;
        for (int i = 0; i < model.num_modes(); ++i) {
            const double a = node.weights[i];
            if (a != 0.0) {
                current += a * hamiltonian(model.modes[static_cast<std::size_t>(i)], t, x,
                                           node.inputs[static_cast<std::size_t>(i)], p);
            }
        }
        theta += weights[j] * (hamiltonian(star, t, x, u_star.inputs[j], p) - current);
    }
    return theta;
}

}  // namespace switchopt
