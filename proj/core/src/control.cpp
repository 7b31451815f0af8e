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

#include "switchopt/control.hpp"

#include "switchopt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace switchopt {

TimeGrid TimeGrid::uniform(double t_f, double dt) {
    if (!(t_f > 0.0) || !(dt > 0.0) || !std::isfinite(t_f) || !std::isfinite(dt)) {
        throw InvalidArgument("TimeGrid: t_f and dt must be positive and finite");
    }
    const double ratio = t_f / dt;
    const double steps = std::round(ratio);
    if (steps < 1.0 || std::abs(steps * dt - t_f) > 1e-9) {
        throw InvalidArgument("TimeGrid: dt = " + std::to_string(dt) + " does not divide t_f = " +
                              std::to_string(t_f));
    }
    return TimeGrid(t_f, static_cast<int>(steps));
}

TimeGrid TimeGrid::with_steps(double t_f, int steps) {
    if (!(t_f > 0.0) || steps < 1) {
        throw InvalidArgument("TimeGrid: need t_f > 0 and at least one step");
    }
    return TimeGrid(t_f, steps);
}

int TimeGrid::index_of(double t) const {
    if (!(t >= 0.0) || t > t_f_ * (1.0 + 1e-12)) {
        throw InvalidArgument("time " + std::to_string(t) + " outside [0, " + std::to_string(t_f_) + "]");
    }
    const int j = static_cast<int>(std::floor(t / dt() + 1e-9));
    return std::clamp(j, 0, steps_);
}

EmbeddedControl::EmbeddedControl(TimeGrid grid, std::vector<ControlNode> nodes)
    : grid_(grid), nodes_(std::move(nodes)) {
    if (static_cast<int>(nodes_.size()) != grid_.num_nodes()) {
        throw InvalidArgument("EmbeddedControl: " + std::to_string(nodes_.size()) +
                              " nodes for a grid of " + std::to_string(grid_.num_nodes()));
    }
    const auto m = nodes_.front().weights.size();
    if (m < 1) {
        throw InvalidArgument("EmbeddedControl: nodes need at least one mode");
    }
    for (const ControlNode& node : nodes_) {
        if (node.weights.size() != m || node.inputs.size() != static_cast<std::size_t>(m)) {
            throw InvalidArgument("EmbeddedControl: inconsistent mode count across nodes");
        }
        for (std::size_t i = 0; i < node.inputs.size(); ++i) {
            if (node.inputs[i].size() != nodes_.front().inputs[i].size()) {
                throw InvalidArgument("EmbeddedControl: inconsistent input dimension for mode " +
                                      std::to_string(i + 1));
            }
        }
    }
}

namespace {

std::vector<Vector> projected_inputs(const HybridModel& model, const std::vector<Vector>& given) {
    if (!given.empty() && given.size() != model.modes.size()) {
        throw InvalidArgument("initial inputs: expected one vector per mode");
    }
    std::vector<Vector> inputs;
    inputs.reserve(model.modes.size());
    for (std::size_t i = 0; i < model.modes.size(); ++i) {
        const ModeSpec& mode = model.modes[i];
        const Vector u = given.empty() ? Vector::Zero(mode.control_dim) : given[i];
        if (u.size() != mode.control_dim) {
            throw InvalidArgument("initial input for mode " + std::to_string(i + 1) +
                                  " has wrong dimension");
        }
        inputs.push_back(mode.control_set.clamp(u));
    }
    return inputs;
}

}  // namespace

EmbeddedControl EmbeddedControl::uniform(const HybridModel& model, const TimeGrid& grid) {
    const int m = model.num_modes();
    ControlNode node{Vector::Constant(m, 1.0 / m), projected_inputs(model, {})};
    return EmbeddedControl(grid, std::vector<ControlNode>(static_cast<std::size_t>(grid.num_nodes()), node));
}

EmbeddedControl EmbeddedControl::one_hot(const HybridModel& model, const TimeGrid& grid, int mode,
                                         const std::vector<Vector>& inputs) {
    if (mode < 0 || mode >= model.num_modes()) {
        throw InvalidArgument("one_hot: mode index out of range");
    }
    ControlNode node{Vector::Zero(model.num_modes()), projected_inputs(model, inputs)};
    node.weights[mode] = 1.0;
    return EmbeddedControl(grid, std::vector<ControlNode>(static_cast<std::size_t>(grid.num_nodes()), node));
}

EmbeddedControl to_embedded(const OrdinaryControl& u, const HybridModel& model) {
    if (u.num_nodes() != u.grid.num_nodes() || u.inputs.size() != u.modes.size()) {
        throw InvalidArgument("to_embedded: ordinary control does not match its grid");
    }
    const std::vector<Vector> rest = projected_inputs(model, {});
    std::vector<ControlNode> nodes;
    nodes.reserve(u.modes.size());
    for (std::size_t j = 0; j < u.modes.size(); ++j) {
        const int active = u.modes[j];
        if (active < 0 || active >= model.num_modes()) {
            throw InvalidArgument("to_embedded: mode index out of range at node " + std::to_string(j));
        }
        ControlNode node{Vector::Zero(model.num_modes()), rest};
        node.weights[active] = 1.0;
        node.inputs[static_cast<std::size_t>(active)] = u.inputs[j];
        nodes.push_back(std::move(node));
    }
    return EmbeddedControl(u.grid, std::move(nodes));
}

ControlNode sample(const EmbeddedControl& w, double t) { return w.node(w.grid().index_of(t)); }

EmbeddedControl blend(const EmbeddedControl& w, const OrdinaryControl& u_star, double lambda) {
    if (!(w.grid() == u_star.grid) || u_star.num_nodes() != w.num_nodes()) {
        throw InvalidArgument("blend: controls are defined on different grids");
    }
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw InvalidArgument("blend: lambda must lie in [0, 1]");
    }
    std::vector<ControlNode> out;
    out.reserve(static_cast<std::size_t>(w.num_nodes()));
    const int m = w.num_modes();
    for (int j = 0; j < w.num_nodes(); ++j) {
        const ControlNode& src = w.node(j);
        const int active = u_star.modes[static_cast<std::size_t>(j)];
        if (active < 0 || active >= m) {
            throw InvalidArgument("blend: u_star mode index out of range at node " + std::to_string(j));
        }
        ControlNode node;
        node.weights = (1.0 - lambda) * src.weights;
        node.weights[active] += lambda;
        node.inputs = src.inputs;

        const double gamma = node.weights[active];
        const double eps = gamma > 0.0 ? lambda / gamma : 0.0;
        Vector& u = node.inputs[static_cast<std::size_t>(active)];
        const Vector& target = u_star.inputs[static_cast<std::size_t>(j)];
        if (target.size() != u.size()) {
            throw InvalidArgument("blend: u_star input dimension mismatch at node " + std::to_string(j));
        }
        u = (1.0 - eps) * u + eps * target;

        node.weights /= node.weights.sum();
        out.push_back(std::move(node));
    }
    return EmbeddedControl(w.grid(), std::move(out));
}

OrdinaryControl pwm_project(const EmbeddedControl& w, double cycle) {
    const TimeGrid& grid = w.grid();
    const double dt = grid.dt();
    if (!(cycle >= dt * (1.0 - 1e-9))) {
        throw InvalidArgument("pwm_project: cycle must be at least one grid step");
    }
    const int cycle_steps = std::max(1, static_cast<int>(std::lround(cycle / dt)));
    const int m = w.num_modes();

    OrdinaryControl out;
    out.grid = grid;
    out.modes.resize(static_cast<std::size_t>(grid.num_nodes()));
    out.inputs.resize(static_cast<std::size_t>(grid.num_nodes()));

    std::vector<double> share(static_cast<std::size_t>(m));
    std::vector<int> slots(static_cast<std::size_t>(m));
    std::vector<int> order(static_cast<std::size_t>(m));
    for (int start = 0; start < grid.steps(); start += cycle_steps) {
        const int len = std::min(cycle_steps, grid.steps() - start);
        Vector mean = Vector::Zero(m);
        for (int j = start; j < start + len; ++j) {
            mean += w.node(j).weights;
        }
        mean /= mean.sum();

        int assigned = 0;
        for (int i = 0; i < m; ++i) {
            share[i] = mean[i] * len;
            slots[i] = static_cast<int>(std::floor(share[i]));
            assigned += slots[i];
        }
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return share[a] - slots[a] > share[b] - slots[b];
        });
        for (int r = 0; assigned < len; ++r, ++assigned) {
            ++slots[order[static_cast<std::size_t>(r % m)]];
        }

        int j = start;
        for (int i = 0; i < m; ++i) {
            for (int s = 0; s < slots[i]; ++s, ++j) {
                out.modes[j] = i;
                out.inputs[j] = w.node(j).inputs[static_cast<std::size_t>(i)];
            }
        }
    }
    const int last = grid.steps();
    out.modes[last] = out.modes[last - 1];
    out.inputs[last] = w.node(last).inputs[static_cast<std::size_t>(out.modes[last])];
    return out;
}

std::string ValidationReport::summary() const {
    if (ok()) {
        return "ok";
    }
    std::ostringstream os;
    os << violations.size() << " violation(s), worst " << worst;
    const auto it = std::max_element(violations.begin(), violations.end(),
                                     [](const Violation& a, const Violation& b) { return a.magnitude < b.magnitude; });
    os << " at node " << it->node;
    if (it->mode >= 0) {
        os << ", mode " << it->mode + 1;
    }
    return os.str();
}

ValidationReport validate(const EmbeddedControl& w, const HybridModel& model, double tol) {
    ValidationReport report;
    auto add = [&](Violation::Kind kind, int node, int mode, double magnitude) {
        report.violations.push_back({kind, node, mode, magnitude});
        report.worst = std::max(report.worst, magnitude);
    };
    if (w.num_modes() != model.num_modes()) {
        add(Violation::Kind::Shape, 0, -1, std::abs(w.num_modes() - model.num_modes()));
        return report;
    }
    for (int j = 0; j < w.num_nodes(); ++j) {
        const ControlNode& node = w.node(j);
        const double sum_gap = std::abs(node.weights.sum() - 1.0);
        if (sum_gap > tol) {
            add(Violation::Kind::Simplex, j, -1, sum_gap);
        }
        for (int i = 0; i < model.num_modes(); ++i) {
            if (node.weights[i] < -tol) {
                add(Violation::Kind::NegativeWeight, j, i, -node.weights[i]);
            }
            const ModeSpec& mode = model.modes[static_cast<std::size_t>(i)];
            const Vector& u = node.inputs[static_cast<std::size_t>(i)];
            if (u.size() != mode.control_dim) {
                add(Violation::Kind::Shape, j, i, std::abs(u.size() - mode.control_dim));
                continue;
            }
            const double excess = mode.control_set.violation(u);
            if (excess > tol) {
                add(Violation::Kind::InputBounds, j, i, excess);
            }
        }
    }
    return report;
}

}  // namespace switchopt
