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

#ifndef SWITCHOPT_CONTROL_HPP
#define SWITCHOPT_CONTROL_HPP

#include "switchopt/model.hpp"

#include <span>
#include <string>
#include <vector>

namespace switchopt {

/// Uniform grid t_j = j * dt, j = 0..steps, with steps * dt == t_f.
class TimeGrid {
public:
    TimeGrid() = default;
    /// Throws InvalidArgument unless t_f / dt is an integer within 1e-9.
    static TimeGrid uniform(double t_f, double dt);
    static TimeGrid with_steps(double t_f, int steps);

    double t_f() const noexcept { return t_f_; }
    int steps() const noexcept { return steps_; }
    int num_nodes() const noexcept { return steps_ + 1; }
    double dt() const noexcept { return t_f_ / steps_; }
    double time(int j) const noexcept { return j == steps_ ? t_f_ : j * dt(); }
    /// Zero-order-hold interval containing t; t_f maps to the last node.
    int index_of(double t) const;

    bool operator==(const TimeGrid& other) const noexcept = default;

private:
    TimeGrid(double t_f, int steps) : t_f_(t_f), steps_(steps) {}

    double t_f_ = 0.0;
    int steps_ = 0;
};

/// Value of an embedded control at one grid node: simplex weights over modes
/// and one input vector per mode (empty when the mode has no inputs).
struct ControlNode {
    Vector weights;
    std::vector<Vector> inputs;
};

/// Embedded control held zero-order on [t_j, t_{j+1}).
class EmbeddedControl {
public:
    EmbeddedControl() = default;
    /// Checks node count and per-node shape consistency; the simplex and box
    /// constraints are checked by validate().
    EmbeddedControl(TimeGrid grid, std::vector<ControlNode> nodes);

    /// alpha_i = 1/M everywhere, inputs at the box projection of 0.
    static EmbeddedControl uniform(const HybridModel& model, const TimeGrid& grid);
    /// One-hot weight on `mode`, constant inputs (projected into each box).
    /// An empty `inputs` list means zero inputs for every mode.
    static EmbeddedControl one_hot(const HybridModel& model, const TimeGrid& grid, int mode,
                                   const std::vector<Vector>& inputs = {});

    const TimeGrid& grid() const noexcept { return grid_; }
    int num_nodes() const noexcept { return static_cast<int>(nodes_.size()); }
    int num_modes() const noexcept {
        return nodes_.empty() ? 0 : static_cast<int>(nodes_.front().weights.size());
    }
    const ControlNode& node(int j) const { return nodes_[static_cast<std::size_t>(j)]; }
    std::span<const ControlNode> nodes() const noexcept { return nodes_; }

private:
    TimeGrid grid_;
    std::vector<ControlNode> nodes_;
};

/// Ordinary switching control: one active mode and its input at every node.
struct OrdinaryControl {
    TimeGrid grid;
    std::vector<int> modes;
    std::vector<Vector> inputs;

    int num_nodes() const noexcept { return static_cast<int>(modes.size()); }
};

/// One-hot embedding of an ordinary control. Inactive modes carry the box
/// projection of 0 (they have zero mass, so the value is irrelevant).
EmbeddedControl to_embedded(const OrdinaryControl& u, const HybridModel& model);

ControlNode sample(const EmbeddedControl& w, double t);

/// Collapses (1 - lambda) w (+) lambda u_star into a single embedded control:
///   gamma_i = (1 - lambda) alpha_i + lambda alpha*_i
///   eps_i   = lambda alpha*_i / gamma_i   (0 when gamma_i == 0)
///   u~_i    = (1 - eps_i) u_i + eps_i u*_i
/// The result has the same state trajectory as the convex combination and no
/// larger cost when every L_i is convex in u.
EmbeddedControl blend(const EmbeddedControl& w, const OrdinaryControl& u_star, double lambda);

/// Pulse-width modulation of the mode weights. Each cycle is split into
/// consecutive slots in ascending mode order; slot lengths are the
/// cycle-averaged weights rounded to grid steps by largest remainder. Inputs
/// are copied from w at the same node. A trailing partial cycle is handled the
/// same way over its own length.
OrdinaryControl pwm_project(const EmbeddedControl& w, double cycle);

struct Violation {
    enum class Kind { Simplex, NegativeWeight, InputBounds, Shape };
    Kind kind;
    int node;
    int mode;  // -1 when not mode-specific
    double magnitude;
};

struct ValidationReport {
    std::vector<Violation> violations;
    double worst = 0.0;

    bool ok() const noexcept { return violations.empty(); }
    std::string summary() const;
};

/// Checks simplex and box invariants node by node; never throws.
ValidationReport validate(const EmbeddedControl& w, const HybridModel& model, double tol = 1e-10);

}  // namespace switchopt

#endif  // SWITCHOPT_CONTROL_HPP
