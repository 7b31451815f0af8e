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

#ifndef SWITCHOPT_SIM_HPP
#define SWITCHOPT_SIM_HPP

#include "switchopt/control.hpp"
#include "switchopt/model.hpp"

#include <optional>
#include <vector>

namespace switchopt {

/// Fixed-step schemes. Running-cost quadrature follows the scheme: left
/// Riemann sums for Euler, the trapezoid rule for Trapezoid.
enum class Integrator { Euler, Trapezoid };

/// Multiple-shooting layout: the horizon is split into `segments` equal
/// pieces; segment s >= 1 restarts from z[s-1] and the defect
/// K * sum_j |x(tau_j^-) - z_j|^2 is added to the cost.
struct ShootingConfig {
    int segments = 1;
    double penalty_K = 0.0;
    std::vector<Vector> z;
    /// First trial step of the next z update; adapted by the solver.
    double z_step_hint = 1.0;

    /// K defaults to 2.5 (segments - 1).
    static ShootingConfig make(int segments, std::optional<double> penalty_K = std::nullopt);
    static double default_penalty(int segments) { return 2.5 * (segments - 1); }

    bool active() const noexcept { return segments > 1; }
    /// Grid indices of tau_1 .. tau_{segments-1}. Throws InvalidArgument when a
    /// boundary does not land on a grid node.
    std::vector<int> boundaries(const TimeGrid& grid) const;
};

/// States on the integration grid. Under multiple shooting the trajectory
/// jumps at each boundary tau_j: `states` holds the right limit z_j and
/// `left_limits` the value x(tau_j^-) reached by the previous segment.
struct Trajectory {
    TimeGrid grid;
    Integrator method = Integrator::Euler;
    std::vector<Vector> states;
    std::vector<int> boundaries;
    std::vector<Vector> left_limits;
    int domain_warnings = 0;

    const Vector& final_state() const { return states.back(); }
};

/// `costates[j]` is the sensitivity of the remaining cost to x(t_j) (right
/// limit at shooting boundaries); `left_limits` the sensitivity to x(tau_j^-).
/// `node_costates[j]` is the costate paired with the control at node j in the
/// Hamiltonian, chosen so that theta is the exact derivative of the discrete cost.
struct CostateTrajectory {
    TimeGrid grid;
    std::vector<Vector> costates;
    std::vector<Vector> left_limits;
    std::vector<Vector> node_costates;
};

struct CostBreakdown {
    double running = 0.0;
    double terminal = 0.0;
    double terminal_penalty = 0.0;
    double shooting_penalty = 0.0;

    double total() const noexcept { return running + terminal + terminal_penalty + shooting_penalty; }
    /// Cost without the final-state and shooting penalties.
    double excluding_penalty() const noexcept { return running + terminal; }
};

/// Integrates x' = sum_i alpha_i(t) f_i(x, u_i(t)). The trapezoid scheme uses
/// an Euler predictor and at most 10 fixed-point corrector sweeps (tolerance
/// 1e-10). Throws DivergenceError on non-finite states.
Trajectory integrate_state(const HybridModel& model, const EmbeddedControl& w, Integrator method,
                           const ShootingConfig* shooting = nullptr);

/// Integrates the state equation of the measure combination
/// (1 - lambda) w (+) lambda u_star directly, as 2M weighted mode terms.
Trajectory integrate_combination(const HybridModel& model, const EmbeddedControl& w,
                                 const OrdinaryControl& u_star, double lambda, Integrator method,
                                 const ShootingConfig* shooting = nullptr);

CostBreakdown eval_cost_breakdown(const HybridModel& model, const EmbeddedControl& w,
                                  const Trajectory& traj, const ShootingConfig* shooting = nullptr);

double eval_cost(const HybridModel& model, const EmbeddedControl& w, const Trajectory& traj,
                 const ShootingConfig* shooting = nullptr);

/// Cost of the combination: (1 - lambda) sum_i int alpha_i L_i(x, u_i)
/// + lambda sum_i int alpha*_i L_i(x, u*_i) + phi(x(t_f)) along `traj`.
double eval_cost_combination(const HybridModel& model, const EmbeddedControl& w,
                             const OrdinaryControl& u_star, double lambda, const Trajectory& traj,
                             const ShootingConfig* shooting = nullptr);

/// Backward costate integration from p(t_f) = grad phi(x(t_f)). Segment ends
/// under shooting use p(tau_j^-) = 2K (x(tau_j^-) - z_j).
///
/// Both variants are exact adjoints of the forward recursion and its cost
/// quadrature (the trapezoid one of the implicit trapezoid step).
CostateTrajectory integrate_costate(const HybridModel& model, const EmbeddedControl& w,
                                    const Trajectory& traj, const ShootingConfig* shooting = nullptr);

/// g_j = p(tau_j^+) - 2K (x(tau_j^-) - z_j), the gradient of the penalized
/// cost with respect to z_j.
std::vector<Vector> shooting_z_gradient(const HybridModel& model, const EmbeddedControl& w,
                                        const Trajectory& traj, const CostateTrajectory& costate,
                                        const ShootingConfig& shooting);

/// max_j |x(tau_j^-) - z_j|; 0 without boundaries.
double shooting_defect(const Trajectory& traj);

/// z_j = x(tau_j) of a single-shooting simulation of w, so the initial
/// penalty vanishes.
ShootingConfig initialize_shooting(const HybridModel& model, const EmbeddedControl& w,
                                   Integrator method, int segments,
                                   std::optional<double> penalty_K = std::nullopt);

/// Per-node weights of the running-cost quadrature on the global grid.
std::vector<double> quadrature_weights(const TimeGrid& grid, Integrator method);

}  // namespace switchopt

#endif  // SWITCHOPT_SIM_HPP
