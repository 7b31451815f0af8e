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

#ifndef SWITCHOPT_HAMMIN_HPP
#define SWITCHOPT_HAMMIN_HPP

#include "switchopt/control.hpp"
#include "switchopt/model.hpp"
#include "switchopt/sim.hpp"

namespace switchopt {

/// H_i(t, x, u, p) = p' (Phi_i(x) u + Psi_i(x)) + L_i(t, x, u).
double eval_hamiltonian_mode(const HybridModel& model, int mode, double t, const Vector& x,
                             const Vector& u, const Vector& p);

/// sum_i alpha_i H_i(t, x, u_i, p).
double eval_hamiltonian_embedded(const HybridModel& model, const ControlNode& node, double t,
                                 const Vector& x, const Vector& p);

/// Closed-form minimizer of H_i over the mode's box for a separable quadratic
/// input cost: u_k = clamp(c_k - (Phi_i(x)' p)_k / (2 w_k), lo_k, hi_k).
/// Flat axes (w_k == 0) go to the bound opposite the sign of the linear term,
/// or to the projection of 0 when that term vanishes. Throws Unsupported when
/// the mode declares no separable quadratic input cost.
Vector box_quad_min(const HybridModel& model, int mode, const Vector& x, const Vector& p);

struct PointwiseMin {
    int mode = 0;
    Vector input;
    double value = 0.0;
};

/// Minimizes H over all modes and inputs at (t, x, p). Ties go to the lowest
/// mode index. Throws ConfigurationError when a mode has no usable minimizer.
PointwiseMin pointwise_min(const HybridModel& model, double t, const Vector& x, const Vector& p);

/// Node-wise pointwise minimizer, held zero-order. Node j pairs x(t_j) with
/// the node costate of j.
OrdinaryControl build_ustar(const HybridModel& model, const Trajectory& traj,
                            const CostateTrajectory& costate);

/// Optimality function: quadrature of H(x, u*, p) - H(x, w, p) with the
/// weights of the trajectory's integrator. Non-positive by construction.
double compute_theta(const HybridModel& model, const EmbeddedControl& w, const Trajectory& traj,
                     const CostateTrajectory& costate, const OrdinaryControl& u_star);

}  // namespace switchopt

#endif  // SWITCHOPT_HAMMIN_HPP
