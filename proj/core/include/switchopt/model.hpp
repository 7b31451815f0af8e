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

#ifndef SWITCHOPT_MODEL_HPP
#define SWITCHOPT_MODEL_HPP

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace switchopt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Admissible input set U_i of one mode.
///
/// `Empty` is a pure switch mode with no continuous input (k_i = 0). `Box` has
/// finite bounds. `UnboundedBox` allows infinite bounds per coordinate and is
/// only valid when the mode's running cost is strictly convex in u, so that
/// the pointwise Hamiltonian minimizer exists.
class ControlSet {
public:
    enum class Kind { Empty, Box, UnboundedBox };

    ControlSet() = default;

    static ControlSet empty();
    static ControlSet box(Vector lower, Vector upper);
    static ControlSet unbounded(int dim);
    /// Box with possibly infinite bounds.
    static ControlSet unbounded_box(Vector lower, Vector upper);

    Kind kind() const noexcept { return kind_; }
    int dim() const noexcept { return static_cast<int>(lower_.size()); }
    const Vector& lower() const noexcept { return lower_; }
    const Vector& upper() const noexcept { return upper_; }

    Vector clamp(const Vector& u) const;
    bool contains(const Vector& u, double tol = 0.0) const;
    /// Largest componentwise distance of u outside the set (0 when inside).
    double violation(const Vector& u) const;

private:
    ControlSet(Kind kind, Vector lower, Vector upper);

    Kind kind_ = Kind::Empty;
    Vector lower_;
    Vector upper_;
};

/// Running cost of the form l(t, x) + sum_k weight_k (u_k - center_k)^2.
/// Declaring it lets the solver minimize the Hamiltonian over a box in closed form.
struct SeparableQuadratic {
    Vector weight;
    Vector center;
};

using StateFn = std::function<Vector(const Vector& x)>;
using StateMatrixFn = std::function<Matrix(const Vector& x)>;
using InputJacobianFn = std::function<Matrix(const Vector& x, const Vector& u)>;
using RunCostFn = std::function<double(double t, const Vector& x, const Vector& u)>;
using RunCostGradFn = std::function<Vector(double t, const Vector& x, const Vector& u)>;
using ScalarStateFn = std::function<double(const Vector& x)>;
/// Returns argmin_u H(x, u, p) over the mode's control set.
using ModeMinimizerFn = std::function<Vector(double t, const Vector& x, const Vector& p)>;

/// One mode of the switched system, with dynamics f_i(x, u) = Phi_i(x) u + Psi_i(x).
struct ModeSpec {
    std::string name;
    int control_dim = 0;
    ControlSet control_set;

    StateMatrixFn dyn_phi;       // n x k_i; unused when k_i == 0
    StateFn dyn_psi;             // n
    InputJacobianFn dyn_phi_jac; // d(Phi_i(x) u)/dx, n x n; empty means Phi_i is constant
    StateMatrixFn dyn_psi_jac;   // n x n

    RunCostFn run_cost;
    RunCostGradFn run_cost_grad_x;

    std::optional<SeparableQuadratic> quadratic_u;
    ModeMinimizerFn pointwise_min;

    /// Unchecked evaluation used on hot paths.
    Vector dynamics(const Vector& x, const Vector& u) const;
    Matrix dynamics_jac(const Vector& x, const Vector& u) const;
};

/// Terminal cost term with its gradient. An empty term contributes zero.
struct TerminalTerm {
    ScalarStateFn value;
    StateFn grad;

    explicit operator bool() const noexcept { return static_cast<bool>(value); }
};

/// Switched-mode hybrid system on a fixed horizon [0, t_f].
///
/// Mode indices are 0-based throughout the library; files and the CLI print
/// them 1-based.
struct HybridModel {
    std::string name;
    int state_dim = 0;
    std::vector<ModeSpec> modes;
    /// phi(x(t_f)) proper.
    TerminalTerm terminal;
    /// Penalty added to phi to emulate final-state constraints. Reported
    /// separately so that costs "excluding penalty" can be quoted.
    TerminalTerm terminal_penalty;
    Vector x0;
    double t_f = 0.0;
    /// Optional physical-domain predicate; states outside it are counted as
    /// domain warnings during integration.
    std::function<bool(const Vector& x)> state_domain;

    int num_modes() const noexcept { return static_cast<int>(modes.size()); }

    double terminal_cost(const Vector& x) const;
    Vector terminal_cost_grad(const Vector& x) const;
    double terminal_penalty_value(const Vector& x) const;

    /// Throws InvalidArgument when structural invariants fail.
    void validate() const;
};

// Checked evaluators. Mode indices are 0-based.
Vector eval_mode_dynamics(const HybridModel& model, int mode, const Vector& x, const Vector& u);
Matrix eval_mode_dynamics_jac(const HybridModel& model, int mode, const Vector& x, const Vector& u);
double eval_run_cost(const HybridModel& model, int mode, double t, const Vector& x, const Vector& u);
Vector eval_run_cost_grad_x(const HybridModel& model, int mode, double t, const Vector& x,
                            const Vector& u);

/// Relative error between the analytic terminal gradient and central
/// differences at x, measured as ||g - g_fd|| / max(1, ||g_fd||).
double terminal_gradient_error(const HybridModel& model, const Vector& x, double h = 1e-6);

/// Declarative affine-quadratic mode:
///   f(x, u) = A x + B u + d
///   L(x, u) = (x - x_ref)' Q (x - x_ref) + (u - u_ref)' R (u - u_ref) + offset
struct AffineQuadraticMode {
    Matrix A;
    Matrix B;      // n x k; zero columns for pure switch modes
    Vector d;
    Matrix Q;
    Vector x_ref;
    Matrix R;      // k x k, must be diagonal
    Vector u_ref;
    double offset = 0.0;
    Vector lower;  // may hold +-infinity
    Vector upper;
};

struct AffineQuadraticSpec {
    std::string name = "affine_quadratic";
    Vector x0;
    double t_f = 1.0;
    std::vector<AffineQuadraticMode> modes;
    /// phi(x) = (x - terminal_ref)' terminal_Q (x - terminal_ref)
    Matrix terminal_Q;
    Vector terminal_ref;
};

/// Builds a model from an affine-quadratic description and attaches the
/// closed-form box minimizer to every mode.
HybridModel affine_quadratic_model(const AffineQuadraticSpec& spec);

}  // namespace switchopt

#endif  // SWITCHOPT_MODEL_HPP
