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

#include "switchopt/model.hpp"

#include "switchopt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace switchopt {

ControlSet::ControlSet(Kind kind, Vector lower, Vector upper)
    : kind_(kind), lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.size() != upper_.size()) {
        throw InvalidArgument("ControlSet: lower and upper bounds differ in dimension");
    }
    for (Eigen::Index k = 0; k < lower_.size(); ++k) {
        if (std::isnan(lower_[k]) || std::isnan(upper_[k]) || lower_[k] > upper_[k]) {
            throw InvalidArgument("ControlSet: lower bound exceeds upper bound at coordinate " +
                                  std::to_string(k));
        }
    }
}

ControlSet ControlSet::empty() { return ControlSet(Kind::Empty, Vector(0), Vector(0)); }

ControlSet ControlSet::box(Vector lower, Vector upper) {
    if (!lower.allFinite() || !upper.allFinite()) {
        throw InvalidArgument("ControlSet::box: bounds must be finite; use unbounded_box");
    }
    if (lower.size() == 0) {
        return empty();
    }
    return ControlSet(Kind::Box, std::move(lower), std::move(upper));
}

ControlSet ControlSet::unbounded(int dim) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return unbounded_box(Vector::Constant(dim, -inf), Vector::Constant(dim, inf));
}

ControlSet ControlSet::unbounded_box(Vector lower, Vector upper) {
    if (lower.size() == 0) {
        return empty();
    }
    return ControlSet(Kind::UnboundedBox, std::move(lower), std::move(upper));
}

Vector ControlSet::clamp(const Vector& u) const {
    if (u.size() != lower_.size()) {
        throw InvalidArgument("ControlSet::clamp: dimension mismatch");
    }
    return u.cwiseMax(lower_).cwiseMin(upper_);
}

bool ControlSet::contains(const Vector& u, double tol) const {
    return u.size() == lower_.size() && violation(u) <= tol;
}

double ControlSet::violation(const Vector& u) const {
    double worst = 0.0;
    for (Eigen::Index k = 0; k < u.size() && k < lower_.size(); ++k) {
        worst = std::max({worst, lower_[k] - u[k], u[k] - upper_[k]});
    }
    return worst;
}

Vector ModeSpec::dynamics(const Vector& x, const Vector& u) const {
    Vector f = dyn_psi(x);
    if (control_dim > 0) {
        f.noalias() += dyn_phi(x) * u;
    }
    return f;
}

Matrix ModeSpec::dynamics_jac(const Vector& x, const Vector& u) const {
    Matrix jac = dyn_psi_jac(x);
    if (control_dim > 0 && dyn_phi_jac) {
        jac += dyn_phi_jac(x, u);
    }
    return jac;
}

double HybridModel::terminal_cost(const Vector& x) const {
    double value = terminal ? terminal.value(x) : 0.0;
    if (terminal_penalty) {
        value += terminal_penalty.value(x);
    }
    return value;
}

Vector HybridModel::terminal_cost_grad(const Vector& x) const {
    Vector g = terminal ? terminal.grad(x) : Vector::Zero(x.size());
    if (terminal_penalty) {
        g += terminal_penalty.grad(x);
    }
    return g;
}

double HybridModel::terminal_penalty_value(const Vector& x) const {
    return terminal_penalty ? terminal_penalty.value(x) : 0.0;
}

void HybridModel::validate() const {
    if (state_dim < 1) {
        throw InvalidArgument("HybridModel: state dimension must be >= 1");
    }
    if (modes.empty()) {
        throw InvalidArgument("HybridModel: at least one mode is required");
    }
    if (!(t_f > 0.0) || !std::isfinite(t_f)) {
        throw InvalidArgument("HybridModel: horizon t_f must be positive");
    }
    if (x0.size() != state_dim) {
        throw InvalidArgument("HybridModel: x0 has wrong dimension");
    }
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const ModeSpec& m = modes[i];
        const std::string tag = "HybridModel: mode " + std::to_string(i + 1);
        if (m.control_dim < 0 || m.control_set.dim() != m.control_dim) {
            throw InvalidArgument(tag + " control set dimension differs from control_dim");
        }
        if (!m.dyn_psi || !m.dyn_psi_jac || !m.run_cost || !m.run_cost_grad_x) {
            throw InvalidArgument(tag + " is missing a required evaluator");
        }
        if (m.control_dim > 0 && !m.dyn_phi) {
            throw InvalidArgument(tag + " has inputs but no Phi");
        }
        if (m.quadratic_u && (m.quadratic_u->weight.size() != m.control_dim ||
                              m.quadratic_u->center.size() != m.control_dim)) {
            throw InvalidArgument(tag + " quadratic input cost has wrong dimension");
        }
        if (m.control_set.kind() == ControlSet::Kind::UnboundedBox) {
            const bool bounded = m.control_set.lower().allFinite() && m.control_set.upper().allFinite();
            const bool strictly_convex =
                m.pointwise_min || (m.quadratic_u && (m.quadratic_u->weight.array() > 0.0).all());
            if (!bounded && !strictly_convex) {
                throw InvalidArgument(tag +
                                      " has unbounded inputs without a strictly convex input cost");
            }
        }
    }
}

namespace {

void check_mode(const HybridModel& model, int mode, const Vector& x, const Vector& u) {
    if (mode < 0 || mode >= model.num_modes()) {
        throw InvalidArgument("mode index " + std::to_string(mode) + " out of range [0, " +
                              std::to_string(model.num_modes()) + ")");
    }
    if (x.size() != model.state_dim) {
        throw InvalidArgument("state has dimension " + std::to_string(x.size()) + ", expected " +
                              std::to_string(model.state_dim));
    }
    const int k = model.modes[static_cast<std::size_t>(mode)].control_dim;
    if (u.size() != k) {
        throw InvalidArgument("input has dimension " + std::to_string(u.size()) + ", expected " +
                              std::to_string(k));
    }
}

}  // namespace

Vector eval_mode_dynamics(const HybridModel& model, int mode, const Vector& x, const Vector& u) {
    check_mode(model, mode, x, u);
    return model.modes[static_cast<std::size_t>(mode)].dynamics(x, u);
}

Matrix eval_mode_dynamics_jac(const HybridModel& model, int mode, const Vector& x, const Vector& u) {
    check_mode(model, mode, x, u);
    return model.modes[static_cast<std::size_t>(mode)].dynamics_jac(x, u);
}

double eval_run_cost(const HybridModel& model, int mode, double t, const Vector& x, const Vector& u) {
    check_mode(model, mode, x, u);
    return model.modes[static_cast<std::size_t>(mode)].run_cost(t, x, u);
}

Vector eval_run_cost_grad_x(const HybridModel& model, int mode, double t, const Vector& x,
                            const Vector& u) {
    check_mode(model, mode, x, u);
    return model.modes[static_cast<std::size_t>(mode)].run_cost_grad_x(t, x, u);
}

double terminal_gradient_error(const HybridModel& model, const Vector& x, double h) {
    const Vector g = model.terminal_cost_grad(x);
    Vector fd(x.size());
    for (Eigen::Index k = 0; k < x.size(); ++k) {
        Vector xp = x;
        Vector xm = x;
        xp[k] += h;
        xm[k] -= h;
        fd[k] = (model.terminal_cost(xp) - model.terminal_cost(xm)) / (2.0 * h);
    }
    return (g - fd).norm() / std::max(1.0, fd.norm());
}

HybridModel affine_quadratic_model(const AffineQuadraticSpec& spec) {
    const auto n = spec.x0.size();
    if (n < 1) {
        throw InvalidArgument("affine_quadratic_model: x0 must be non-empty");
    }
    if (spec.modes.empty()) {
        throw InvalidArgument("affine_quadratic_model: at least one mode is required");
    }
    auto require_shape = [](const Matrix& m, Eigen::Index rows, Eigen::Index cols, const std::string& what) {
        if (m.rows() != rows || m.cols() != cols) {
            throw InvalidArgument("affine_quadratic_model: " + what + " has shape " +
                                  std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                                  ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
        }
    };

    HybridModel model;
    model.name = spec.name;
    model.state_dim = static_cast<int>(n);
    model.x0 = spec.x0;
    model.t_f = spec.t_f;

    for (std::size_t i = 0; i < spec.modes.size(); ++i) {
        const AffineQuadraticMode& src = spec.modes[i];
        const std::string tag = "mode " + std::to_string(i + 1) + " ";
        const Eigen::Index k = src.B.cols();
        require_shape(src.A, n, n, tag + "A");
        if (k > 0) {
            require_shape(src.B, n, k, tag + "B");
        }
        require_shape(src.d, n, 1, tag + "d");
        require_shape(src.Q, n, n, tag + "Q");
        require_shape(src.x_ref, n, 1, tag + "x_ref");
        require_shape(src.R, k, k, tag + "R");
        require_shape(src.u_ref, k, 1, tag + "u_ref");
        require_shape(src.lower, k, 1, tag + "lower");
        require_shape(src.upper, k, 1, tag + "upper");

        Matrix off_diag = src.R;
        off_diag.diagonal().setZero();
        if (k > 0 && off_diag.cwiseAbs().maxCoeff() > 0.0) {
            throw Unsupported("affine_quadratic_model: " + tag +
                              "R must be diagonal for the closed-form box minimizer");
        }
        const Vector r_diag = src.R.diagonal();
        const bool finite_box = src.lower.allFinite() && src.upper.allFinite();
        if ((r_diag.array() < 0.0).any()) {
            throw InvalidArgument("affine_quadratic_model: " + tag + "R has a negative diagonal entry");
        }
        if (!finite_box) {
            for (Eigen::Index c = 0; c < k; ++c) {
                const bool unbounded_axis = !std::isfinite(src.lower[c]) || !std::isfinite(src.upper[c]);
                if (unbounded_axis && !(r_diag[c] > 0.0)) {
                    throw InvalidArgument("affine_quadratic_model: " + tag +
                                          "unbounded input axis requires R_kk > 0");
                }
            }
        }

        ModeSpec mode;
        mode.name = "mode" + std::to_string(i + 1);
        mode.control_dim = static_cast<int>(k);
        mode.control_set = k == 0 ? ControlSet::empty()
                           : finite_box ? ControlSet::box(src.lower, src.upper)
                                        : ControlSet::unbounded_box(src.lower, src.upper);
        const Matrix A = src.A;
        const Matrix B = src.B;
        const Vector d = src.d;
        const Matrix Q = src.Q;
        const Matrix Qsym = src.Q + src.Q.transpose();
        const Vector x_ref = src.x_ref;
        const Vector u_ref = src.u_ref;
        const double offset = src.offset;
        mode.dyn_phi = [B](const Vector&) { return B; };
        mode.dyn_psi = [A, d](const Vector& x) -> Vector { return A * x + d; };
        mode.dyn_psi_jac = [A](const Vector&) { return A; };
        mode.run_cost = [Q, x_ref, r_diag, u_ref, offset](double, const Vector& x, const Vector& u) {
            const Vector dx = x - x_ref;
            double cost = dx.dot(Q * dx) + offset;
            if (u.size() > 0) {
                cost += (r_diag.array() * (u - u_ref).array().square()).sum();
            }
            return cost;
        };
        mode.run_cost_grad_x = [Qsym, x_ref](double, const Vector& x, const Vector&) -> Vector {
            return Qsym * (x - x_ref);
        };
        if (k > 0) {
            mode.quadratic_u = SeparableQuadratic{r_diag, u_ref};
        }
        model.modes.push_back(std::move(mode));
    }

    require_shape(spec.terminal_Q, n, n, "terminal_Q");
    require_shape(spec.terminal_ref, n, 1, "terminal_ref");
    const Matrix Qf = spec.terminal_Q;
    const Matrix Qf_sym = Qf + Qf.transpose();
    const Vector xf = spec.terminal_ref;
    model.terminal.value = [Qf, xf](const Vector& x) {
        const Vector dx = x - xf;
        return dx.dot(Qf * dx);
    };
    model.terminal.grad = [Qf_sym, xf](const Vector& x) -> Vector { return Qf_sym * (x - xf); };

    model.validate();
    return model;
}

}  // namespace switchopt
