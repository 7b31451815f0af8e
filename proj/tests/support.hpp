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

#ifndef SWITCHOPT_TESTS_SUPPORT_HPP
#define SWITCHOPT_TESTS_SUPPORT_HPP

#include "switchopt/builtin_models.hpp"
#include "switchopt/control.hpp"
#include "switchopt/hammin.hpp"
#include "switchopt/model.hpp"
#include "switchopt/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

namespace switchopt::testing {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline Vector random_vector(Rng& rng, Eigen::Index n, double lo, double hi) {
    Vector v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        v[i] = uniform(rng, lo, hi);
    }
    return v;
}

inline Matrix random_matrix(Rng& rng, Eigen::Index r, Eigen::Index c, double scale) {
    Matrix m(r, c);
    for (Eigen::Index i = 0; i < r; ++i) {
        for (Eigen::Index j = 0; j < c; ++j) {
            m(i, j) = uniform(rng, -scale, scale);
        }
    }
    return m;
}

/// Random point on the probability simplex.
inline Vector random_simplex(Rng& rng, int m) {
    std::exponential_distribution<double> e(1.0);
    Vector v(m);
    for (int i = 0; i < m; ++i) {
        v[i] = e(rng);
    }
    return v / v.sum();
}

struct RandomInstanceOptions {
    int modes = 2;
    int state_dim = 2;
    int input_dim = 1;
    double t_f = 1.0;
    bool bounded = true;
};

inline AffineQuadraticSpec random_affine_spec(Rng& rng, const RandomInstanceOptions& opt) {
    const int n = opt.state_dim;
    const int k = opt.input_dim;
    AffineQuadraticSpec spec;
    spec.x0 = random_vector(rng, n, -1.0, 1.0);
    spec.t_f = opt.t_f;
    for (int i = 0; i < opt.modes; ++i) {
        AffineQuadraticMode m;
        m.A = random_matrix(rng, n, n, 1.0);
        m.B = random_matrix(rng, n, k, 1.0);
        m.d = random_vector(rng, n, -0.5, 0.5);
        const Matrix g = random_matrix(rng, n, n, 1.0);
        m.Q = g * g.transpose() / n;
        m.x_ref = random_vector(rng, n, -1.0, 1.0);
        m.R = random_vector(rng, k, 0.1, 1.0).asDiagonal();
        m.u_ref = random_vector(rng, k, -0.5, 0.5);
        m.offset = uniform(rng, 0.0, 0.5);
        if (opt.bounded) {
            m.lower = random_vector(rng, k, -2.0, -0.5);
            m.upper = random_vector(rng, k, 0.5, 2.0);
        } else {
            m.lower = Vector::Constant(k, -std::numeric_limits<double>::infinity());
            m.upper = Vector::Constant(k, std::numeric_limits<double>::infinity());
        }
        spec.modes.push_back(std::move(m));
    }
    const Matrix g = random_matrix(rng, n, n, 1.0);
    spec.terminal_Q = g * g.transpose() / n;
    spec.terminal_ref = random_vector(rng, n, -1.0, 1.0);
    return spec;
}

inline Vector random_input(Rng& rng, const ModeSpec& mode) {
    Vector u(mode.control_dim);
    for (int c = 0; c < mode.control_dim; ++c) {
        const double lo = std::max(mode.control_set.lower()[c], -3.0);
        const double hi = std::min(mode.control_set.upper()[c], 3.0);
        u[c] = uniform(rng, lo, hi);
    }
    return u;
}

inline EmbeddedControl random_control(Rng& rng, const HybridModel& model, const TimeGrid& grid) {
    std::vector<ControlNode> nodes;
    for (int j = 0; j < grid.num_nodes(); ++j) {
        ControlNode node;
        node.weights = random_simplex(rng, model.num_modes());
        for (const ModeSpec& mode : model.modes) {
            node.inputs.push_back(random_input(rng, mode));
        }
        nodes.push_back(std::move(node));
    }
    return EmbeddedControl(grid, std::move(nodes));
}

inline OrdinaryControl random_ordinary(Rng& rng, const HybridModel& model, const TimeGrid& grid) {
    OrdinaryControl u;
    u.grid = grid;
    for (int j = 0; j < grid.num_nodes(); ++j) {
        const int mode = uniform_int(rng, 0, model.num_modes() - 1);
        u.modes.push_back(mode);
        u.inputs.push_back(random_input(rng, model.modes[static_cast<std::size_t>(mode)]));
    }
    return u;
}

/// Central-difference Jacobian of f at x.
template <typename F>
Matrix fd_jacobian(F&& f, const Vector& x, double h) {
    const Vector f0 = f(x);
    Matrix jac(f0.size(), x.size());
    for (Eigen::Index c = 0; c < x.size(); ++c) {
        Vector xp = x;
        Vector xm = x;
        xp[c] += h;
        xm[c] -= h;
        jac.col(c) = (f(xp) - f(xm)) / (2.0 * h);
    }
    return jac;
}

template <typename F>
Vector fd_gradient(F&& f, const Vector& x, double h) {
    Vector g(x.size());
    for (Eigen::Index c = 0; c < x.size(); ++c) {
        Vector xp = x;
        Vector xm = x;
        xp[c] += h;
        xm[c] -= h;
        g[c] = (f(xp) - f(xm)) / (2.0 * h);
    }
    return g;
}

inline double relative_error(const Matrix& analytic, const Matrix& reference) {
    return (analytic - reference).norm() / std::max(1.0, reference.norm());
}

/// Total cost of w under `method`, single shooting.
inline double total_cost(const HybridModel& model, const EmbeddedControl& w, Integrator method) {
    const Trajectory traj = integrate_state(model, w, method);
    return eval_cost(model, w, traj);
}

}  // namespace switchopt::testing

#endif  // SWITCHOPT_TESTS_SUPPORT_HPP
