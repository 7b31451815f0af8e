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

#include "switchopt/builtin_models.hpp"

#include "switchopt/errors.hpp"

#include <cmath>
#include <numbers>

namespace switchopt {

namespace {

ParameterMap merge(const std::string& name, ParameterMap params, const ParameterMap& overrides) {
    for (const auto& [key, value] : overrides) {
        auto it = params.find(key);
        if (it == params.end()) {
            std::string accepted;
            for (const auto& [k, v] : params) {
                accepted += accepted.empty() ? k : ", " + k;
            }
            throw InvalidArgument("builtin model '" + name + "' has no parameter '" + key +
                                  "' (accepted: " + accepted + ")");
        }
        it->second = value;
    }
    return params;
}

double clamped_sqrt(double v) { return v > 0.0 ? std::sqrt(v) : 0.0; }

// Derivative of the clamped square root; zero on the clamped side.
double clamped_sqrt_deriv(double v) { return v > 0.0 ? 0.5 / std::sqrt(v) : 0.0; }

HybridModel make_double_tank(const ParameterMap& p) {
    HybridModel model;
    model.name = "double_tank";
    model.state_dim = 2;
    model.x0 = Vector{{p.at("x0_1"), p.at("x0_2")}};
    model.t_f = p.at("t_f");

    const double weight = p.at("weight");
    const ParameterMap ref_params = p;
    for (const double v : {p.at("v1"), p.at("v2")}) {
        ModeSpec mode;
        mode.name = "v=" + std::to_string(v);
        mode.control_set = ControlSet::empty();
        mode.dyn_psi = [v](const Vector& x) -> Vector {
            const double s1 = clamped_sqrt(x[0]);
            return Vector{{v - s1, s1 - clamped_sqrt(x[1])}};
        };
        mode.dyn_psi_jac = [](const Vector& x) -> Matrix {
            const double d1 = clamped_sqrt_deriv(x[0]);
            const double d2 = clamped_sqrt_deriv(x[1]);
            Matrix jac(2, 2);
            jac << -d1, 0.0, d1, -d2;
            return jac;
        };
        mode.run_cost = [weight, ref_params](double t, const Vector& x, const Vector&) {
            const double e = x[1] - double_tank_reference(ref_params, t);
            return weight * e * e;
        };
        mode.run_cost_grad_x = [weight, ref_params](double t, const Vector& x, const Vector&) -> Vector {
            return Vector{{0.0, 2.0 * weight * (x[1] - double_tank_reference(ref_params, t))}};
        };
        model.modes.push_back(std::move(mode));
    }
    model.state_domain = [](const Vector& x) { return x[0] >= 0.0 && x[1] >= 0.0; };
    return model;
}

HybridModel make_unstable_lqr(const ParameterMap& p) {
    HybridModel model;
    model.name = "unstable_lqr";
    model.state_dim = 2;
    model.x0 = Vector{{p.at("x0_1"), p.at("x0_2")}};
    model.t_f = p.at("t_f");

    Matrix a1(2, 2);
    a1 << 0.6, 1.2, -0.8, 3.4;
    Matrix a2(2, 2);
    a2 << 4.0, 3.0, -1.0, 0.0;
    const Matrix b1 = Vector{{1.0, 1.0}};
    const Matrix b2 = Vector{{2.0, -1.0}};

    const double x2_ref = p.at("x2_ref");
    for (const auto& [a, b] : {std::pair{a1, b1}, std::pair{a2, b2}}) {
        ModeSpec mode;
        mode.control_dim = 1;
        mode.control_set = ControlSet::unbounded(1);
        mode.dyn_phi = [b](const Vector&) { return b; };
        mode.dyn_psi = [a](const Vector& x) -> Vector { return a * x; };
        mode.dyn_psi_jac = [a](const Vector&) { return a; };
        mode.run_cost = [x2_ref](double, const Vector& x, const Vector& u) {
            const double e = x[1] - x2_ref;
            return 0.5 * e * e + 0.5 * u[0] * u[0];
        };
        mode.run_cost_grad_x = [x2_ref](double, const Vector& x, const Vector&) -> Vector {
            return Vector{{0.0, x[1] - x2_ref}};
        };
        mode.quadratic_u = SeparableQuadratic{Vector::Constant(1, 0.5), Vector::Zero(1)};
        model.modes.push_back(std::move(mode));
    }
    model.modes[0].name = "A1";
    model.modes[1].name = "A2";

    const Vector target{{p.at("x1_target"), p.at("x2_target")}};
    model.terminal.value = [target](const Vector& x) { return 0.5 * (x - target).squaredNorm(); };
    model.terminal.grad = [target](const Vector& x) -> Vector { return x - target; };
    return model;
}

double spring_force(double x1) { return x1 <= 1.0 ? x1 + 1.0 : 3.0 * x1 + 7.5; }

// Left branch slope at the kink.
double spring_slope(double x1) { return x1 <= 1.0 ? 1.0 : 3.0; }

HybridModel make_mass_spring_damper(const ParameterMap& p) {
    HybridModel model;
    model.name = "mass_spring_damper";
    model.state_dim = 2;
    model.x0 = Vector{{p.at("x0_1"), p.at("x0_2")}};
    model.t_f = p.at("t_f");

    const double mass = p.at("mass");
    if (!(mass > 0.0)) {
        throw InvalidArgument("mass_spring_damper: mass must be positive");
    }
    const double u_max = p.at("u_max");
    const double u_weight = p.at("u_weight");
    const Matrix phi = Vector{{0.0, 1.0 / mass}};
    const double offsets[2] = {0.0, p.at("mode2_offset")};
    const double frictions[2] = {p.at("b1"), p.at("b2")};
    for (int i = 0; i < 2; ++i) {
        const double b = frictions[i];
        const double offset = offsets[i];
        ModeSpec mode;
        mode.name = "b=" + std::to_string(b);
        mode.control_dim = 1;
        mode.control_set = ControlSet::box(Vector::Constant(1, -u_max), Vector::Constant(1, u_max));
        mode.dyn_phi = [phi](const Vector&) { return phi; };
        mode.dyn_psi = [b, mass](const Vector& x) -> Vector {
            return Vector{{x[1], (-spring_force(x[0]) - b * x[1]) / mass}};
        };
        mode.dyn_psi_jac = [b, mass](const Vector& x) -> Matrix {
            Matrix jac(2, 2);
            jac << 0.0, 1.0, -spring_slope(x[0]) / mass, -b / mass;
            return jac;
        };
        mode.run_cost = [u_weight, offset](double, const Vector& x, const Vector& u) {
            return x.squaredNorm() + u_weight * u[0] * u[0] + offset;
        };
        mode.run_cost_grad_x = [](double, const Vector& x, const Vector&) -> Vector { return 2.0 * x; };
        mode.quadratic_u = SeparableQuadratic{Vector::Constant(1, u_weight), Vector::Zero(1)};
        model.modes.push_back(std::move(mode));
    }

    const double tw = p.at("terminal_weight");
    model.terminal.value = [tw](const Vector& x) { return tw * x.squaredNorm(); };
    model.terminal.grad = [tw](const Vector& x) -> Vector { return 2.0 * tw * x; };
    const Vector pen{{p.at("penalty_x1"), p.at("penalty_x2")}};
    model.terminal_penalty.value = [pen](const Vector& x) {
        return (pen.array() * x.array().square()).sum();
    };
    model.terminal_penalty.grad = [pen](const Vector& x) -> Vector {
        return 2.0 * pen.cwiseProduct(x);
    };
    return model;
}

}  // namespace

std::vector<std::string> builtin_names() {
    return {"double_tank", "unstable_lqr", "mass_spring_damper"};
}

ParameterMap builtin_parameters(const std::string& name) {
    if (name == "double_tank") {
        return {{"x0_1", 2.0},     {"x0_2", 2.0},   {"t_f", 30.0},
                {"v1", 1.0},       {"v2", 2.0},     {"weight", 2.0},
                {"r_amp", 0.5},    {"r_freq", 0.1 * std::numbers::pi},
                {"r_offset", 2.5}};
    }
    if (name == "unstable_lqr") {
        return {{"x0_1", 0.0},      {"x0_2", 2.0},      {"t_f", 2.0},
                {"x1_target", 4.0}, {"x2_target", 2.0}, {"x2_ref", 2.0}};
    }
    if (name == "mass_spring_damper") {
        return {{"x0_1", 3.0},       {"x0_2", 4.0},       {"t_f", 12.0},
                {"mass", 1.0},       {"b1", 1.0},         {"b2", 50.0},
                {"u_max", 10.0},     {"u_weight", 0.2},   {"mode2_offset", 1.0},
                {"terminal_weight", 1.0}, {"penalty_x1", 5.0}, {"penalty_x2", 30.0}};
    }
    throw NotFound("unknown builtin model '" + name +
                   "' (known: double_tank, unstable_lqr, mass_spring_damper)");
}

double double_tank_reference(const ParameterMap& params, double t) {
    return params.at("r_amp") * std::sin(params.at("r_freq") * t) + params.at("r_offset");
}

HybridModel builtin_model(const std::string& name, const ParameterMap& overrides) {
    const ParameterMap params = merge(name, builtin_parameters(name), overrides);
    HybridModel model;
    if (name == "double_tank") {
        model = make_double_tank(params);
    } else if (name == "unstable_lqr") {
        model = make_unstable_lqr(params);
    } else {
        model = make_mass_spring_damper(params);
    }
    model.validate();
    return model;
}

}  // namespace switchopt
