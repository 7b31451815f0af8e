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

#ifndef SWITCHOPT_BUILTIN_MODELS_HPP
#define SWITCHOPT_BUILTIN_MODELS_HPP

#include "switchopt/model.hpp"

#include <map>
#include <string>
#include <vector>

namespace switchopt {

using ParameterMap = std::map<std::string, double>;

/// Names accepted by builtin_model(): "double_tank", "unstable_lqr",
/// "mass_spring_damper".
std::vector<std::string> builtin_names();

/// Default parameter table of a builtin model. Throws NotFound for unknown names.
ParameterMap builtin_parameters(const std::string& name);

/// Constructs a builtin benchmark system. Every key of `overrides` must exist
/// in builtin_parameters(name), otherwise InvalidArgument is thrown.
///
/// double_tank
///   Two stacked tanks, inflow v in {v1, v2}; x1' = v - sqrt(x1), x2' = sqrt(x1) - sqrt(x2).
///   Tracking cost weight * (x2 - r(t))^2, r(t) = r_amp sin(r_freq t) + r_offset.
///   Square roots clamp their argument at 0; negative levels count as domain warnings.
/// unstable_lqr
///   f_i = A_i x + b_i u, u unbounded, L = 0.5 (x2 - 2)^2 + 0.5 u^2,
///   phi = 0.5 (x1 - 4)^2 + 0.5 (x2 - 2)^2.
/// mass_spring_damper
///   x1' = x2, mass x2' = -k(x1) - b_i x2 + u with piecewise-affine spring
///   k(x1) = x1 + 1 (x1 <= 1), 3 x1 + 7.5 (x1 > 1); |u| <= u_max;
///   L_i = |x|^2 + u_weight u^2 (+ mode2_offset in mode 2);
///   phi = terminal_weight |x|^2, penalty = penalty_x1 x1^2 + penalty_x2 x2^2.
HybridModel builtin_model(const std::string& name, const ParameterMap& overrides = {});

/// Reference level of the double tank at time t.
double double_tank_reference(const ParameterMap& params, double t);

}  // namespace switchopt

#endif  // SWITCHOPT_BUILTIN_MODELS_HPP
