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

#ifndef SWITCHOPT_CSV_IO_HPP
#define SWITCHOPT_CSV_IO_HPP

#include "switchopt/control.hpp"
#include "switchopt/model.hpp"
#include "switchopt/sim.hpp"
#include "switchopt/solver.hpp"

#include <iosfwd>
#include <span>
#include <string>

namespace switchopt {

/// Shortest-round-trip-safe text form (17 significant digits).
std::string format_real(double value);

/// Header: t,alpha_1..alpha_M,u_1_1..u_1_k1,...,u_M_1..u_M_kM
void write_control_csv(std::ostream& os, const EmbeddedControl& w);
/// Reads a control written by write_control_csv for `model`. The grid is
/// recovered from the t column and must be uniform.
EmbeddedControl read_control_csv(std::istream& is, const HybridModel& model);

/// Header: t,x_1..x_n. Shooting left limits are not written.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);
/// Header: t,p_1..p_n.
void write_costate_csv(std::ostream& os, const CostateTrajectory& costate);
/// Header: t,mode,u_1..u_kmax (mode is 1-based; unused input columns are empty).
void write_pwm_csv(std::ostream& os, const OrdinaryControl& u, const HybridModel& model);
/// Header: iter,J,theta,lambda,backtracks,wall_ms
void write_iteration_log(std::ostream& os, std::span<const IterationRecord> history);

}  // namespace switchopt

#endif  // SWITCHOPT_CSV_IO_HPP
