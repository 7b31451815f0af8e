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

#ifndef SWITCHOPT_CLI_RUNNER_HPP
#define SWITCHOPT_CLI_RUNNER_HPP

#include "switchopt/cli/manifest.hpp"
#include "switchopt/solver.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace switchopt::cli {

enum ExitCode : int { kExitOk = 0, kExitParse = 2, kExitStepFailure = 3, kExitIo = 4 };

struct RunSummary {
    SolveStatus status = SolveStatus::MaxIters;
    int iterations = 0;
    double initial_cost = 0.0;
    double final_cost = 0.0;
    double final_cost_excluding_penalty = 0.0;
    double final_theta = 0.0;
    double final_defect = 0.0;
    Vector final_state;
    std::optional<double> pwm_cost;
    std::optional<double> pwm_cost_excluding_penalty;
    std::string message;
};

/// Solves the manifest's problem and writes iterations.csv, control.csv,
/// trajectory.csv, summary.json, and optionally costate.csv and pwm.csv into
/// the output directory (created on demand). Throws std::filesystem or
/// std::ios failures on I/O errors.
RunSummary run(const RunManifest& manifest, std::ostream& log);

/// Maps a run outcome to the process exit status.
int exit_code_for(const RunSummary& summary);

struct Table1Row {
    double dt = 0.0;
    int iterations = 0;
    double initial_cost = 0.0;
    double final_cost = 0.0;
    double wall_seconds = 0.0;
};

/// The four (dt, k) double-tank configurations (0.01, 100), (0.01, 50),
/// (0.1, 100), (0.1, 50). `base` supplies the model parameters and Armijo
/// constants; dt and max_iters are overridden per row.
std::vector<Table1Row> table1(const RunManifest& base, bool parallel = false);

/// Default double-tank manifest: alpha = beta = 0.5, Euler, v = 2 initially.
RunManifest table1_default_manifest();

void write_table1(std::ostream& os, const std::vector<Table1Row>& rows);
void print_table1(std::ostream& os, const std::vector<Table1Row>& rows);

}  // namespace switchopt::cli

#endif  // SWITCHOPT_CLI_RUNNER_HPP
