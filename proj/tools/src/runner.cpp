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

#include "switchopt/cli/runner.hpp"

#include "switchopt/csv_io.hpp"
#include "switchopt/errors.hpp"

#include <json.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <future>
#include <ostream>
#include <system_error>

namespace switchopt::cli {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) {
        throw std::ios_base::failure("cannot open '" + path.string() + "' for writing");
    }
    return os;
}

void check_written(std::ofstream& os, const std::filesystem::path& path) {
    os.flush();
    if (!os) {
        throw std::ios_base::failure("write to '" + path.string() + "' failed");
    }
}

template <typename Writer>
void write_file(const std::filesystem::path& path, Writer&& writer) {
    std::ofstream os = open_output(path);
    writer(os);
    check_written(os, path);
}

nlohmann::json to_json(const Vector& v) {
    nlohmann::json out = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(v[i]);
    }
    return out;
}

}  // namespace

RunSummary run(const RunManifest& manifest, std::ostream& log) {
    const HybridModel model = build_model(manifest.model);
    const EmbeddedControl w0 = build_initial_control(manifest.init, model, manifest.solve.dt);

    std::error_code ec;
    std::filesystem::create_directories(manifest.output_dir, ec);
    if (ec) {
        throw std::ios_base::failure("cannot create output directory '" + manifest.output_dir.string() +
                                     "': " + ec.message());
    }

    const SolveResult result = solve(model, w0, manifest.solve);

    RunSummary s;
    s.status = result.status;
    s.iterations = static_cast<int>(result.history.size());
    s.initial_cost = result.initial_cost;
    s.final_cost = result.final_cost;
    s.final_cost_excluding_penalty = result.final_breakdown.excluding_penalty();
    s.final_theta = result.final_theta;
    s.final_defect = shooting_defect(result.final_trajectory);
    s.final_state = result.final_trajectory.final_state();
    s.message = result.message;

    const auto& dir = manifest.output_dir;
    write_file(dir / "iterations.csv", [&](std::ostream& os) { write_iteration_log(os, result.history); });
    write_file(dir / "control.csv", [&](std::ostream& os) { write_control_csv(os, result.control); });
    write_file(dir / "trajectory.csv", [&](std::ostream& os) { write_trajectory_csv(os, result.final_trajectory); });

    if (manifest.write_costate) {
        const ShootingConfig* sh = result.shooting ? &*result.shooting : nullptr;
        const CostateTrajectory costate =
            integrate_costate(model, result.control, result.final_trajectory, sh);
        write_file(dir / "costate.csv", [&](std::ostream& os) { write_costate_csv(os, costate); });
    }

    if (manifest.pwm_cycle) {
        const OrdinaryControl pwm = pwm_project(result.control, *manifest.pwm_cycle);
        const EmbeddedControl pwm_w = to_embedded(pwm, model);
        const Trajectory traj = integrate_state(model, pwm_w, manifest.solve.integrator);
        const CostBreakdown cost = eval_cost_breakdown(model, pwm_w, traj);
        s.pwm_cost = cost.total();
        s.pwm_cost_excluding_penalty = cost.excluding_penalty();
        write_file(dir / "pwm.csv", [&](std::ostream& os) { write_pwm_csv(os, pwm, model); });
    }

    nlohmann::ordered_json js;
    js["model"] = model.name;
    js["status"] = to_string(s.status);
    js["iterations"] = s.iterations;
    js["initial_cost"] = s.initial_cost;
    js["final_cost"] = s.final_cost;
    js["final_cost_excluding_penalty"] = s.final_cost_excluding_penalty;
    js["final_theta"] = s.final_theta;
    js["final_state"] = to_json(s.final_state);
    js["seed"] = manifest.seed;
    if (result.shooting) {
        js["shooting_defect"] = s.final_defect;
    }
    if (s.pwm_cost) {
        js["pwm_cost"] = *s.pwm_cost;
        js["pwm_cost_excluding_penalty"] = *s.pwm_cost_excluding_penalty;
    }
    if (!s.message.empty()) {
        js["message"] = s.message;
    }
    write_file(dir / "summary.json", [&](std::ostream& os) { os << js.dump(2) << '\n'; });

    char line[256];
    std::snprintf(line, sizeof line, "status=%s iterations=%d J=%.10g theta=%.6g", to_string(s.status),
                  s.iterations, s.final_cost, s.final_theta);
    log << line << '\n';
    if (result.shooting) {
        std::snprintf(line, sizeof line, "J_excluding_penalty=%.10g shooting_defect=%.6g",
                      s.final_cost_excluding_penalty, s.final_defect);
        log << line << '\n';
    }
    if (s.pwm_cost) {
        std::snprintf(line, sizeof line, "pwm_J=%.10g pwm_J_excluding_penalty=%.10g", *s.pwm_cost,
                      *s.pwm_cost_excluding_penalty);
        log << line << '\n';
    }
    if (!s.message.empty()) {
        log << s.message << '\n';
    }
    return s;
}

int exit_code_for(const RunSummary& summary) {
    return summary.status == SolveStatus::StepFailure ? kExitStepFailure : kExitOk;
}

RunManifest table1_default_manifest() {
    RunManifest m;
    m.model.name = "double_tank";
    m.solve.armijo_alpha = 0.5;
    m.solve.armijo_beta = 0.5;
    m.solve.dt = 0.01;
    m.solve.max_iters = 100;
    m.init.kind = InitSpec::Kind::OneHot;
    m.init.mode = 1;
    return m;
}

std::vector<Table1Row> table1(const RunManifest& base, bool parallel) {
    if (base.model.affine || base.model.name != "double_tank") {
        throw InvalidArgument("table1 requires model = \"double_tank\"");
    }
    const std::pair<double, int> configs[] = {{0.01, 100}, {0.01, 50}, {0.1, 100}, {0.1, 50}};
    const HybridModel model = build_model(base.model);

    auto run_row = [&](double dt, int iters) {
        SolveConfig config = base.solve;
        config.dt = dt;
        config.max_iters = iters;
        const EmbeddedControl w0 = build_initial_control(base.init, model, dt);
        const auto start = std::chrono::steady_clock::now();
        const SolveResult r = solve(model, w0, config);
        const auto stop = std::chrono::steady_clock::now();
        if (r.status == SolveStatus::StepFailure) {
            throw StepFailure(r.message, r.final_theta, 0.0, 0.0);
        }
        Table1Row row;
        row.dt = dt;
        row.iterations = iters;
        row.initial_cost = r.initial_cost;
        row.final_cost = r.final_cost;
        row.wall_seconds = std::chrono::duration<double>(stop - start).count();
        return row;
    };

    std::vector<Table1Row> rows;
    if (parallel) {
        std::vector<std::future<Table1Row>> jobs;
        for (const auto& [dt, iters] : configs) {
            jobs.push_back(std::async(std::launch::async, run_row, dt, iters));
        }
        for (auto& job : jobs) {
            rows.push_back(job.get());
        }
    } else {
        for (const auto& [dt, iters] : configs) {
            rows.push_back(run_row(dt, iters));
        }
    }
    return rows;
}

void write_table1(std::ostream& os, const std::vector<Table1Row>& rows) {
    os << "dt,iterations,initial_cost,final_cost,wall_seconds\n";
    for (const auto& r : rows) {
        os << format_real(r.dt) << ',' << r.iterations << ',' << format_real(r.initial_cost) << ','
           << format_real(r.final_cost) << ',' << format_real(r.wall_seconds) << '\n';
    }
}

void print_table1(std::ostream& os, const std::vector<Table1Row>& rows) {
    char line[160];
    std::snprintf(line, sizeof line, "%8s %6s %14s %14s %10s\n", "dt", "k", "J(initial)", "J(final)", "time[s]");
    os << line;
    for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%8.3g %6d %14.6f %14.6f %10.3f\n", r.dt, r.iterations, r.initial_cost,
                      r.final_cost, r.wall_seconds);
        os << line;
    }
}

}  // namespace switchopt::cli
