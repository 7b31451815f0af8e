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

#include "switchopt/csv_io.hpp"

#include "switchopt/errors.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace switchopt {

std::string format_real(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) {
        out.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

double parse_real(const std::string& cell, int line) {
    const char* begin = cell.c_str();
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || errno == ERANGE) {
        throw InvalidArgument("control CSV line " + std::to_string(line) + ": not a number: '" + cell + "'");
    }
    return v;
}

std::string strip_cr(std::string s) {
    if (!s.empty() && s.back() == '\r') {
        s.pop_back();
    }
    return s;
}

}  // namespace

void write_control_csv(std::ostream& os, const EmbeddedControl& w) {
    const int m = w.num_modes();
    os << "t";
    for (int i = 1; i <= m; ++i) {
        os << ",alpha_" << i;
    }
    for (int i = 0; i < m; ++i) {
        for (Eigen::Index k = 0; k < w.node(0).inputs[static_cast<std::size_t>(i)].size(); ++k) {
            os << ",u_" << i + 1 << "_" << k + 1;
        }
    }
    os << "\n";
    for (int j = 0; j < w.num_nodes(); ++j) {
        const ControlNode& node = w.node(j);
        os << format_real(w.grid().time(j));
        for (int i = 0; i < m; ++i) {
            os << "," << format_real(node.weights[i]);
        }
        for (const Vector& u : node.inputs) {
            for (Eigen::Index k = 0; k < u.size(); ++k) {
                os << "," << format_real(u[k]);
            }
        }
        os << "\n";
    }
}

EmbeddedControl read_control_csv(std::istream& is, const HybridModel& model) {
    std::string line;
    if (!std::getline(is, line)) {
        throw InvalidArgument("control CSV: empty input");
    }
    const auto header = split(strip_cr(line));
    const int m = model.num_modes();
    std::size_t expected = 1 + static_cast<std::size_t>(m);
    for (const ModeSpec& mode : model.modes) {
        expected += static_cast<std::size_t>(mode.control_dim);
    }
    if (header.size() != expected || header.front() != "t") {
        throw InvalidArgument("control CSV: header has " + std::to_string(header.size()) +
                              " columns, model needs " + std::to_string(expected));
    }

    std::vector<double> times;
    std::vector<ControlNode> nodes;
    int line_no = 1;
    while (std::getline(is, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) {
            continue;
        }
        const auto cells = split(line);
        if (cells.size() != expected) {
            throw InvalidArgument("control CSV line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(expected) + " columns");
        }
        times.push_back(parse_real(cells[0], line_no));
        ControlNode node;
        node.weights.resize(m);
        std::size_t c = 1;
        for (int i = 0; i < m; ++i) {
            node.weights[i] = parse_real(cells[c++], line_no);
        }
        for (const ModeSpec& mode : model.modes) {
            Vector u(mode.control_dim);
            for (int k = 0; k < mode.control_dim; ++k) {
                u[k] = parse_real(cells[c++], line_no);
            }
            node.inputs.push_back(std::move(u));
        }
        nodes.push_back(std::move(node));
    }
    if (nodes.size() < 2) {
        throw InvalidArgument("control CSV: need at least two grid nodes");
    }
    const TimeGrid grid = TimeGrid::with_steps(times.back(), static_cast<int>(nodes.size()) - 1);
    for (int j = 0; j < grid.num_nodes(); ++j) {
        if (std::abs(times[static_cast<std::size_t>(j)] - grid.time(j)) > 1e-9 * std::max(1.0, grid.t_f())) {
            throw InvalidArgument("control CSV: time column is not a uniform grid starting at 0 (row " +
                                  std::to_string(j + 2) + ")");
        }
    }
    return EmbeddedControl(grid, std::move(nodes));
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << "t";
    for (Eigen::Index k = 0; k < traj.states.front().size(); ++k) {
        os << ",x_" << k + 1;
    }
    os << "\n";
    for (int j = 0; j < traj.grid.num_nodes(); ++j) {
        os << format_real(traj.grid.time(j));
        const Vector& x = traj.states[static_cast<std::size_t>(j)];
        for (Eigen::Index k = 0; k < x.size(); ++k) {
            os << "," << format_real(x[k]);
        }
        os << "\n";
    }
}

void write_costate_csv(std::ostream& os, const CostateTrajectory& costate) {
    os << "t";
    for (Eigen::Index k = 0; k < costate.costates.front().size(); ++k) {
        os << ",p_" << k + 1;
    }
    os << "\n";
    for (int j = 0; j < costate.grid.num_nodes(); ++j) {
        os << format_real(costate.grid.time(j));
        const Vector& p = costate.costates[static_cast<std::size_t>(j)];
        for (Eigen::Index k = 0; k < p.size(); ++k) {
            os << "," << format_real(p[k]);
        }
        os << "\n";
    }
}

void write_pwm_csv(std::ostream& os, const OrdinaryControl& u, const HybridModel& model) {
    int k_max = 0;
    for (const ModeSpec& mode : model.modes) {
        k_max = std::max(k_max, mode.control_dim);
    }
    os << "t,mode";
    for (int k = 1; k <= k_max; ++k) {
        os << ",u_" << k;
    }
    os << "\n";
    for (int j = 0; j < u.num_nodes(); ++j) {
        const auto jj = static_cast<std::size_t>(j);
        os << format_real(u.grid.time(j)) << "," << u.modes[jj] + 1;
        for (int k = 0; k < k_max; ++k) {
            os << ",";
            if (k < u.inputs[jj].size()) {
                os << format_real(u.inputs[jj][k]);
            }
        }
        os << "\n";
    }
}

void write_iteration_log(std::ostream& os, std::span<const IterationRecord> history) {
    os << "iter,J,theta,lambda,backtracks,wall_ms\n";
    for (const IterationRecord& r : history) {
        os << r.iter << "," << format_real(r.cost) << "," << format_real(r.theta) << ","
           << format_real(r.lambda) << "," << r.backtracks << "," << format_real(r.wall_ms) << "\n";
    }
}

}  // namespace switchopt
