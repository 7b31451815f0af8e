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

#ifndef SWITCHOPT_ERRORS_HPP
#define SWITCHOPT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace switchopt {

/// Bad dimensions, out-of-range indices, mismatched grids.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Lookup of an unknown builtin model or parameter table entry.
class NotFound : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Requested operation is not available for this model structure.
class Unsupported : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The model cannot be used by the solver as configured (e.g. no Hamiltonian minimizer).
class ConfigurationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A state or costate became non-finite during integration.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(const std::string& what, int node)
        : std::runtime_error(what + " (first non-finite node " + std::to_string(node) + ")"),
          node_(node) {}

    int node() const noexcept { return node_; }

private:
    int node_;
};

/// Armijo search exhausted its backtracking budget.
class StepFailure : public std::runtime_error {
public:
    StepFailure(const std::string& what, double theta, double last_lambda, double last_gap)
        : std::runtime_error(what), theta_(theta), last_lambda_(last_lambda), last_gap_(last_gap) {}

    double theta() const noexcept { return theta_; }
    double last_lambda() const noexcept { return last_lambda_; }
    /// J(combination) - J(w) - alpha*lambda*theta at the last tried lambda.
    double last_gap() const noexcept { return last_gap_; }

private:
    double theta_;
    double last_lambda_;
    double last_gap_;
};

}  // namespace switchopt

#endif  // SWITCHOPT_ERRORS_HPP
