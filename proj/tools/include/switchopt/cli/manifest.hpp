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

#ifndef SWITCHOPT_CLI_MANIFEST_HPP
#define SWITCHOPT_CLI_MANIFEST_HPP

#include "switchopt/builtin_models.hpp"
#include "switchopt/model.hpp"
#include "switchopt/solver.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace switchopt::cli {

/// Manifest syntax or schema error. `line()` is 0 when the error is not tied
/// to a line (e.g. a missing key).
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

struct ModelSelector {
    /// Builtin name, or "affine_quadratic".
    std::string name;
    ParameterMap overrides;
    std::optional<AffineQuadraticSpec> affine;
};

struct InitSpec {
    enum class Kind { OneHot, Uniform, Csv };
    Kind kind = Kind::OneHot;
    int mode = 0;  // 0-based
    std::vector<Vector> inputs;
    std::filesystem::path csv;
};

struct RunManifest {
    ModelSelector model;
    SolveConfig solve;
    InitSpec init;
    std::filesystem::path output_dir = "out";
    std::optional<double> pwm_cycle;
    bool write_costate = false;
    std::uint64_t seed = 0;
};

/// Parses a manifest. The format is a TOML subset: `[section]` headers,
/// `key = value` with numbers, booleans, "strings" and (nested) arrays;
/// `#` comments. Sections: [model], [model.params], [mode.<i>], [solve],
/// [init], [output]. Relative paths resolve against `base_dir`.
RunManifest parse_manifest_text(const std::string& text,
                                const std::filesystem::path& base_dir = std::filesystem::current_path());
RunManifest parse_manifest(const std::filesystem::path& path);

HybridModel build_model(const ModelSelector& selector);

/// Initial control on the grid implied by the model horizon and solve.dt.
EmbeddedControl build_initial_control(const InitSpec& init, const HybridModel& model, double dt);

}  // namespace switchopt::cli

#endif  // SWITCHOPT_CLI_MANIFEST_HPP
