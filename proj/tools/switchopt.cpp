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
#include "switchopt/cli/manifest.hpp"
#include "switchopt/cli/runner.hpp"
#include "switchopt/errors.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using namespace switchopt;
using namespace switchopt::cli;

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const StepFailure& e) {
        std::cerr << "step failure: " << e.what() << '\n';
        return kExitStepFailure;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"switchopt: descent solver for switched-mode optimal control"};
    app.require_subcommand(1);

    std::filesystem::path manifest_path;
    std::string out_override;
    auto* run_cmd = app.add_subcommand("run", "Solve the problem described by a manifest");
    run_cmd->add_option("manifest", manifest_path, "Manifest file")->required()->check(CLI::ExistingFile);
    run_cmd->add_option("-o,--out", out_override, "Output directory (overrides [output] dir)");

    std::filesystem::path table_manifest;
    std::filesystem::path table_csv;
    bool parallel = false;
    auto* table_cmd = app.add_subcommand("table1", "Double tank sweep over dt and iteration count");
    table_cmd->add_option("-m,--manifest", table_manifest, "Manifest with solver overrides")
        ->check(CLI::ExistingFile);
    table_cmd->add_option("-o,--out", table_csv, "CSV output path");
    table_cmd->add_flag("-p,--parallel", parallel, "Run the four configurations concurrently");

    auto* models_cmd = app.add_subcommand("models", "List builtin models and their parameters");

    CLI11_PARSE(app, argc, argv);

    if (run_cmd->parsed()) {
        return guarded([&] {
            RunManifest m = parse_manifest(manifest_path);
            if (!out_override.empty()) {
                m.output_dir = out_override;
            }
            return exit_code_for(run(m, std::cout));
        });
    }
    if (table_cmd->parsed()) {
        return guarded([&] {
            const RunManifest m = table_manifest.empty() ? table1_default_manifest() : parse_manifest(table_manifest);
            const auto rows = table1(m, parallel);
            print_table1(std::cout, rows);
            if (!table_csv.empty()) {
                std::ofstream os(table_csv, std::ios::binary);
                write_table1(os, rows);
                if (!os) {
                    throw std::ios_base::failure("cannot write '" + table_csv.string() + "'");
                }
            }
            return kExitOk;
        });
    }
    if (models_cmd->parsed()) {
        for (const auto& name : builtin_names()) {
            std::cout << name << '\n';
            for (const auto& [key, value] : builtin_parameters(name)) {
                std::cout << "  " << key << " = " << value << '\n';
            }
        }
    }
    return kExitOk;
}
