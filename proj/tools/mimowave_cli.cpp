// SPDX-License-Identifier: Apache-2.0
//
// mimowave: robust MIMO radar waveform design under target uncertainty
// Copyright (C) 2026 The mimowave authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "mimowave/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitPartial = 2;

struct Options {
    std::string config_path;
    bool desk_scale = false;
    std::optional<std::uint64_t> seed;
    std::string out;
};

void add_common_options(CLI::App* cmd, Options& opts) {
    cmd->add_option("config", opts.config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
    cmd->add_flag("--desk-scale", opts.desk_scale, "Shrink to 4x4 arrays, L = 8 and 2e4 Monte Carlo trials");
    cmd->add_option("--seed", opts.seed, "Override the config seed");
    cmd->add_option("--out", opts.out, "Output CSV path (overrides output_path)");
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw mimowave::Error(mimowave::ErrorCode::ConfigError, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw mimowave::Error(mimowave::ErrorCode::ConfigError, "cannot write " + path);
    out << contents;
}

int run(const Options& opts, bool design) {
    using namespace mimowave;
    ExperimentConfig cfg;
    try {
        cfg = parse_config(read_file(opts.config_path), opts.seed);
        if (opts.desk_scale) cfg = apply_desk_scale(cfg);
        if (!opts.out.empty()) cfg.output_path = opts.out;
        if (design) {
            cfg.experiment = ExperimentKind::SingleDesign;
        } else if (cfg.experiment == ExperimentKind::SingleDesign) {
            throw Error(ErrorCode::ConfigError, "sweep needs a sweep experiment; use `design` for single_design");
        }
        cfg.validate();
    } catch (const std::exception& e) {
        std::cerr << "mimowave: " << e.what() << '\n';
        return kExitConfig;
    }

    const auto start = std::chrono::steady_clock::now();
    const ExperimentResult result = run_experiment(cfg);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    try {
        write_file(cfg.output_path, result.csv);
        write_file(cfg.output_path + ".manifest.json", manifest_json(cfg, result, wall));
        if (result.waveform) write_file(cfg.output_path + ".waveform.json", waveform_to_json(*result.waveform));
    } catch (const std::exception& e) {
        std::cerr << "mimowave: " << e.what() << '\n';
        return kExitConfig;
    }

    std::size_t failed = 0;
    for (const auto& p : result.points) {
        if (!p.ok) {
            ++failed;
            std::cerr << "mimowave: point " << p.index << " (" << p.value << ") failed: " << p.error << '\n';
        }
    }
    std::cout << to_string(cfg.experiment) << ": " << result.points.size() - failed << "/" << result.points.size()
              << " points ok, wrote " << cfg.output_path << '\n';
    return failed == 0 ? kExitOk : kExitPartial;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Robust MIMO radar waveform design and detection experiments"};
    app.set_version_flag("--version", std::string(mimowave::kVersion));
    app.require_subcommand(1);

    Options design_opts;
    Options sweep_opts;
    CLI::App* design = app.add_subcommand("design", "Optimize one waveform and write its trace and waveform file");
    CLI::App* sweep = app.add_subcommand("sweep", "Run the sweep experiment named in the config");
    add_common_options(design, design_opts);
    add_common_options(sweep, sweep_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    if (design->parsed()) return run(design_opts, true);
    return run(sweep_opts, false);
}
