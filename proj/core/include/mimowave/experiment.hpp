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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mimowave/mm.hpp"

namespace mimowave {

inline constexpr const char* kVersion = "0.3.0";

enum class ExperimentKind { EntropyVsEnergy, PdVsEnergy, PdVsNominalDoa, SingleDesign };

const char* to_string(ExperimentKind kind);
std::optional<ExperimentKind> parse_experiment_kind(std::string_view name);

struct ExperimentConfig {
    Scenario scenario = reference_scenario();
    ExperimentKind experiment = ExperimentKind::SingleDesign;
    std::vector<double> sweep;     // energies or nominal DOAs, by experiment
    double true_doa = 25.0;
    double p_fa = 1e-3;
    std::int64_t mc_trials = 100000;
    std::string output_path = "mimowave_out.csv";
    std::uint64_t seed = 0;
    MMConfig mm;

    /// Throws Error(ConfigError) on violated invariants.
    void validate() const;
};

/// Parses the JSON config document. Scenario fields default to the six-by-six
/// array setup; "seed" is mandatory unless `seed_override` is supplied.
ExperimentConfig parse_config(std::string_view json_text, std::optional<std::uint64_t> seed_override = std::nullopt);

/// Four transmitters, four receivers, L = 8, 2e4 Monte Carlo trials.
ExperimentConfig apply_desk_scale(ExperimentConfig config);

std::string config_to_json(const ExperimentConfig& config);

/// Per-sweep-point bookkeeping echoed into the run manifest.
struct PointRecord {
    std::size_t index = 0;
    double value = 0.0;
    bool ok = true;
    std::string error;
    bool robust_converged = false;
    int robust_iterations = 0;
};

struct ExperimentResult {
    std::string csv;
    std::vector<PointRecord> points;
    std::optional<ComplexMatrix> waveform; // single_design only
    double relative_entropy = 0.0;         // single_design only
    double snr = 0.0;                      // single_design only, at the nominal target

    bool all_ok() const;
};

/// Robust design for one energy budget; X0 drawn from substream (seed, point).
MMTrace design_robust(const ExperimentConfig& config, const Scenario& scenario, const TargetPrior& prior,
                      std::size_t point);

/// Closed-form design from the nominal response of `scenario`.
ComplexMatrix design_nominal(const Scenario& scenario);

struct PdEstimate {
    double pd = 0.0;
    Threshold threshold;
};

/// Calibrates at config.p_fa on substream (seed, point, 2) and estimates Pd
/// against the fixed response h_true on substream (seed, point, 3).
PdEstimate evaluate_pd(const ExperimentConfig& config, const ComplexMatrix& x, const TargetPrior& prior,
                       const ComplexVector& h_true, std::size_t point);

ExperimentResult run_entropy_vs_energy(const ExperimentConfig& config);
ExperimentResult run_pd_vs_energy(const ExperimentConfig& config);
ExperimentResult run_pd_vs_nominal_doa(const ExperimentConfig& config);
ExperimentResult run_single_design(const ExperimentConfig& config);
ExperimentResult run_experiment(const ExperimentConfig& config);

std::string manifest_json(const ExperimentConfig& config, const ExperimentResult& result, double wall_seconds);

/// {"rows": R, "cols": C, "data": [re, im, ...]} in column-major order.
std::string waveform_to_json(const ComplexMatrix& x);
ComplexMatrix waveform_from_json(std::string_view json_text);

/// "%.17g"; nan/inf spelled out.
std::string format_double(double v);

} // namespace mimowave
