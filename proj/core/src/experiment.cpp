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

#include "mimowave/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "json.hpp"

namespace mimowave {

using nlohmann::json;

namespace {

enum Purpose : std::uint64_t { kInit = 1, kThreshold = 2, kDetection = 3 };

[[noreturn]] void config_error(const std::string& what) {
    throw Error(ErrorCode::ConfigError, what);
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) config_error(where + " must be a JSON object");
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key)) config_error("unknown key '" + key + "' in " + where);
}

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        config_error(std::string("bad value for '") + key + "': " + e.what());
    }
}

ArrayGeometry parse_array(const json& obj, ArrayGeometry fallback, const std::string& where) {
    check_keys(obj, {"n_elements", "spacing_wavelengths"}, where);
    fallback.n_elements = get_or(obj, "n_elements", fallback.n_elements);
    fallback.spacing_wavelengths = get_or(obj, "spacing_wavelengths", fallback.spacing_wavelengths);
    return fallback;
}

Complex parse_complex(const json& v) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_object()) {
        check_keys(v, {"re", "im"}, "nominal_amplitude");
        return {get_or(v, "re", 0.0), get_or(v, "im", 0.0)};
    }
    config_error("nominal_amplitude must be a number or {\"re\", \"im\"}");
}

Scenario parse_scenario(const json& obj) {
    check_keys(obj,
               {"tx", "rx", "code_length", "noise_power", "energy_budget", "nominal_doa", "nominal_amplitude",
                "uncertainty_angles", "uncertainty_grid", "uncertainty_power"},
               "scenario");
    Scenario s = reference_scenario();
    if (obj.contains("tx")) s.tx = parse_array(obj["tx"], s.tx, "scenario.tx");
    if (obj.contains("rx")) s.rx = parse_array(obj["rx"], s.rx, "scenario.rx");
    s.code_length = get_or(obj, "code_length", s.code_length);
    s.noise_power = get_or(obj, "noise_power", s.noise_power);
    s.energy_budget = get_or(obj, "energy_budget", s.energy_budget);
    s.nominal_doa = get_or(obj, "nominal_doa", s.nominal_doa);
    if (obj.contains("nominal_amplitude")) s.nominal_amplitude = parse_complex(obj["nominal_amplitude"]);
    s.uncertainty_power = get_or(obj, "uncertainty_power", s.uncertainty_power);
    if (obj.contains("uncertainty_angles") && obj.contains("uncertainty_grid"))
        config_error("give either scenario.uncertainty_angles or scenario.uncertainty_grid, not both");
    if (obj.contains("uncertainty_angles")) s.uncertainty_angles = get_or(obj, "uncertainty_angles", std::vector<double>{});
    if (obj.contains("uncertainty_grid")) {
        const json& g = obj["uncertainty_grid"];
        check_keys(g, {"start", "stop", "step"}, "scenario.uncertainty_grid");
        try {
            s.uncertainty_angles = uniform_grid(get_or(g, "start", -60.0), get_or(g, "stop", 56.0), get_or(g, "step", 4.0));
        } catch (const Error& e) {
            config_error(e.what());
        }
    }
    return s;
}

json scenario_json(const Scenario& s) {
    return {
        {"tx", {{"n_elements", s.tx.n_elements}, {"spacing_wavelengths", s.tx.spacing_wavelengths}}},
        {"rx", {{"n_elements", s.rx.n_elements}, {"spacing_wavelengths", s.rx.spacing_wavelengths}}},
        {"code_length", s.code_length},
        {"noise_power", s.noise_power},
        {"energy_budget", s.energy_budget},
        {"nominal_doa", s.nominal_doa},
        {"nominal_amplitude", {{"re", s.nominal_amplitude.real()}, {"im", s.nominal_amplitude.imag()}}},
        {"uncertainty_angles", s.uncertainty_angles},
        {"uncertainty_power", s.uncertainty_power},
    };
}

class CsvWriter {
public:
    explicit CsvWriter(const std::vector<std::string>& header) { row_strings(header); }

    void row(const std::vector<double>& values, bool ok) {
        std::vector<std::string> cells;
        cells.reserve(values.size() + 1);
        for (double v : values) cells.push_back(format_double(v));
        cells.emplace_back(ok ? "ok" : "error");
        row_strings(cells);
    }

    void row_plain(const std::vector<double>& values) {
        std::vector<std::string> cells;
        for (double v : values) cells.push_back(format_double(v));
        row_strings(cells);
    }

    std::string str() const { return out_.str(); }

private:
    void row_strings(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << cells[i];
        }
        out_ << '\n';
    }

    std::ostringstream out_;
};

Scenario with_energy(Scenario s, double energy) {
    s.energy_budget = energy;
    return s;
}

} // namespace

const char* to_string(ExperimentKind kind) {
    switch (kind) {
    case ExperimentKind::EntropyVsEnergy: return "entropy_vs_energy";
    case ExperimentKind::PdVsEnergy: return "pd_vs_energy";
    case ExperimentKind::PdVsNominalDoa: return "pd_vs_nominal_doa";
    case ExperimentKind::SingleDesign: return "single_design";
    }
    return "unknown";
}

std::optional<ExperimentKind> parse_experiment_kind(std::string_view name) {
    for (auto k : {ExperimentKind::EntropyVsEnergy, ExperimentKind::PdVsEnergy, ExperimentKind::PdVsNominalDoa,
                   ExperimentKind::SingleDesign})
        if (name == to_string(k)) return k;
    return std::nullopt;
}

void ExperimentConfig::validate() const {
    try {
        scenario.validate();
        mm.validate();
    } catch (const Error& e) {
        config_error(e.what());
    }
    if (scenario.uncertainty_angles.empty()) config_error("scenario: uncertainty grid is empty");
    if (scenario.code_length < scenario.n_t()) config_error("scenario: code length must be >= N_T for random init");
    if (experiment != ExperimentKind::SingleDesign && sweep.empty()) config_error("sweep must be nonempty");
    if (!(p_fa > 0.0 && p_fa <= 0.5)) config_error("p_fa must lie in (0, 0.5]");
    if (static_cast<double>(mc_trials) * p_fa < 10.0 - 1e-9) config_error("mc_trials must be >= 10 / p_fa");
    if (!(true_doa >= -90.0 && true_doa <= 90.0)) config_error("true_doa outside [-90, 90]");
    if (output_path.empty()) config_error("output_path must be nonempty");
    for (double v : sweep) {
        if (!std::isfinite(v)) config_error("sweep values must be finite");
        if ((experiment == ExperimentKind::EntropyVsEnergy || experiment == ExperimentKind::PdVsEnergy) && !(v > 0.0))
            config_error("energy sweep values must be positive");
        if (experiment == ExperimentKind::PdVsNominalDoa && (v < -90.0 || v > 90.0))
            config_error("nominal DOA sweep values must lie in [-90, 90]");
    }
}

ExperimentConfig parse_config(std::string_view json_text, std::optional<std::uint64_t> seed_override) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        config_error(std::string("invalid JSON: ") + e.what());
    }
    check_keys(doc,
               {"experiment", "seed", "scenario", "sweep", "true_doa", "p_fa", "mc_trials", "output_path", "mm"},
               "config");

    ExperimentConfig cfg;
    const std::string kind = get_or<std::string>(doc, "experiment", "single_design");
    const auto parsed_kind = parse_experiment_kind(kind);
    if (!parsed_kind) config_error("unknown experiment '" + kind + "'");
    cfg.experiment = *parsed_kind;

    if (seed_override) {
        cfg.seed = *seed_override;
    } else if (doc.contains("seed")) {
        cfg.seed = get_or<std::uint64_t>(doc, "seed", 0);
    } else {
        config_error("seed is mandatory");
    }

    if (doc.contains("scenario")) cfg.scenario = parse_scenario(doc["scenario"]);
    cfg.sweep = get_or(doc, "sweep", std::vector<double>{});
    cfg.true_doa = get_or(doc, "true_doa", cfg.true_doa);
    cfg.p_fa = get_or(doc, "p_fa", cfg.p_fa);
    cfg.mc_trials = get_or(doc, "mc_trials", cfg.mc_trials);
    cfg.output_path = get_or(doc, "output_path", cfg.output_path);
    if (doc.contains("mm")) {
        const json& mm = doc["mm"];
        check_keys(mm, {"epsilon", "max_iterations", "trs_tolerance"}, "mm");
        cfg.mm.epsilon = get_or(mm, "epsilon", cfg.mm.epsilon);
        cfg.mm.max_iterations = get_or(mm, "max_iterations", cfg.mm.max_iterations);
        cfg.mm.trs_tolerance = get_or(mm, "trs_tolerance", cfg.mm.trs_tolerance);
    }
    cfg.scenario.seed = cfg.seed;
    cfg.mm.sigma2 = cfg.scenario.noise_power;
    cfg.validate();
    return cfg;
}

ExperimentConfig apply_desk_scale(ExperimentConfig config) {
    config.scenario = desk_scale(config.scenario);
    config.mc_trials = 20000;
    config.validate();
    return config;
}

std::string config_to_json(const ExperimentConfig& c) {
    json j = {
        {"experiment", to_string(c.experiment)},
        {"seed", c.seed},
        {"scenario", scenario_json(c.scenario)},
        {"sweep", c.sweep},
        {"true_doa", c.true_doa},
        {"p_fa", c.p_fa},
        {"mc_trials", c.mc_trials},
        {"output_path", c.output_path},
        {"mm", {{"epsilon", c.mm.epsilon}, {"max_iterations", c.mm.max_iterations}, {"trs_tolerance", c.mm.trs_tolerance}}},
    };
    return j.dump(2);
}

bool ExperimentResult::all_ok() const {
    for (const auto& p : points)
        if (!p.ok) return false;
    return true;
}

MMTrace design_robust(const ExperimentConfig& config, const Scenario& scenario, const TargetPrior& prior,
                      std::size_t point) {
    Rng rng = make_stream(config.seed, point, kInit);
    const ComplexMatrix x0 = random_init(scenario, rng);
    MMConfig mm = config.mm;
    mm.sigma2 = scenario.noise_power;
    return optimize(scenario, prior, mm, x0);
}

ComplexMatrix design_nominal(const Scenario& scenario) {
    const ComplexMatrix h_d = response_matrix({{scenario.nominal_amplitude, scenario.nominal_doa}}, scenario);
    return nominal_design(h_d, scenario.energy_budget, scenario.code_length);
}

PdEstimate evaluate_pd(const ExperimentConfig& config, const ComplexMatrix& x, const TargetPrior& prior,
                       const ComplexVector& h_true, std::size_t point) {
    const DetectorSpec spec(x, prior, config.scenario.noise_power);
    // Both designs at a point share the threshold and detection substreams.
    Rng threshold_rng = make_stream(config.seed, point, kThreshold);
    PdEstimate out;
    out.threshold = calibrate_threshold(spec, config.p_fa, config.mc_trials, threshold_rng);
    Rng detect_rng = make_stream(config.seed, point, kDetection);
    out.pd = detection_probability(spec.with_threshold(out.threshold), h_true, config.mc_trials, detect_rng);
    return out;
}

ExperimentResult run_entropy_vs_energy(const ExperimentConfig& config) {
    config.validate();
    const TargetPrior prior = build_prior(config.scenario);
    const double sigma2 = config.scenario.noise_power;
    CsvWriter csv({"energy", "d_robust", "d_nominal", "status"});
    ExperimentResult result;
    for (std::size_t i = 0; i < config.sweep.size(); ++i) {
        PointRecord rec;
        rec.index = i;
        rec.value = config.sweep[i];
        double d_robust = std::nan(""), d_nominal = std::nan("");
        try {
            const Scenario s = with_energy(config.scenario, config.sweep[i]);
            const MMTrace trace = design_robust(config, s, prior, i);
            rec.robust_converged = trace.converged;
            rec.robust_iterations = trace.iterations_used;
            d_robust = relative_entropy(trace.final().waveform, prior, sigma2);
            d_nominal = relative_entropy(design_nominal(s), prior, sigma2);
        } catch (const std::exception& e) {
            rec.ok = false;
            rec.error = e.what();
        }
        csv.row({config.sweep[i], d_robust, d_nominal}, rec.ok);
        result.points.push_back(std::move(rec));
    }
    result.csv = csv.str();
    return result;
}

ExperimentResult run_pd_vs_energy(const ExperimentConfig& config) {
    config.validate();
    const TargetPrior prior = build_prior(config.scenario);
    const ComplexVector h_true = response_vector({config.scenario.nominal_amplitude, config.true_doa}, config.scenario);
    CsvWriter csv({"energy", "pd_robust", "pd_nominal", "gamma_robust", "gamma_nominal", "status"});
    ExperimentResult result;
    for (std::size_t i = 0; i < config.sweep.size(); ++i) {
        PointRecord rec;
        rec.index = i;
        rec.value = config.sweep[i];
        PdEstimate robust{std::nan(""), {std::nan(""), 0.0}};
        PdEstimate nominal = robust;
        try {
            const Scenario s = with_energy(config.scenario, config.sweep[i]);
            const MMTrace trace = design_robust(config, s, prior, i);
            rec.robust_converged = trace.converged;
            rec.robust_iterations = trace.iterations_used;
            robust = evaluate_pd(config, trace.final().waveform, prior, h_true, i);
            nominal = evaluate_pd(config, design_nominal(s), prior, h_true, i);
        } catch (const std::exception& e) {
            rec.ok = false;
            rec.error = e.what();
        }
        csv.row({config.sweep[i], robust.pd, nominal.pd, robust.threshold.gamma, nominal.threshold.gamma}, rec.ok);
        result.points.push_back(std::move(rec));
    }
    result.csv = csv.str();
    return result;
}

ExperimentResult run_pd_vs_nominal_doa(const ExperimentConfig& config) {
    config.validate();
    const ComplexVector h_true = response_vector({config.scenario.nominal_amplitude, config.true_doa}, config.scenario);
    CsvWriter csv({"nominal_doa", "mismatch", "pd_robust", "pd_nominal", "status"});
    ExperimentResult result;
    for (std::size_t i = 0; i < config.sweep.size(); ++i) {
        PointRecord rec;
        rec.index = i;
        rec.value = config.sweep[i];
        const double mismatch = std::abs(config.sweep[i] - config.true_doa);
        double pd_robust = std::nan(""), pd_nominal = std::nan("");
        try {
            Scenario s = config.scenario;
            s.nominal_doa = config.sweep[i];
            const TargetPrior prior = build_prior(s);
            const MMTrace trace = design_robust(config, s, prior, i);
            rec.robust_converged = trace.converged;
            rec.robust_iterations = trace.iterations_used;
            pd_robust = evaluate_pd(config, trace.final().waveform, prior, h_true, i).pd;
            pd_nominal = evaluate_pd(config, design_nominal(s), prior, h_true, i).pd;
        } catch (const std::exception& e) {
            rec.ok = false;
            rec.error = e.what();
        }
        csv.row({config.sweep[i], mismatch, pd_robust, pd_nominal}, rec.ok);
        result.points.push_back(std::move(rec));
    }
    result.csv = csv.str();
    return result;
}

ExperimentResult run_single_design(const ExperimentConfig& config) {
    config.validate();
    ExperimentResult result;
    PointRecord rec;
    rec.value = config.scenario.energy_budget;
    CsvWriter csv({"iteration", "objective", "multiplier", "energy"});
    try {
        const TargetPrior prior = build_prior(config.scenario);
        const MMTrace trace = design_robust(config, config.scenario, prior, 0);
        rec.robust_converged = trace.converged;
        rec.robust_iterations = trace.iterations_used;
        for (std::size_t k = 0; k < trace.iterates.size(); ++k) {
            const auto& it = trace.iterates[k];
            csv.row_plain({static_cast<double>(k), it.objective, it.multiplier, it.energy});
        }
        const ComplexMatrix& x = trace.final().waveform;
        result.waveform = x;
        result.relative_entropy = relative_entropy(x, prior, config.scenario.noise_power);
        const ComplexMatrix h_d =
            response_matrix({{config.scenario.nominal_amplitude, config.scenario.nominal_doa}}, config.scenario);
        result.snr = snr(x, h_d, config.scenario.noise_power);
    } catch (const std::exception& e) {
        rec.ok = false;
        rec.error = e.what();
    }
    result.points.push_back(std::move(rec));
    result.csv = csv.str();
    return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    switch (config.experiment) {
    case ExperimentKind::EntropyVsEnergy: return run_entropy_vs_energy(config);
    case ExperimentKind::PdVsEnergy: return run_pd_vs_energy(config);
    case ExperimentKind::PdVsNominalDoa: return run_pd_vs_nominal_doa(config);
    case ExperimentKind::SingleDesign: return run_single_design(config);
    }
    config_error("unknown experiment");
}

std::string manifest_json(const ExperimentConfig& config, const ExperimentResult& result, double wall_seconds) {
    json points = json::array();
    for (const auto& p : result.points) {
        points.push_back({{"index", p.index},
                          {"value", p.value},
                          {"status", p.ok ? "ok" : "error"},
                          {"error", p.error},
                          {"robust_converged", p.robust_converged},
                          {"robust_iterations", p.robust_iterations}});
    }
    json j = {
        {"tool", "mimowave"},
        {"version", kVersion},
        {"experiment", to_string(config.experiment)},
        {"seed", config.seed},
        {"config", json::parse(config_to_json(config))},
        {"wall_clock_seconds", wall_seconds},
        {"points", points},
    };
    if (result.waveform) {
        j["relative_entropy"] = result.relative_entropy;
        j["snr_nominal"] = result.snr;
    }
    return j.dump(2) + "\n";
}

std::string waveform_to_json(const ComplexMatrix& x) {
    json data = json::array();
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
        for (Eigen::Index i = 0; i < x.rows(); ++i) {
            data.push_back(x(i, j).real());
            data.push_back(x(i, j).imag());
        }
    }
    json doc = {{"rows", x.rows()}, {"cols", x.cols()}, {"data", data}};
    return doc.dump() + "\n";
}

ComplexMatrix waveform_from_json(std::string_view json_text) {
    try {
        const json doc = json::parse(json_text);
        const auto rows = doc.at("rows").get<Eigen::Index>();
        const auto cols = doc.at("cols").get<Eigen::Index>();
        const auto data = doc.at("data").get<std::vector<double>>();
        if (rows < 1 || cols < 1 || static_cast<Eigen::Index>(data.size()) != 2 * rows * cols)
            config_error("waveform file: data length must be 2 * rows * cols");
        ComplexMatrix x(rows, cols);
        std::size_t k = 0;
        for (Eigen::Index j = 0; j < cols; ++j)
            for (Eigen::Index i = 0; i < rows; ++i, k += 2) x(i, j) = Complex(data[k], data[k + 1]);
        return x;
    } catch (const json::exception& e) {
        config_error(std::string("waveform file: ") + e.what());
    }
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace mimowave
