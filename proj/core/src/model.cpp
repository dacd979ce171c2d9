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

#include "mimowave/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mimowave {

namespace {

bool angle_in_range(double deg) {
    return std::isfinite(deg) && deg >= -90.0 && deg <= 90.0;
}

void require(bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::InvalidArgument, what);
}

} // namespace

Rng make_stream(std::uint64_t seed, std::uint64_t stream, std::uint64_t purpose) {
    std::seed_seq seq{
        static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
        static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
        static_cast<std::uint32_t>(purpose), static_cast<std::uint32_t>(purpose >> 32)};
    return Rng(seq);
}

void Scenario::validate() const {
    require(tx.n_elements >= 1 && rx.n_elements >= 1, "scenario: arrays need at least one element");
    require(tx.spacing_wavelengths > 0.0 && rx.spacing_wavelengths > 0.0,
            "scenario: element spacing must be positive");
    require(code_length >= 1, "scenario: code length must be >= 1");
    require(noise_power > 0.0, "scenario: noise power must be positive");
    require(energy_budget > 0.0, "scenario: energy budget must be positive");
    require(uncertainty_power >= 0.0, "scenario: uncertainty power must be nonnegative");
    require(angle_in_range(nominal_doa), "scenario: nominal DOA outside [-90, 90]");
    for (double a : uncertainty_angles) require(angle_in_range(a), "scenario: grid angle outside [-90, 90]");
}

std::vector<double> uniform_grid(double start, double stop, double step) {
    require(step > 0.0 && stop >= start, "uniform_grid: need step > 0 and stop >= start");
    std::vector<double> out;
    for (int k = 0;; ++k) {
        const double v = start + k * step;
        if (v > stop + 1e-9 * step) break;
        out.push_back(v);
    }
    return out;
}

Scenario reference_scenario() {
    Scenario s;
    s.uncertainty_angles = uniform_grid(-60.0, 56.0, 4.0);
    return s;
}

Scenario desk_scale(Scenario s) {
    s.tx.n_elements = 4;
    s.rx.n_elements = 4;
    s.code_length = 8;
    return s;
}

TargetPrior::TargetPrior(ComplexVector h_d, ComplexMatrix r_h, int n_t, int n_r)
    : h_d_(std::move(h_d)), r_h_(std::move(r_h)), n_t_(n_t), n_r_(n_r) {
    const Eigen::Index n = static_cast<Eigen::Index>(n_t) * n_r;
    if (n_t < 1 || n_r < 1 || h_d_.size() != n || r_h_.rows() != n || r_h_.cols() != n)
        throw Error(ErrorCode::DimensionMismatch, "TargetPrior: h_d/R_H sizes must equal n_t*n_r");
    if (hermitian_residual(r_h_) > 1e-10 * std::max(1.0, r_h_.norm()))
        throw Error(ErrorCode::NonHermitian, "TargetPrior: R_H is not Hermitian");
    r_h_ = 0.5 * (r_h_ + r_h_.adjoint()).eval();
    r_h_sqrt_ = r_h_.isZero(0.0) ? ComplexMatrix::Zero(n, n).eval() : psd_sqrt(r_h_);
}

ComplexVector steering(const ArrayGeometry& geom, double theta_deg) {
    const double phase_step =
        2.0 * std::numbers::pi * geom.spacing_wavelengths * std::sin(theta_deg * std::numbers::pi / 180.0);
    ComplexVector a(geom.n_elements);
    for (int m = 0; m < geom.n_elements; ++m) a(m) = std::polar(1.0, phase_step * m);
    return a;
}

ComplexMatrix response_matrix(const std::vector<PointTarget>& targets, const Scenario& scenario) {
    require(!targets.empty(), "response_matrix: empty target list");
    ComplexMatrix h = ComplexMatrix::Zero(scenario.n_t(), scenario.n_r());
    for (const auto& t : targets)
        h += t.amplitude * steering(scenario.tx, t.doa_deg) * steering(scenario.rx, t.doa_deg).transpose();
    return h;
}

ComplexVector response_vector(const PointTarget& target, const Scenario& scenario) {
    const ComplexVector a = steering(scenario.tx, target.doa_deg);
    const ComplexVector b = steering(scenario.rx, target.doa_deg);
    return target.amplitude * kron(b, a);
}

TargetPrior build_prior(const Scenario& scenario) {
    scenario.validate();
    require(!scenario.uncertainty_angles.empty(), "build_prior: uncertainty grid is empty");
    const int n = scenario.n_t() * scenario.n_r();

    ComplexVector h_d = response_vector({scenario.nominal_amplitude, scenario.nominal_doa}, scenario);

    ComplexMatrix r_h = ComplexMatrix::Zero(n, n);
    for (double theta : scenario.uncertainty_angles) {
        // (b b^H) (x) (a a^H) = (b (x) a)(b (x) a)^H
        const ComplexVector ba = kron(steering(scenario.rx, theta), steering(scenario.tx, theta));
        r_h.noalias() += scenario.uncertainty_power * (ba * ba.adjoint());
    }
    return TargetPrior(std::move(h_d), std::move(r_h), scenario.n_t(), scenario.n_r());
}

double snr(const ComplexMatrix& x, const ComplexMatrix& h, double noise_power) {
    if (x.cols() != h.rows()) throw Error(ErrorCode::DimensionMismatch, "snr: X and H not conformable");
    const ComplexMatrix xh = x * h;
    return xh.squaredNorm() / (static_cast<double>(x.rows()) * h.cols() * noise_power);
}

ComplexVector sample_noise(Eigen::Index dim, double noise_power, Rng& rng) {
    require(dim >= 1, "sample_noise: dim must be >= 1");
    require(noise_power >= 0.0, "sample_noise: noise power must be nonnegative");
    std::normal_distribution<double> normal(0.0, 1.0);
    const double scale = std::sqrt(noise_power / 2.0);
    ComplexVector n(dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const double re = normal(rng);
        const double im = normal(rng);
        n(i) = Complex(scale * re, scale * im);
    }
    return n;
}

ComplexVector sample_target(const TargetPrior& prior, Rng& rng) {
    const ComplexVector g = sample_noise(prior.n_tr(), 1.0, rng);
    return prior.h_d() + prior.r_h_sqrt() * g;
}

ComplexVector received(const ComplexMatrix& x, const ComplexVector& h, const ComplexVector& noise) {
    const Eigen::Index n_t = x.cols();
    if (n_t == 0 || h.size() % n_t != 0)
        throw Error(ErrorCode::DimensionMismatch, "received: h length is not a multiple of N_T");
    const Eigen::Index n_r = h.size() / n_t;
    if (noise.size() != x.rows() * n_r)
        throw Error(ErrorCode::DimensionMismatch, "received: noise length must be L*N_R");
    // (I (x) X) vec(H) = vec(X H)
    const ComplexMatrix xh = x * h.reshaped(n_t, n_r);
    return xh.reshaped() + noise;
}

} // namespace mimowave
