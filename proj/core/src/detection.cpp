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

#include "mimowave/detection.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace mimowave {

namespace {

void check_dims(const ComplexMatrix& x, const TargetPrior& prior) {
    if (x.cols() != prior.n_t())
        throw Error(ErrorCode::DimensionMismatch, "waveform column count must equal N_T");
}

// X~ R_H X~^H + sigma^2 I
ComplexMatrix build_r1(const ComplexMatrix& x_tilde, const TargetPrior& prior, double noise_power) {
    ComplexMatrix out = x_tilde * prior.r_h() * x_tilde.adjoint();
    out = 0.5 * (out + out.adjoint()).eval();
    out.diagonal().array() += noise_power;
    return out;
}

} // namespace

ComplexMatrix r1(const ComplexMatrix& x, const TargetPrior& prior, double noise_power) {
    check_dims(x, prior);
    return build_r1(block_diag_repeat(x, prior.n_r()), prior, noise_power);
}

ObjectiveParts objective_parts(const ComplexMatrix& x, const TargetPrior& prior, double noise_power) {
    check_dims(x, prior);
    const ComplexMatrix x_tilde = block_diag_repeat(x, prior.n_r());
    const HpdFactor factor(build_r1(x_tilde, prior, noise_power));
    const ComplexVector xh = x_tilde * prior.h_d();
    const auto n_rl = static_cast<double>(x_tilde.rows());

    ObjectiveParts p;
    p.part1 = factor.log_det() - n_rl * std::log(noise_power);
    p.part2 = xh.dot(factor.solve(xh)).real();
    p.part3 = factor.inverse().trace().real();
    p.total = p.part1 + p.part2 + noise_power * p.part3 - n_rl;
    return p;
}

double relative_entropy(const ComplexMatrix& x, const TargetPrior& prior, double noise_power) {
    return objective_parts(x, prior, noise_power).total;
}

ComplexMatrix relative_entropy_gradient(const ComplexMatrix& x, const TargetPrior& prior, double noise_power) {
    check_dims(x, prior);
    const int n_r = prior.n_r();
    const ComplexMatrix x_tilde = block_diag_repeat(x, n_r);
    const HpdFactor factor(build_r1(x_tilde, prior, noise_power));
    const ComplexMatrix r1_inv = factor.inverse();
    const ComplexVector xh = x_tilde * prior.h_d();
    const ComplexVector u = r1_inv * xh;

    // dD = tr(G dR1) + tr(R1^{-1} dA) with G = R1^{-1} - R1^{-1}(A + sigma^2 I)R1^{-1},
    // A = X~ h_d h_d^H X~^H.
    ComplexMatrix g = r1_inv - u * u.adjoint() - noise_power * (r1_inv * r1_inv);
    const ComplexMatrix grad_tilde = g * x_tilde * prior.r_h() + u * prior.h_d().adjoint();

    // X appears in every diagonal block of X~.
    const Eigen::Index l = x.rows();
    const Eigen::Index n_t = x.cols();
    ComplexMatrix grad = ComplexMatrix::Zero(l, n_t);
    for (int r = 0; r < n_r; ++r) grad += grad_tilde.block(r * l, r * n_t, l, n_t);
    return grad;
}

DetectorSpec::DetectorSpec(const ComplexMatrix& x, const TargetPrior& prior, double noise_power)
    : x_(x), r1_factor_(r1(x, prior, noise_power)), noise_power_(noise_power) {
    if (!(noise_power > 0.0)) throw Error(ErrorCode::InvalidArgument, "DetectorSpec: noise power must be positive");
    xh_d_ = block_diag_repeat(x, prior.n_r()) * prior.h_d();
    const ComplexMatrix r1_inv = r1_factor_.inverse();
    quad_ = -noise_power * r1_inv;
    quad_ = 0.5 * (quad_ + quad_.adjoint()).eval();
    quad_.diagonal().array() += 1.0;
    linear_ = noise_power * (r1_inv * xh_d_);
}

DetectorSpec DetectorSpec::with_threshold(Threshold threshold) const {
    DetectorSpec out = *this;
    out.threshold_ = threshold;
    return out;
}

double DetectorSpec::statistic(const ComplexVector& y) const {
    if (y.size() != dim()) throw Error(ErrorCode::DimensionMismatch, "np_statistic: y length must match R1");
    const Complex q = y.dot(quad_ * y);
    if (std::abs(q.imag()) > 1e-8 * std::abs(q.real()) + 1e-8)
        throw Error(ErrorCode::NonHermitian, "np_statistic: quadratic form has a non-negligible imaginary part");
    return q.real() + 2.0 * y.dot(linear_).real();
}

double np_statistic(const ComplexVector& y, const DetectorSpec& spec) {
    return spec.statistic(y);
}

Threshold quantile_threshold(std::span<const double> statistics, double p_fa) {
    if (statistics.empty() || !(p_fa > 0.0 && p_fa < 1.0))
        throw Error(ErrorCode::InvalidArgument, "quantile_threshold: need samples and p_fa in (0, 1)");
    const auto n = static_cast<std::int64_t>(statistics.size());
    // ceil((1 - p) n) = n - floor(p n); the guard absorbs representation error in p n.
    const auto exceed = static_cast<std::int64_t>(std::floor(p_fa * static_cast<double>(n) + 1e-9));
    const std::int64_t index = std::clamp<std::int64_t>(n - exceed - 1, 0, n - 1);
    std::vector<double> sorted(statistics.begin(), statistics.end());
    std::nth_element(sorted.begin(), sorted.begin() + index, sorted.end());
    const double gamma = sorted[static_cast<std::size_t>(index)];

    std::int64_t above = 0;
    std::int64_t equal = 0;
    for (double s : statistics) {
        if (s > gamma) ++above;
        else if (s == gamma) ++equal;
    }
    Threshold out{gamma, 0.0};
    if (equal > 0 && exceed > above)
        out.tie_probability = std::min(1.0, static_cast<double>(exceed - above) / static_cast<double>(equal));
    return out;
}

Threshold calibrate_threshold(const DetectorSpec& spec, double p_fa, std::int64_t trials, Rng& rng) {
    if (!(p_fa > 0.0 && p_fa < 1.0)) throw Error(ErrorCode::InvalidArgument, "calibrate_threshold: p_fa outside (0, 1)");
    if (trials < 1 || static_cast<double>(trials) * p_fa < 10.0 - 1e-9)
        throw Error(ErrorCode::InsufficientTrials, "calibrate_threshold: trials * p_fa must be >= 10");
    std::vector<double> stats(static_cast<std::size_t>(trials));
    for (auto& s : stats) s = spec.statistic(sample_noise(spec.dim(), spec.noise_power(), rng));
    return quantile_threshold(stats, p_fa);
}

double detection_probability(const DetectorSpec& spec, const ComplexVector& h, std::int64_t trials, Rng& rng) {
    return detection_probability(spec, TargetSampler([&h](Rng&) { return h; }), trials, rng);
}

double detection_probability(const DetectorSpec& spec, const TargetSampler& sampler, std::int64_t trials,
                             Rng& rng) {
    const auto threshold = spec.threshold();
    if (!threshold) throw Error(ErrorCode::ThresholdMissing, "detection_probability: calibrate the threshold first");
    if (trials < 1) throw Error(ErrorCode::InsufficientTrials, "detection_probability: trials must be >= 1");
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::int64_t hits = 0;
    for (std::int64_t t = 0; t < trials; ++t) {
        const ComplexVector h = sampler(rng);
        const ComplexVector y = received(spec.waveform(), h, sample_noise(spec.dim(), spec.noise_power(), rng));
        const double s = spec.statistic(y);
        if (s > threshold->gamma) ++hits;
        else if (s == threshold->gamma && threshold->tie_probability > 0.0 && coin(rng) < threshold->tie_probability)
            ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(trials);
}

} // namespace mimowave
