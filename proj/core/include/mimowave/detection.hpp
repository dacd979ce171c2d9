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
#include <functional>
#include <optional>
#include <span>

#include "mimowave/model.hpp"

namespace mimowave {

/// R1 = X~ R_H X~^H + sigma^2 I with X~ = I_{N_R} (x) X.
ComplexMatrix r1(const ComplexMatrix& x, const TargetPrior& prior, double noise_power);

/// The three pieces of the relative entropy,
///   D = part1 + part2 + sigma^2 part3 - L N_R,
/// with part1 = log det(I + R_H^{1/2} X~^H X~ R_H^{1/2} / sigma^2),
/// part2 = (X~ h_d)^H R1^{-1} (X~ h_d) and part3 = tr(R1^{-1}).
struct ObjectiveParts {
    double part1 = 0.0;
    double part2 = 0.0;
    double part3 = 0.0;
    double total = 0.0;
};

ObjectiveParts objective_parts(const ComplexMatrix& x, const TargetPrior& prior, double noise_power);

/// D(P0 || P1) = log det R1 + tr(R1^{-1}(X~ h_d h_d^H X~^H + sigma^2 I)) - L N_R (1 + log sigma^2).
double relative_entropy(const ComplexMatrix& x, const TargetPrior& prior, double noise_power);

/// Conjugate Wirtinger gradient dD/dX^*, so that dD = 2 Re tr(G^H dX).
ComplexMatrix relative_entropy_gradient(const ComplexMatrix& x, const TargetPrior& prior, double noise_power);

/// Calibrated decision rule: decide H1 when the statistic exceeds gamma, and
/// with probability tie_probability when it equals gamma exactly. Ties only
/// carry mass for degenerate detectors (e.g. X = 0, where the statistic is
/// identically zero); for continuous statistics tie_probability is 0.
struct Threshold {
    double gamma = 0.0;
    double tie_probability = 0.0;
};

/// Everything the Neyman-Pearson test needs for one waveform and prior.
/// Immutable; the threshold is attached with with_threshold().
class DetectorSpec {
public:
    DetectorSpec(const ComplexMatrix& x, const TargetPrior& prior, double noise_power);

    const HpdFactor& r1_factor() const { return r1_factor_; }
    const ComplexVector& xh_d() const { return xh_d_; }
    const ComplexMatrix& waveform() const { return x_; }
    double noise_power() const { return noise_power_; }
    std::optional<Threshold> threshold() const { return threshold_; }
    Eigen::Index dim() const { return xh_d_.size(); }

    DetectorSpec with_threshold(Threshold threshold) const;

    /// y^H (I - sigma^2 R1^{-1}) y + 2 sigma^2 Re(y^H R1^{-1} X~ h_d).
    double statistic(const ComplexVector& y) const;

private:
    ComplexMatrix x_;
    HpdFactor r1_factor_;
    ComplexVector xh_d_;
    double noise_power_;
    ComplexMatrix quad_;   // I - sigma^2 R1^{-1}
    ComplexVector linear_; // sigma^2 R1^{-1} X~ h_d
    std::optional<Threshold> threshold_;
};

double np_statistic(const ComplexVector& y, const DetectorSpec& spec);

/// gamma is the value at 0-based index ceil((1 - p_fa) n) - 1 of the ascending
/// sort; the tie probability tops the exceedance count up to floor(p_fa n).
Threshold quantile_threshold(std::span<const double> statistics, double p_fa);

/// Monte Carlo threshold from `trials` noise-only draws. Requires trials * p_fa >= 10.
Threshold calibrate_threshold(const DetectorSpec& spec, double p_fa, std::int64_t trials, Rng& rng);

using TargetSampler = std::function<ComplexVector(Rng&)>;

/// Fraction of draws y = X~ h + n declared H1 (statistic(y) > gamma), h fixed.
double detection_probability(const DetectorSpec& spec, const ComplexVector& h, std::int64_t trials, Rng& rng);

/// Same, with h redrawn from `sampler` on every trial.
double detection_probability(const DetectorSpec& spec, const TargetSampler& sampler, std::int64_t trials,
                             Rng& rng);

} // namespace mimowave
