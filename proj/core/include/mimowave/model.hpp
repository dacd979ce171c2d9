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
#include <random>
#include <vector>

#include "mimowave/numerics.hpp"

namespace mimowave {

/// Seedable 64-bit generator used for every random draw in the library.
using Rng = std::mt19937_64;

/// Independent substream keyed by (seed, stream, purpose). Results depend only
/// on the key, never on evaluation order or thread count.
Rng make_stream(std::uint64_t seed, std::uint64_t stream = 0, std::uint64_t purpose = 0);

/// Uniform linear array; spacing is in carrier wavelengths.
struct ArrayGeometry {
    int n_elements = 1;
    double spacing_wavelengths = 0.5;
};

struct Scenario {
    ArrayGeometry tx{6, 2.0};
    ArrayGeometry rx{6, 0.5};
    int code_length = 20;
    double noise_power = 1.0;
    double energy_budget = 1.0;
    double nominal_doa = 15.0;
    Complex nominal_amplitude{1.2247448713915890491, 0.0}; // sqrt(3/2)
    std::vector<double> uncertainty_angles;
    double uncertainty_power = 0.05;
    std::uint64_t seed = 0;

    int n_t() const { return tx.n_elements; }
    int n_r() const { return rx.n_elements; }

    /// Throws Error(InvalidArgument) on violated invariants.
    void validate() const;
};

/// start, start+step, ... up to and including stop (within 1e-9 of step).
std::vector<double> uniform_grid(double start, double stop, double step);

/// Six-by-six colocated array, L = 20, grid -60..56 deg in 4 deg steps.
Scenario reference_scenario();

/// Shrinks a scenario to 4 transmitters, 4 receivers and L = 8.
Scenario desk_scale(Scenario s);

/// Mean response h_d and covariance R_H of the circular Gaussian target model.
class TargetPrior {
public:
    TargetPrior(ComplexVector h_d, ComplexMatrix r_h, int n_t, int n_r);

    const ComplexVector& h_d() const { return h_d_; }
    const ComplexMatrix& r_h() const { return r_h_; }
    const ComplexMatrix& r_h_sqrt() const { return r_h_sqrt_; }
    int n_t() const { return n_t_; }
    int n_r() const { return n_r_; }
    int n_tr() const { return n_t_ * n_r_; }

private:
    ComplexVector h_d_;
    ComplexMatrix r_h_;
    ComplexMatrix r_h_sqrt_;
    int n_t_;
    int n_r_;
};

struct PointTarget {
    Complex amplitude;
    double doa_deg;
};

/// exp(j 2 pi m d sin(theta)) for m = 0..n-1.
ComplexVector steering(const ArrayGeometry& geom, double theta_deg);

/// sum_k alpha_k a(theta_k) b(theta_k)^T, an n_t x n_r matrix.
ComplexMatrix response_matrix(const std::vector<PointTarget>& targets, const Scenario& scenario);

/// alpha (b (x) a), which equals vec(alpha a b^T).
ComplexVector response_vector(const PointTarget& target, const Scenario& scenario);

TargetPrior build_prior(const Scenario& scenario);

double snr(const ComplexMatrix& x, const ComplexMatrix& h, double noise_power);

/// h = h_d + R_H^{1/2} g with g standard circular complex Gaussian.
ComplexVector sample_target(const TargetPrior& prior, Rng& rng);

/// i.i.d. circular complex Gaussian entries with E|n_i|^2 = noise_power.
ComplexVector sample_noise(Eigen::Index dim, double noise_power, Rng& rng);

/// y = (I_{n_r} (x) X) h + noise, length L * n_r.
ComplexVector received(const ComplexMatrix& x, const ComplexVector& h, const ComplexVector& noise);

} // namespace mimowave
