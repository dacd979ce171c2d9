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

#include <cmath>
#include <random>

#include "mimowave/model.hpp"

namespace mimowave::testing {

inline ComplexMatrix random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng, double scale = 1.0) {
    std::normal_distribution<double> n(0.0, scale);
    ComplexMatrix a(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) a(i, j) = Complex(n(rng), n(rng));
    return a;
}

inline ComplexMatrix random_hermitian(Eigen::Index n, Rng& rng) {
    const ComplexMatrix g = random_matrix(n, n, rng);
    return 0.5 * (g + g.adjoint());
}

inline ComplexMatrix random_psd(Eigen::Index n, Eigen::Index rank, Rng& rng) {
    const ComplexMatrix g = random_matrix(n, rank, rng);
    return g * g.adjoint();
}

/// Random point in the ball ||X||_F^2 <= energy, with random radius.
inline ComplexMatrix random_feasible(Eigen::Index rows, Eigen::Index cols, double energy, Rng& rng) {
    ComplexMatrix x = random_matrix(rows, cols, rng);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return x * (std::sqrt(energy * u(rng)) / x.norm());
}

/// Small scenario with a generic (full-rank) prior for surrogate checks.
inline Scenario small_scenario(int n_t, int n_r, int l, double energy) {
    Scenario s = reference_scenario();
    s.tx.n_elements = n_t;
    s.rx.n_elements = n_r;
    s.code_length = l;
    s.energy_budget = energy;
    return s;
}

} // namespace mimowave::testing
