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

#include <optional>
#include <vector>

#include "mimowave/detection.hpp"
#include "mimowave/model.hpp"

namespace mimowave {

struct MMConfig {
    double epsilon = 1e-4;       // stop when |D_k - D_{k-1}| / |D_k| < epsilon
    int max_iterations = 500;
    double trs_tolerance = 1e-10; // relative tolerance on ||x||^2 = P_t
    double sigma2 = 1.0;

    void validate() const;
};

struct MMIterate {
    ComplexMatrix waveform;
    double objective = 0.0;
    double multiplier = 0.0; // nu; 0 for the starting point and interior steps
    double energy = 0.0;     // tr(X X^H)
};

struct MMTrace {
    std::vector<MMIterate> iterates;
    bool converged = false;
    int iterations_used = 0;

    const MMIterate& final() const { return iterates.back(); }
};

/// Coefficients of the three tangent minorizers at X_k. For any X,
///   g1(X) = c1 + 2 Re tr(X~ R_H^{1/2} T12) + tr(T22 X~ R_H X~^H)      <= part1(X)
///   g2(X) = c2 - tr(Z X~ R_H X~^H) + 2 Re tr(X~^H W)                   <= part2(X)
///   g3(X) = c3 - tr(R1k^{-2} X~ R_H X~^H)                              <= part3(X)
/// with equality at X = X_k.
struct SurrogateCoefficients {
    ComplexMatrix t12;        // N_TR x N_RL
    ComplexMatrix t22;        // N_RL x N_RL, Hermitian NSD
    ComplexMatrix w;          // N_RL x N_TR
    ComplexMatrix z;          // N_RL x N_RL, rank one PSD
    ComplexMatrix r1_inv_sq;  // N_RL x N_RL, Hermitian PD
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
};

struct Part1Coefficients {
    ComplexMatrix t12;
    ComplexMatrix t22;
    double c1 = 0.0;
};

struct Part2Coefficients {
    ComplexMatrix w;
    ComplexMatrix z;
    double c2 = 0.0;
};

struct Part3Coefficients {
    ComplexMatrix r1_inv_sq;
    double c3 = 0.0;
};

enum class Part1Route {
    Schur, // reduced form through K = I - R_H^{1/2} X~^H R1^{-1} X~ R_H^{1/2}
    Block, // literal gradient of log det(E_A C_A^{-1} E_A^H) over the full block matrix C_A
};

/// X = sqrt(P_t) u v^H with u the normalized all-ones L-vector and v the top
/// eigenvector of H_d H_d^H.
ComplexMatrix nominal_design(const ComplexMatrix& h_d, double energy_budget, int code_length);

Part1Coefficients part1_coefficients(const ComplexMatrix& x_k, const TargetPrior& prior, double sigma2,
                                     Part1Route route = Part1Route::Schur);
Part2Coefficients part2_coefficients(const ComplexMatrix& x_k, const TargetPrior& prior, double sigma2);
Part3Coefficients part3_coefficients(const ComplexMatrix& x_k, const TargetPrior& prior, double sigma2);

SurrogateCoefficients surrogate_coefficients(const ComplexMatrix& x_k, const TargetPrior& prior, double sigma2);

double part1_surrogate(const Part1Coefficients& c, const ComplexMatrix& x, const TargetPrior& prior);
double part2_surrogate(const Part2Coefficients& c, const ComplexMatrix& x, const TargetPrior& prior);
double part3_surrogate(const Part3Coefficients& c, const ComplexMatrix& x, const TargetPrior& prior);

/// g1 + g2 + sigma^2 g3 - L N_R, the minorizer of the relative entropy.
double total_surrogate(const SurrogateCoefficients& c, const ComplexMatrix& x, const TargetPrior& prior,
                       double sigma2);

struct QuadraticForm {
    ComplexMatrix m_mat; // Hermitian (L N_T) x (L N_T)
    ComplexVector m_vec; // length L N_T
};

/// Collapses the surrogate to x^H M x + 2 Re(x^H m) over x = vec(X), where
/// M = B_s^H (R_H^* (x) Q_k) B_s, m = B_s^H vec(P_k),
/// P_k = T12^H R_H^{1/2} + W and Q_k = T22 - Z - sigma^2 R1k^{-2}.
/// The selection structure is contracted directly; B_s is never formed.
QuadraticForm assemble_quadratic(const SurrogateCoefficients& c, const TargetPrior& prior, int code_length,
                                 double sigma2);

/// Reference assembly through explicit B_s and Kronecker products. Only
/// practical for small dimensions.
QuadraticForm assemble_quadratic_explicit(const SurrogateCoefficients& c, const TargetPrior& prior,
                                          int code_length, double sigma2);

struct TrsSolution {
    ComplexVector x;
    double multiplier = 0.0; // nu, with x = -(M + nu I)^{-1} m
    bool hard_case = false;
};

/// Global maximizer of x^H M x + 2 Re(x^H m) subject to ||x||^2 <= energy.
TrsSolution trs_solve(const ComplexMatrix& m_mat, const ComplexVector& m_vec, double energy, double tol = 1e-10);

/// L x N_T unit-modulus random-phase code scaled so tr(X X^H) = P_t.
ComplexMatrix random_init(const Scenario& scenario, Rng& rng);

/// MM ascent on the relative entropy under tr(X X^H) <= scenario.energy_budget.
MMTrace optimize(const Scenario& scenario, const TargetPrior& prior, const MMConfig& config,
                 const std::optional<ComplexMatrix>& x0 = std::nullopt);

} // namespace mimowave
