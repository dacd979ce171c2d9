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

#include "doctest.h"

#include <cmath>
#include <random>

#include "mimowave/mm.hpp"
#include "test_support.hpp"

using namespace mimowave;
using mimowave::testing::random_hermitian;
using mimowave::testing::random_matrix;

namespace {

double trs_objective(const ComplexMatrix& m, const ComplexVector& v, const ComplexVector& x) {
    return (x.adjoint() * m * x)(0, 0).real() + 2.0 * x.dot(v).real();
}

// Uniform draw from the complex ball ||x||^2 <= energy (a real ball of dimension 2n).
ComplexVector ball_sample(Eigen::Index n, double energy, Rng& rng) {
    ComplexVector x = random_matrix(n, 1, rng);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double radius = std::sqrt(energy) * std::pow(u(rng), 1.0 / (2.0 * static_cast<double>(n)));
    return x * (radius / x.norm());
}

// Dual function of the trust-region problem, q(mu) = mu P + m^H (mu I - M)^{-1} m
// for mu > max(lambda_max, 0). Strong duality holds, so its infimum is the optimum.
double dual_minimum(const ComplexMatrix& m, const ComplexVector& v, double energy) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
    const RealVector lam = es.eigenvalues();
    const ComplexVector b = es.eigenvectors().adjoint() * v;
    auto q = [&](double mu) {
        double acc = mu * energy;
        for (Eigen::Index i = 0; i < lam.size(); ++i) acc += std::norm(b(i)) / (mu - lam(i));
        return acc;
    };
    const double floor_mu = std::max(lam.maxCoeff(), 0.0);
    const double span = v.norm() / std::sqrt(energy) + lam.cwiseAbs().maxCoeff() + 1.0;
    // q is convex on (floor_mu, inf); a coarse scan picks the bracket, ternary search refines it.
    const int grid = 4000;
    auto node = [&](int i) { return floor_mu + span * std::pow(static_cast<double>(i) / grid, 4.0); };
    int best_i = grid;
    double best = q(node(grid));
    for (int i = 1; i < grid; ++i) {
        const double val = q(node(i));
        if (val < best) {
            best = val;
            best_i = i;
        }
    }
    double lo = node(best_i - 1), hi = node(std::min(best_i + 1, grid));
    for (int it = 0; it < 300; ++it) {
        const double a = lo + (hi - lo) / 3.0, c = hi - (hi - lo) / 3.0;
        if (q(a) < q(c)) hi = c;
        else lo = a;
    }
    const double mid = 0.5 * (lo + hi);
    return mid > floor_mu ? std::min(best, q(mid)) : best;
}

// Instance whose top eigenvector is orthogonal to m: the hard case whenever the
// rest of the secular function stays below the budget.
void hard_instance(Eigen::Index n, Rng& rng, ComplexMatrix& m, ComplexVector& v) {
    const ComplexMatrix q = Eigen::HouseholderQR<ComplexMatrix>(random_matrix(n, n, rng)).householderQ();
    RealVector lam(n);
    std::uniform_real_distribution<double> u(-3.0, 1.0);
    for (Eigen::Index i = 0; i < n; ++i) lam(i) = u(rng);
    lam(n - 1) = 2.0;
    m = q * lam.cast<Complex>().asDiagonal() * q.adjoint();
    m = 0.5 * (m + m.adjoint()).eval();
    ComplexVector coeff = random_matrix(n, 1, rng) * 0.05;
    coeff(n - 1) = 0.0;
    v = q * coeff;
}

} // namespace

TEST_CASE("trs_solve: interior stationary point") {
    ComplexMatrix m = -ComplexMatrix::Identity(2, 2);
    ComplexVector v(2);
    v << 1.0, 0.0;
    const TrsSolution s = trs_solve(m, v, 4.0);
    CHECK((s.x - v).norm() <= 1e-14);
    CHECK(s.multiplier == 0.0);
    CHECK_FALSE(s.hard_case);
}

TEST_CASE("trs_solve: linear objective lands on the boundary along m") {
    const ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    ComplexVector v(2);
    v << 1.0, 0.0;
    const TrsSolution s = trs_solve(m, v, 4.0);
    CHECK(std::abs(s.x(0) - Complex(2.0, 0.0)) <= 1e-9);
    CHECK(std::abs(s.x(1)) <= 1e-12);
    CHECK(s.multiplier < 0.0);
}

TEST_CASE("trs_solve: hard case with zero linear term") {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    const double energy = 3.0;
    const TrsSolution s = trs_solve(m, ComplexVector::Zero(2), energy);
    CHECK(s.hard_case);
    CHECK(std::abs(std::abs(s.x(0)) - std::sqrt(energy)) <= 1e-12);
    CHECK(std::abs(s.x(1)) <= 1e-12);
    CHECK(trs_objective(m, ComplexVector::Zero(2), s.x) == doctest::Approx(energy));

    // Brute force over the boundary circle |x0|^2 + |x1|^2 = P (phases do not matter).
    double best = -1e300;
    for (int i = 0; i <= 10000; ++i) {
        const double t = 0.5 * 3.14159265358979323846 * i / 10000.0;
        ComplexVector x(2);
        x << std::sqrt(energy) * std::cos(t), std::sqrt(energy) * std::sin(t);
        best = std::max(best, trs_objective(m, ComplexVector::Zero(2), x));
    }
    CHECK(trs_objective(m, ComplexVector::Zero(2), s.x) >= best - 1e-12);
}

TEST_CASE("trs_solve: negative semidefinite kernel with zero linear term") {
    const TrsSolution s = trs_solve(-ComplexMatrix::Identity(3, 3), ComplexVector::Zero(3), 1.0);
    CHECK(s.x.norm() == 0.0);
}

TEST_CASE("trs_solve: argument checks") {
    CHECK_THROWS_AS(trs_solve(ComplexMatrix::Identity(2, 2), ComplexVector::Zero(2), 0.0), Error);
    CHECK_THROWS_AS(trs_solve(ComplexMatrix::Identity(2, 2), ComplexVector::Zero(3), 1.0), Error);
    ComplexMatrix bad = ComplexMatrix::Zero(2, 2);
    bad(0, 1) = 1.0;
    CHECK_THROWS_AS(trs_solve(bad, ComplexVector::Ones(2), 1.0), Error);
}

TEST_CASE("trs_solve: 50 random instances against sampling and the dual bound") {
    Rng rng(2024);
    std::uniform_int_distribution<int> dim(1, 6);
    std::uniform_real_distribution<double> budget(0.1, 5.0);
    int hard_seen = 0;
    for (int inst = 0; inst < 50; ++inst) {
        const Eigen::Index n = dim(rng);
        const double energy = budget(rng);
        ComplexMatrix m;
        ComplexVector v;
        if (inst % 5 == 4 && n >= 2) {
            hard_instance(n, rng, m, v);
        } else {
            m = random_hermitian(n, rng);
            if (inst % 5 == 1) m -= (m.norm() + 1.0) * ComplexMatrix::Identity(n, n); // negative definite
            v = random_matrix(n, 1, rng) * (inst % 5 == 2 ? 5.0 : 1.0);
        }
        const TrsSolution s = trs_solve(m, v, energy);
        hard_seen += s.hard_case ? 1 : 0;
        const double f = trs_objective(m, v, s.x);

        CHECK(s.x.squaredNorm() <= energy * (1.0 + 1e-9));
        if (s.multiplier != 0.0) {
            CHECK(std::abs(s.x.squaredNorm() - energy) <= 1e-8 * energy);
            // Second-order optimality: M + nu I is negative semidefinite.
            const ComplexMatrix shifted = m + s.multiplier * ComplexMatrix::Identity(n, n);
            CHECK(herm_eig(shifted).eigenvalues.maxCoeff() <= 1e-9 * std::max(1.0, m.norm()));
            CHECK((shifted * s.x + v).norm() <= 1e-8 * std::max(1.0, v.norm() + m.norm()));
        }

        double best = -1e300;
        for (int k = 0; k < 100000; ++k) best = std::max(best, trs_objective(m, v, ball_sample(n, energy, rng)));
        CHECK(f >= best - 1e-12 * std::max(1.0, std::abs(best)));

        const double dual = dual_minimum(m, v, energy);
        CHECK(std::abs(f - dual) <= 1e-6 * std::max(1.0, std::abs(dual)));
    }
    CHECK(hard_seen >= 3);
}
