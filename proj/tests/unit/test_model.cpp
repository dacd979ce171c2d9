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
#include <numbers>

#include <Eigen/SVD>

#include "mimowave/mm.hpp"
#include "mimowave/model.hpp"
#include "test_support.hpp"

using namespace mimowave;
using mimowave::testing::random_matrix;

namespace {

RealVector singular_values(const ComplexMatrix& a) {
    return Eigen::JacobiSVD<ComplexMatrix>(a).singularValues();
}

} // namespace

TEST_CASE("steering: broadside, closed form and unit modulus") {
    const ComplexVector a0 = steering({5, 2.0}, 0.0);
    CHECK(approx_equal(a0, ComplexVector::Ones(5), 1e-15));

    const ComplexVector a = steering({2, 0.5}, 30.0);
    CHECK(std::abs(a(0) - Complex(1.0, 0.0)) < 1e-15);
    CHECK(std::abs(a(1) - Complex(0.0, 1.0)) < 1e-15);

    Rng rng(5);
    std::uniform_real_distribution<double> theta(-90.0, 90.0);
    for (int trial = 0; trial < 100; ++trial) {
        const ComplexVector v = steering({7, 0.5 + trial * 0.01}, theta(rng));
        for (Eigen::Index i = 0; i < v.size(); ++i) CHECK(std::abs(std::abs(v(i)) - 1.0) < 1e-14);
    }
}

TEST_CASE("response_matrix: rank structure") {
    Scenario s = reference_scenario();
    const ComplexMatrix ones = response_matrix({{1.0, 0.0}}, s);
    CHECK(approx_equal(ones, ComplexMatrix::Ones(6, 6), 1e-14));

    const RealVector sv1 = singular_values(response_matrix({{Complex(0.7, 0.2), 17.0}}, s));
    CHECK(sv1(1) / sv1(0) < 1e-10);

    const RealVector sv2 = singular_values(response_matrix({{1.0, -20.0}, {0.5, 35.0}}, s));
    CHECK(sv2(1) / sv2(0) > 1e-6);
    CHECK(sv2(2) / sv2(0) < 1e-10);

    CHECK_THROWS_AS(response_matrix({}, s), Error);
}

TEST_CASE("build_prior: scalar case") {
    Scenario s = reference_scenario();
    s.tx.n_elements = 1;
    s.rx.n_elements = 1;
    s.code_length = 1;
    const TargetPrior p = build_prior(s);
    CHECK(std::abs(p.h_d()(0) - s.nominal_amplitude) < 1e-15);
    CHECK(std::abs(p.r_h()(0, 0) - Complex(0.05 * 30, 0.0)) < 1e-12);
}

TEST_CASE("build_prior: h_d equals vec of the nominal response matrix") {
    for (double theta : {15.0, -42.0, 0.0, 63.5}) {
        Scenario s = reference_scenario();
        s.nominal_doa = theta;
        s.nominal_amplitude = Complex(0.3, -1.1);
        const TargetPrior p = build_prior(s);
        const ComplexMatrix h = response_matrix({{s.nominal_amplitude, theta}}, s);
        CHECK((vec(h) - p.h_d()).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("build_prior: R_H trace and positive semidefiniteness") {
    for (double step : {4.0, 2.0, 29.0}) {
        Scenario s = reference_scenario();
        s.uncertainty_angles = uniform_grid(-60.0, 56.0, step);
        const TargetPrior p = build_prior(s);
        const double k = static_cast<double>(s.uncertainty_angles.size());
        CHECK(p.r_h().trace().real() == doctest::Approx(0.05 * k * 36).epsilon(1e-12));
        CHECK(hermitian_residual(p.r_h()) <= 1e-10);
        CHECK(herm_eig(p.r_h()).eigenvalues.minCoeff() >= -1e-10 * p.r_h().norm());
        CHECK((p.r_h_sqrt() * p.r_h_sqrt() - p.r_h()).norm() <= 1e-8 * std::max(1.0, p.r_h().norm()));
    }
}

TEST_CASE("uniform_grid and reference defaults") {
    const auto g = uniform_grid(-60.0, 56.0, 4.0);
    REQUIRE(g.size() == 30);
    CHECK(g.front() == -60.0);
    CHECK(g.back() == doctest::Approx(56.0));
    const Scenario s = reference_scenario();
    CHECK(s.n_t() == 6);
    CHECK(s.n_r() == 6);
    CHECK(s.code_length == 20);
    CHECK(s.tx.spacing_wavelengths == 2.0);
    CHECK(s.rx.spacing_wavelengths == 0.5);
    CHECK(std::norm(s.nominal_amplitude) == doctest::Approx(1.5));
    const Scenario d = desk_scale(s);
    CHECK(d.n_t() == 4);
    CHECK(d.n_r() == 4);
    CHECK(d.code_length == 8);
}

TEST_CASE("Scenario::validate rejects bad fields") {
    Scenario s = reference_scenario();
    CHECK_NOTHROW(s.validate());
    Scenario bad = s;
    bad.energy_budget = 0.0;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = s;
    bad.nominal_doa = 91.0;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = s;
    bad.uncertainty_angles.push_back(-95.0);
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = s;
    bad.noise_power = -1.0;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad = s;
    bad.uncertainty_angles.clear();
    CHECK_THROWS_AS(build_prior(bad), Error);
}

TEST_CASE("snr") {
    Scenario s = reference_scenario();
    const ComplexMatrix h = response_matrix({{s.nominal_amplitude, 15.0}}, s);
    CHECK(snr(ComplexMatrix::Zero(20, 6), h, 1.0) == 0.0);

    ComplexMatrix x(1, 1), h1(1, 1);
    x(0, 0) = std::sqrt(2.5);
    h1(0, 0) = 1.0;
    CHECK(snr(x, h1, 1.0) == doctest::Approx(2.5));

    // Nominal design reaches P_t lambda_max(H H^H) in tr(X H H^H X^H).
    const double energy = 1.25;
    const ComplexMatrix xn = nominal_design(h, energy, 20);
    const double lambda_max = herm_eig(h * h.adjoint()).eigenvalues.maxCoeff();
    const double achieved = snr(xn, h, 1.0) * 20 * 6;
    CHECK(achieved == doctest::Approx(energy * lambda_max).epsilon(1e-10));
}

TEST_CASE("make_stream: deterministic and keyed") {
    Rng a = make_stream(7, 3, 1), b = make_stream(7, 3, 1), c = make_stream(7, 4, 1), d = make_stream(7, 3, 2);
    const auto va = a();
    CHECK(va == b());
    CHECK(va != c());
    CHECK(va != d());
}

TEST_CASE("sample_target: degenerate prior returns the mean") {
    Scenario s = reference_scenario();
    s.uncertainty_power = 0.0;
    const TargetPrior p = build_prior(s);
    Rng rng(9);
    const ComplexVector h = sample_target(p, rng);
    CHECK((h - p.h_d()).norm() == 0.0);
}

TEST_CASE("sample_target: first and second moments") {
    Scenario s = reference_scenario();
    s.tx.n_elements = 2;
    s.rx.n_elements = 2;
    s.uncertainty_power = 0.2;
    s.uncertainty_angles = {-30.0, 10.0, 45.0};
    const TargetPrior p = build_prior(s);
    Rng rng(123);
    constexpr int n = 100000;
    ComplexVector mean = ComplexVector::Zero(4);
    ComplexMatrix cov = ComplexMatrix::Zero(4, 4);
    for (int i = 0; i < n; ++i) {
        const ComplexVector h = sample_target(p, rng);
        mean += h;
        const ComplexVector c = h - p.h_d();
        cov += c * c.adjoint();
    }
    mean /= n;
    cov /= n;
    for (int i = 0; i < 4; ++i) {
        const double sd = std::sqrt(p.r_h()(i, i).real() / 2.0);
        CHECK(std::abs(mean(i).real() - p.h_d()(i).real()) <= 4.0 * sd / std::sqrt(n));
        CHECK(std::abs(mean(i).imag() - p.h_d()(i).imag()) <= 4.0 * sd / std::sqrt(n));
    }
    CHECK((cov - p.r_h()).norm() <= 0.05 * p.r_h().norm());
}

TEST_CASE("sample_noise: power, circularity and zero power") {
    Rng rng(77);
    constexpr int n = 100000;
    const double sigma2 = 2.5;
    const ComplexVector v = sample_noise(n, sigma2, rng);
    const double power = v.squaredNorm() / n;
    CHECK(std::abs(power - sigma2) <= 0.03 * sigma2);
    const Complex pseudo = v.array().square().sum() / static_cast<double>(n);
    CHECK(std::abs(pseudo) <= 4.0 * sigma2 / std::sqrt(n));

    const ComplexVector z = sample_noise(8, 0.0, rng);
    CHECK(z.norm() == 0.0);
    CHECK_THROWS_AS(sample_noise(0, 1.0, rng), Error);
}

TEST_CASE("received: structure and linearity") {
    Rng rng(88);
    const ComplexMatrix x = random_matrix(5, 3, rng);
    const ComplexMatrix h = random_matrix(3, 4, rng);
    const ComplexMatrix n = random_matrix(5, 4, rng);

    CHECK(approx_equal(received(x, ComplexVector::Zero(12), vec(n)), vec(n), 0.0));
    const ComplexVector y = received(x, vec(h), vec(n));
    CHECK((y - vec(x * h + n)).norm() <= 1e-12 * y.norm());
    const ComplexVector explicit_y = kron(ComplexMatrix::Identity(4, 4), x) * vec(h) + vec(n);
    CHECK((y - explicit_y).norm() <= 1e-12 * y.norm());

    const ComplexMatrix h1 = random_matrix(3, 1, rng);
    CHECK((received(x, h1, ComplexVector::Zero(5)) - x * h1).norm() <= 1e-14);

    const ComplexVector ha = vec(random_matrix(3, 4, rng)), hb = vec(random_matrix(3, 4, rng));
    const ComplexVector zero = ComplexVector::Zero(20);
    const ComplexVector lhs = received(x, ha + hb, zero);
    const ComplexVector rhs = received(x, ha, zero) + received(x, hb, zero);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, lhs.cwiseAbs().maxCoeff()));

    CHECK_THROWS_AS(received(x, ComplexVector::Zero(7), zero), Error);
}
