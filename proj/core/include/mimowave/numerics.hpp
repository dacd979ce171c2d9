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

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

namespace mimowave {

using Complex = std::complex<double>;

/// Dense complex matrix. Column vectors are n x 1 matrices; every waveform,
/// response, covariance and surrogate coefficient in the library uses it.
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

enum class ErrorCode {
    NonHermitian,
    NoConvergence,
    NotPositiveDefinite,
    NotPsd,
    ZeroResponse,
    InsufficientTrials,
    ThresholdMissing,
    NoRoot,
    DimensionMismatch,
    InvalidArgument,
    ConfigError,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Elementwise |a - b| <= abs_tol + rel_tol * max(|a|, |b|), plus matching shape.
bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double abs_tol, double rel_tol = 0.0);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Column-major stacking into an (rows*cols) x 1 matrix.
ComplexVector vec(const ComplexMatrix& a);

/// Inverse of vec for a given row count.
ComplexMatrix unvec(const ComplexVector& v, Eigen::Index rows, Eigen::Index cols);

double hermitian_residual(const ComplexMatrix& a);

struct HermitianEig {
    RealVector eigenvalues;     // ascending
    ComplexMatrix eigenvectors; // column i pairs with eigenvalue i
};

/// Eigendecomposition of a Hermitian matrix. The input is symmetrized as
/// (A + A^H)/2 after checking ||A - A^H||_F <= 1e-8 ||A||_F.
HermitianEig herm_eig(const ComplexMatrix& a);

/// Cholesky factorization of a Hermitian positive definite matrix.
class HpdFactor {
public:
    explicit HpdFactor(const ComplexMatrix& a);

    ComplexMatrix solve(const ComplexMatrix& b) const;
    ComplexVector solve(const ComplexVector& b) const;
    ComplexMatrix inverse() const;
    double log_det() const;
    Eigen::Index size() const { return llt_.rows(); }

private:
    Eigen::LLT<ComplexMatrix> llt_;
};

HpdFactor hpd_factor(const ComplexMatrix& a);

/// Hermitian square root of a PSD matrix; eigenvalues within
/// -1e-8 ||A||_F of zero are clamped to zero.
ComplexMatrix psd_sqrt(const ComplexMatrix& a);

/// Selection matrix B_s with vec(I_{n_r} (x) X) = B_s vec(X) for every
/// l x n_t matrix X. Size (l*n_t*n_r*n_r) x (l*n_t).
ComplexMatrix selection_matrix(int n_t, int n_r, int l);

/// I_{n_r} (x) X without materializing the identity.
ComplexMatrix block_diag_repeat(const ComplexMatrix& x, int n_r);

} // namespace mimowave
