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

#include "mimowave/numerics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace mimowave {

const char* to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::NonHermitian: return "NonHermitian";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotPositiveDefinite: return "NotPositiveDefinite";
    case ErrorCode::NotPsd: return "NotPSD";
    case ErrorCode::ZeroResponse: return "ZeroResponse";
    case ErrorCode::InsufficientTrials: return "InsufficientTrials";
    case ErrorCode::ThresholdMissing: return "ThresholdMissing";
    case ErrorCode::NoRoot: return "NoRoot";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double abs_tol, double rel_tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            const double scale = std::max(std::abs(a(i, j)), std::abs(b(i, j)));
            if (std::abs(a(i, j) - b(i, j)) > abs_tol + rel_tol * scale) return false;
        }
    }
    return true;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

ComplexVector vec(const ComplexMatrix& a) {
    // Eigen storage is column-major, so the reshaped view is exactly vec(A).
    return a.reshaped();
}

ComplexMatrix unvec(const ComplexVector& v, Eigen::Index rows, Eigen::Index cols) {
    if (rows * cols != v.size())
        throw Error(ErrorCode::DimensionMismatch, "unvec: size does not match rows*cols");
    return v.reshaped(rows, cols);
}

double hermitian_residual(const ComplexMatrix& a) {
    return (a - a.adjoint()).norm();
}

HermitianEig herm_eig(const ComplexMatrix& a) {
    if (a.rows() != a.cols())
        throw Error(ErrorCode::NonHermitian, "herm_eig: matrix is not square");
    const double scale = a.norm();
    if (hermitian_residual(a) > 1e-8 * scale)
        throw Error(ErrorCode::NonHermitian, "herm_eig: ||A - A^H|| exceeds 1e-8 ||A||");

    const ComplexMatrix sym = 0.5 * (a + a.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
    if (solver.info() != Eigen::Success)
        throw Error(ErrorCode::NoConvergence, "herm_eig: eigen iteration did not converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

HpdFactor::HpdFactor(const ComplexMatrix& a) {
    if (a.rows() != a.cols())
        throw Error(ErrorCode::NotPositiveDefinite, "hpd_factor: matrix is not square");
    llt_.compute(a);
    if (llt_.info() != Eigen::Success)
        throw Error(ErrorCode::NotPositiveDefinite, "hpd_factor: non-positive pivot");
    const auto diag = llt_.matrixLLT().diagonal();
    for (Eigen::Index i = 0; i < diag.size(); ++i) {
        if (!(diag(i).real() > 0.0) || !std::isfinite(diag(i).real()))
            throw Error(ErrorCode::NotPositiveDefinite, "hpd_factor: non-positive pivot");
    }
}

ComplexMatrix HpdFactor::solve(const ComplexMatrix& b) const {
    return llt_.solve(b);
}

ComplexVector HpdFactor::solve(const ComplexVector& b) const {
    return llt_.solve(b);
}

ComplexMatrix HpdFactor::inverse() const {
    return llt_.solve(ComplexMatrix::Identity(size(), size()));
}

double HpdFactor::log_det() const {
    const auto diag = llt_.matrixLLT().diagonal();
    double acc = 0.0;
    for (Eigen::Index i = 0; i < diag.size(); ++i) acc += std::log(diag(i).real());
    return 2.0 * acc;
}

HpdFactor hpd_factor(const ComplexMatrix& a) {
    return HpdFactor(a);
}

ComplexMatrix psd_sqrt(const ComplexMatrix& a) {
    const HermitianEig eig = herm_eig(a);
    const double scale = a.norm();
    RealVector roots(eig.eigenvalues.size());
    for (Eigen::Index i = 0; i < roots.size(); ++i) {
        const double lambda = eig.eigenvalues(i);
        if (lambda < -1e-8 * scale)
            throw Error(ErrorCode::NotPsd, "psd_sqrt: negative eigenvalue below -1e-8 ||A||");
        roots(i) = std::sqrt(std::max(lambda, 0.0));
    }
    ComplexMatrix s = eig.eigenvectors * roots.asDiagonal() * eig.eigenvectors.adjoint();
    return 0.5 * (s + s.adjoint());
}

ComplexMatrix selection_matrix(int n_t, int n_r, int l) {
    if (n_t < 1 || n_r < 1 || l < 1)
        throw Error(ErrorCode::InvalidArgument, "selection_matrix: dimensions must be >= 1");
    const int n_tr = n_t * n_r;

    // E_s stacks E_i^T for i = 1..N_TR, where E_i is the n_t x n_r elementary
    // matrix with its unit at (1 + mod(i-1, n_t), ceil(i / n_t)).
    ComplexMatrix e_s = ComplexMatrix::Zero(static_cast<Eigen::Index>(n_tr) * n_r, n_t);
    for (int i = 1; i <= n_tr; ++i) {
        const int row = (i - 1) % n_t;
        const int col = (i + n_t - 1) / n_t - 1;
        ComplexMatrix e_i = ComplexMatrix::Zero(n_t, n_r);
        e_i(row, col) = 1.0;
        e_s.block(static_cast<Eigen::Index>(i - 1) * n_r, 0, n_r, n_t) = e_i.transpose();
    }
    return kron(e_s, ComplexMatrix::Identity(l, l));
}

ComplexMatrix block_diag_repeat(const ComplexMatrix& x, int n_r) {
    ComplexMatrix out = ComplexMatrix::Zero(x.rows() * n_r, x.cols() * n_r);
    for (int r = 0; r < n_r; ++r) out.block(r * x.rows(), r * x.cols(), x.rows(), x.cols()) = x;
    return out;
}

} // namespace mimowave
