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

#include "mimowave/mm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace mimowave {

namespace {

// Quantities at the expansion point X_k shared by all three minorizers.
struct ExpansionPoint {
    ComplexMatrix x_tilde;  // I_{N_R} (x) X_k
    ComplexMatrix r1;       // X~ R_H X~^H + sigma^2 I
    ComplexMatrix r1_inv;
    ComplexMatrix xrx;      // X~ R_H X~^H

    ExpansionPoint(const ComplexMatrix& x_k, const TargetPrior& prior, double sigma2)
        : x_tilde(block_diag_repeat(x_k, prior.n_r())) {
        if (x_k.cols() != prior.n_t())
            throw Error(ErrorCode::DimensionMismatch, "waveform column count must equal N_T");
        if (!(sigma2 > 0.0)) throw Error(ErrorCode::InvalidArgument, "noise power must be positive");
        xrx = x_tilde * prior.r_h() * x_tilde.adjoint();
        xrx = 0.5 * (xrx + xrx.adjoint()).eval();
        r1 = xrx;
        r1.diagonal().array() += sigma2;
        r1_inv = HpdFactor(r1).inverse();
        r1_inv = 0.5 * (r1_inv + r1_inv.adjoint()).eval();
    }
};

ComplexMatrix hermitian_part(const ComplexMatrix& a) {
    return 0.5 * (a + a.adjoint());
}

double real_trace(const ComplexMatrix& a) {
    return a.trace().real();
}

// tr(A B) without forming the product.
Complex trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b) {
    return (a.transpose().array() * b.array()).sum();
}

Part1Coefficients part1_schur(const ExpansionPoint& e, const TargetPrior& prior, double sigma2) {
    const ComplexMatrix& s = prior.r_h_sqrt();
    const ComplexMatrix b = e.x_tilde * s;    // lower-left block of C_A
    const ComplexMatrix v = e.r1_inv * b;     // R1^{-1} X~ R_H^{1/2}
    const Eigen::Index n_tr = s.rows();

    // Schur complement of R1 in C_A; equals (I + R_H^{1/2} X~^H X~ R_H^{1/2} / sigma^2)^{-1}.
    const ComplexMatrix k = hermitian_part(ComplexMatrix::Identity(n_tr, n_tr) - b.adjoint() * v);
    const HpdFactor k_factor(k);
    const ComplexMatrix k_inv = hermitian_part(k_factor.inverse());

    Part1Coefficients out;
    out.t12 = k_inv * v.adjoint();
    out.t22 = hermitian_part(-(v * k_inv * v.adjoint()));
    const ComplexMatrix t11 = -k_inv;

    const double c0 = real_trace(t11) + sigma2 * real_trace(out.t22);
    const double t_dot_c = real_trace(t11) + 2.0 * trace_of_product(out.t12, b).real() +
                           trace_of_product(out.t22, e.r1).real();
    out.c1 = c0 - k_factor.log_det() - t_dot_c;
    return out;
}

Part1Coefficients part1_block(const ExpansionPoint& e, const TargetPrior& prior, double sigma2) {
    const ComplexMatrix& s = prior.r_h_sqrt();
    const Eigen::Index n_tr = s.rows();
    const Eigen::Index n_rl = e.r1.rows();
    const Eigen::Index n = n_tr + n_rl;

    ComplexMatrix c_a(n, n);
    c_a.topLeftCorner(n_tr, n_tr).setIdentity();
    c_a.topRightCorner(n_tr, n_rl) = s * e.x_tilde.adjoint();
    c_a.bottomLeftCorner(n_rl, n_tr) = e.x_tilde * s;
    c_a.bottomRightCorner(n_rl, n_rl) = e.r1;
    c_a = hermitian_part(c_a);
    const HpdFactor c_factor(c_a);

    ComplexMatrix e_a_adj = ComplexMatrix::Zero(n, n_tr);
    e_a_adj.topRows(n_tr).setIdentity();
    const ComplexMatrix y = c_factor.solve(e_a_adj);                // C_A^{-1} E_A^H
    const ComplexMatrix g = hermitian_part(y.topRows(n_tr));        // E_A C_A^{-1} E_A^H
    const HpdFactor g_factor(g);
    const ComplexMatrix t = hermitian_part(-(y * g_factor.solve(ComplexMatrix(y.adjoint()))));

    Part1Coefficients out;
    out.t12 = t.topRightCorner(n_tr, n_rl);
    out.t22 = t.bottomRightCorner(n_rl, n_rl);
    const double c0 = real_trace(t.topLeftCorner(n_tr, n_tr)) + sigma2 * real_trace(out.t22);
    out.c1 = c0 + g_factor.log_det() - trace_of_product(t, c_a).real();
    return out;
}

Part2Coefficients part2_from(const ExpansionPoint& e, const TargetPrior& prior, double sigma2) {
    const ComplexVector a = e.x_tilde * prior.h_d();
    const ComplexVector u = e.r1_inv * a;
    Part2Coefficients out;
    out.z = u * u.adjoint();
    out.w = u * prior.h_d().adjoint();
    out.c2 = -sigma2 * u.squaredNorm();
    return out;
}

Part3Coefficients part3_from(const ExpansionPoint& e) {
    Part3Coefficients out;
    out.r1_inv_sq = hermitian_part(e.r1_inv * e.r1_inv);
    out.c3 = real_trace(e.r1_inv) + trace_of_product(out.r1_inv_sq, e.xrx).real();
    return out;
}

ComplexMatrix xrx_of(const ComplexMatrix& x_tilde, const TargetPrior& prior) {
    return x_tilde * prior.r_h() * x_tilde.adjoint();
}

} // namespace

void MMConfig::validate() const {
    if (!(epsilon > 0.0)) throw Error(ErrorCode::InvalidArgument, "MMConfig: epsilon must be positive");
    if (max_iterations < 1) throw Error(ErrorCode::InvalidArgument, "MMConfig: max_iterations must be >= 1");
    if (!(trs_tolerance > 0.0)) throw Error(ErrorCode::InvalidArgument, "MMConfig: trs_tolerance must be positive");
    if (!(sigma2 > 0.0)) throw Error(ErrorCode::InvalidArgument, "MMConfig: sigma2 must be positive");
}

ComplexMatrix nominal_design(const ComplexMatrix& h_d, double energy_budget, int code_length) {
    if (h_d.size() == 0 || h_d.isZero(0.0)) throw Error(ErrorCode::ZeroResponse, "nominal_design: H_d is zero");
    if (code_length < 1 || !(energy_budget > 0.0))
        throw Error(ErrorCode::InvalidArgument, "nominal_design: need L >= 1 and P_t > 0");
    const HermitianEig eig = herm_eig(h_d * h_d.adjoint());
    const ComplexVector v = eig.eigenvectors.col(eig.eigenvectors.cols() - 1);
    const ComplexVector u = ComplexVector::Constant(code_length, 1.0 / std::sqrt(static_cast<double>(code_length)));
    return std::sqrt(energy_budget) * u * v.adjoint();
}

Part1Coefficients part1_coefficients(const ComplexMatrix& x_k, const TargetPrior& prior, double sigma2,
                                     Part1Route route) {
    const ExpansionPoint e(x_k, prior, sigma2);
    return route == Part1Route::Schur ? part1_schur(e, prior, sigma2) : part1_block(e, prior, sigma2);
}

Part2Coefficients part2_coefficients(const ComplexMatrix& x_k, const TargetPrior& prior, double sigma2) {
    return part2_from(ExpansionPoint(x_k, prior, sigma2), prior, sigma2);
}

Part3Coefficients part3_coefficients(const ComplexMatrix& x_k, const TargetPrior& prior, double sigma2) {
    return part3_from(ExpansionPoint(x_k, prior, sigma2));
}

SurrogateCoefficients surrogate_coefficients(const ComplexMatrix& x_k, const TargetPrior& prior, double sigma2) {
    const ExpansionPoint e(x_k, prior, sigma2);
    Part1Coefficients p1 = part1_schur(e, prior, sigma2);
    Part2Coefficients p2 = part2_from(e, prior, sigma2);
    Part3Coefficients p3 = part3_from(e);
    return {std::move(p1.t12), std::move(p1.t22), std::move(p2.w), std::move(p2.z), std::move(p3.r1_inv_sq),
            p1.c1, p2.c2, p3.c3};
}

double part1_surrogate(const Part1Coefficients& c, const ComplexMatrix& x, const TargetPrior& prior) {
    const ComplexMatrix x_tilde = block_diag_repeat(x, prior.n_r());
    return c.c1 + 2.0 * trace_of_product(x_tilde * prior.r_h_sqrt(), c.t12).real() +
           trace_of_product(c.t22, xrx_of(x_tilde, prior)).real();
}

double part2_surrogate(const Part2Coefficients& c, const ComplexMatrix& x, const TargetPrior& prior) {
    const ComplexMatrix x_tilde = block_diag_repeat(x, prior.n_r());
    return c.c2 - trace_of_product(c.z, xrx_of(x_tilde, prior)).real() +
           2.0 * trace_of_product(x_tilde.adjoint(), c.w).real();
}

double part3_surrogate(const Part3Coefficients& c, const ComplexMatrix& x, const TargetPrior& prior) {
    const ComplexMatrix x_tilde = block_diag_repeat(x, prior.n_r());
    return c.c3 - trace_of_product(c.r1_inv_sq, xrx_of(x_tilde, prior)).real();
}

double total_surrogate(const SurrogateCoefficients& c, const ComplexMatrix& x, const TargetPrior& prior,
                       double sigma2) {
    const double n_rl = static_cast<double>(x.rows()) * prior.n_r();
    return part1_surrogate({c.t12, c.t22, c.c1}, x, prior) + part2_surrogate({c.w, c.z, c.c2}, x, prior) +
           sigma2 * part3_surrogate({c.r1_inv_sq, c.c3}, x, prior) - n_rl;
}

namespace {

void quadratic_kernels(const SurrogateCoefficients& c, const TargetPrior& prior, double sigma2,
                       ComplexMatrix& p_k, ComplexMatrix& q_k) {
    p_k = c.t12.adjoint() * prior.r_h_sqrt() + c.w;
    q_k = hermitian_part(c.t22 - c.z - sigma2 * c.r1_inv_sq);
}

void check_coefficients(const SurrogateCoefficients& c, const TargetPrior& prior, int code_length) {
    const Eigen::Index n_rl = static_cast<Eigen::Index>(code_length) * prior.n_r();
    const Eigen::Index n_tr = prior.n_tr();
    if (code_length < 1 || c.t12.rows() != n_tr || c.t12.cols() != n_rl || c.t22.rows() != n_rl ||
        c.t22.cols() != n_rl || c.w.rows() != n_rl || c.w.cols() != n_tr || c.z.rows() != n_rl ||
        c.z.cols() != n_rl || c.r1_inv_sq.rows() != n_rl || c.r1_inv_sq.cols() != n_rl)
        throw Error(ErrorCode::DimensionMismatch, "assemble_quadratic: coefficient sizes inconsistent with prior/L");
}

} // namespace

QuadraticForm assemble_quadratic(const SurrogateCoefficients& c, const TargetPrior& prior, int code_length,
                                 double sigma2) {
    check_coefficients(c, prior, code_length);
    ComplexMatrix p_k, q_k;
    quadratic_kernels(c, prior, sigma2, p_k, q_k);

    const Eigen::Index l = code_length;
    const Eigen::Index n_t = prior.n_t();
    const int n_r = prior.n_r();
    const ComplexMatrix r_h_conj = prior.r_h().conjugate();

    // X(l, t) sits at X~(r L + l, r N_T + t) for every r, so
    //   M = sum_{r, r'} conj(R_H)[r, r' block] (x) Q_k[r, r' block],
    //   m = sum_r vec(P_k[r, r block]).
    QuadraticForm out{ComplexMatrix::Zero(l * n_t, l * n_t), ComplexVector::Zero(l * n_t)};
    for (int r = 0; r < n_r; ++r) {
        for (int rp = 0; rp < n_r; ++rp) {
            const auto r_blk = r_h_conj.block(r * n_t, rp * n_t, n_t, n_t);
            const auto q_blk = q_k.block(r * l, rp * l, l, l);
            for (Eigen::Index t = 0; t < n_t; ++t)
                for (Eigen::Index tp = 0; tp < n_t; ++tp)
                    out.m_mat.block(t * l, tp * l, l, l) += r_blk(t, tp) * q_blk;
        }
        out.m_vec += p_k.block(r * l, r * n_t, l, n_t).reshaped();
    }
    out.m_mat = hermitian_part(out.m_mat);
    return out;
}

QuadraticForm assemble_quadratic_explicit(const SurrogateCoefficients& c, const TargetPrior& prior,
                                          int code_length, double sigma2) {
    check_coefficients(c, prior, code_length);
    ComplexMatrix p_k, q_k;
    quadratic_kernels(c, prior, sigma2, p_k, q_k);
    const ComplexMatrix b_s = selection_matrix(prior.n_t(), prior.n_r(), code_length);
    const ComplexMatrix m_tilde = kron(prior.r_h().conjugate(), q_k);
    QuadraticForm out;
    out.m_mat = hermitian_part(b_s.adjoint() * m_tilde * b_s);
    out.m_vec = b_s.adjoint() * vec(p_k);
    return out;
}

TrsSolution trs_solve(const ComplexMatrix& m_mat, const ComplexVector& m_vec, double energy, double tol) {
    if (!(energy > 0.0)) throw Error(ErrorCode::InvalidArgument, "trs_solve: energy budget must be positive");
    if (m_mat.rows() != m_mat.cols() || m_mat.rows() != m_vec.size())
        throw Error(ErrorCode::DimensionMismatch, "trs_solve: M must be square and match m");

    const HermitianEig eig = herm_eig(m_mat);
    const RealVector& lambda = eig.eigenvalues;
    const ComplexMatrix& u = eig.eigenvectors;
    const Eigen::Index n = lambda.size();
    const ComplexVector b = u.adjoint() * m_vec;
    const double lambda_max = lambda(n - 1);
    const double m_norm = m_vec.norm();
    const double eig_scale = std::max(1.0, lambda.cwiseAbs().maxCoeff());

    TrsSolution sol;
    if (m_norm == 0.0) {
        if (lambda_max > 0.0) {
            sol.x = std::sqrt(energy) * u.col(n - 1);
            sol.multiplier = -lambda_max;
            sol.hard_case = true;
        } else {
            sol.x = ComplexVector::Zero(n);
        }
        return sol;
    }

    // Interior stationary point when M is negative definite.
    if (lambda_max < 0.0) {
        const RealVector inv = (-lambda).cwiseInverse();
        const ComplexVector coeff = b.cwiseProduct(inv.cast<Complex>());
        if (coeff.squaredNorm() <= energy) {
            sol.x = u * coeff;
            return sol;
        }
    }

    // Boundary: x(mu) = U (b ./ (mu - lambda)), mu = -nu > lambda_max, ||x(mu)||^2 = energy.
    const double top_tol = 1e-10 * eig_scale;
    bool top_empty = true;
    for (Eigen::Index i = 0; i < n; ++i)
        if (lambda(i) >= lambda_max - top_tol && std::abs(b(i)) >= 1e-10 * m_norm) top_empty = false;

    auto phi = [&](double mu) {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) acc += std::norm(b(i)) / ((mu - lambda(i)) * (mu - lambda(i)));
        return acc;
    };
    auto x_at = [&](double mu) {
        ComplexVector coeff(n);
        for (Eigen::Index i = 0; i < n; ++i) coeff(i) = b(i) / (mu - lambda(i));
        return coeff;
    };

    if (top_empty && lambda_max >= 0.0) {
        double phi_rest = 0.0;
        ComplexVector coeff = ComplexVector::Zero(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (lambda(i) >= lambda_max - top_tol) continue;
            coeff(i) = b(i) / (lambda_max - lambda(i));
            phi_rest += std::norm(coeff(i));
        }
        if (phi_rest <= energy) {
            coeff(n - 1) += std::sqrt(energy - phi_rest);
            sol.x = u * coeff;
            sol.multiplier = -lambda_max;
            sol.hard_case = true;
            return sol;
        }
    }

    double lo = lambda_max;
    double hi = lambda_max + m_norm / std::sqrt(energy) + 1.0;
    double mu = hi;
    const double target = 1.0 / std::sqrt(energy);
    bool found = false;
    for (int it = 0; it < 500; ++it) {
        const double f = phi(mu);
        if (std::abs(f - energy) <= tol * energy) {
            found = true;
            break;
        }
        if (f > energy) lo = mu;
        else hi = mu;

        // Newton on psi(mu) = 1/sqrt(phi(mu)) - 1/sqrt(energy), nearly linear in mu.
        double dphi = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double d = mu - lambda(i);
            dphi += -2.0 * std::norm(b(i)) / (d * d * d);
        }
        const double psi = 1.0 / std::sqrt(f) - target;
        const double dpsi = -0.5 * dphi / (f * std::sqrt(f));
        double next = mu - psi / dpsi;
        if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
        if (next == mu) {
            found = std::abs(f - energy) <= 1e-6 * energy;
            break;
        }
        mu = next;
    }
    if (!found) throw Error(ErrorCode::NoRoot, "trs_solve: secular equation did not reach tolerance");

    ComplexVector coeff = x_at(mu);
    const double sq = coeff.squaredNorm();
    if (sq > energy) coeff *= std::sqrt(energy / sq);
    sol.x = u * coeff;
    sol.multiplier = -mu;
    return sol;
}

ComplexMatrix random_init(const Scenario& scenario, Rng& rng) {
    const int l = scenario.code_length;
    const int n_t = scenario.n_t();
    if (l < n_t) throw Error(ErrorCode::InvalidArgument, "random_init: code length must be >= N_T");
    if (!(scenario.energy_budget > 0.0)) throw Error(ErrorCode::InvalidArgument, "random_init: P_t must be positive");
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    const double amp = std::sqrt(scenario.energy_budget / (static_cast<double>(l) * n_t));
    ComplexMatrix x(l, n_t);
    for (int t = 0; t < n_t; ++t)
        for (int i = 0; i < l; ++i) x(i, t) = std::polar(amp, phase(rng));
    return x;
}

MMTrace optimize(const Scenario& scenario, const TargetPrior& prior, const MMConfig& config,
                 const std::optional<ComplexMatrix>& x0) {
    scenario.validate();
    config.validate();
    const double energy = scenario.energy_budget;
    const int l = scenario.code_length;
    const double sigma2 = config.sigma2;
    if (prior.n_t() != scenario.n_t() || prior.n_r() != scenario.n_r())
        throw Error(ErrorCode::DimensionMismatch, "optimize: prior does not match the scenario arrays");

    ComplexMatrix x;
    if (x0) {
        if (x0->rows() != l || x0->cols() != scenario.n_t())
            throw Error(ErrorCode::DimensionMismatch, "optimize: X0 must be L x N_T");
        if (x0->squaredNorm() > energy * (1.0 + 1e-9))
            throw Error(ErrorCode::InvalidArgument, "optimize: X0 exceeds the energy budget");
        x = *x0;
    } else {
        Rng rng = make_stream(scenario.seed, 0, 1);
        x = random_init(scenario, rng);
    }

    MMTrace trace;
    double d_prev = relative_entropy(x, prior, sigma2);
    trace.iterates.push_back({x, d_prev, 0.0, x.squaredNorm()});

    for (int k = 1; k <= config.max_iterations; ++k) {
        const SurrogateCoefficients coeffs = surrogate_coefficients(x, prior, sigma2);
        const QuadraticForm quad = assemble_quadratic(coeffs, prior, l, sigma2);
        const TrsSolution sol = trs_solve(quad.m_mat, quad.m_vec, energy, config.trs_tolerance);
        x = unvec(sol.x, l, scenario.n_t());
        const double d = relative_entropy(x, prior, sigma2);
        trace.iterates.push_back({x, d, sol.multiplier, x.squaredNorm()});
        trace.iterations_used = k;

        const double rel_change = std::abs(d - d_prev) / std::max(std::abs(d), 1e-300);
        d_prev = d;
        if (rel_change < config.epsilon) {
            trace.converged = true;
            break;
        }
    }
    return trace;
}

} // namespace mimowave
