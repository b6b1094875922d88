// SPDX-License-Identifier: Apache-2.0
//
// rsrelay - rate-splitting multi-pair massive MIMO relay simulator
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

#include "rsrelay/deteq.hpp"
#include "rsrelay/transceiver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rsrelay
{

namespace
{
double t_of(const RVector& c, const RVector& delta, int n, double alpha)
{
    const double s = c.size() == 0 ? 0.0 : (c.array() / (1.0 + delta.array())).sum();
    return 1.0 / (s / static_cast<double>(n) + alpha);
}
} // namespace

FixedPointSolution solve_fixed_point(const RVector& c, int n, double alpha, double tol, int max_iter)
{
    if (!(alpha > 0.0))
        throw std::invalid_argument("solve_fixed_point: alpha must be positive");
    if (!(tol > 0.0))
        throw std::invalid_argument("solve_fixed_point: tol must be positive");
    if (n < 1)
        throw std::invalid_argument("solve_fixed_point: dimension must be positive");
    if ((c.array() <= 0.0).any())
        throw std::invalid_argument("solve_fixed_point: covariance traces must be positive");

    FixedPointSolution fp;
    fp.delta = RVector::Constant(c.size(), 1.0 / alpha);
    if (c.size() == 0)
    {
        fp.t_scalar = 1.0 / alpha;
        return fp;
    }
    constexpr double damping = 0.5;
    double residual = 0.0;
    for (int it = 1; it <= max_iter; ++it)
    {
        const RVector target = c * t_of(c, fp.delta, n, alpha);
        const RVector next = damping * fp.delta + (1.0 - damping) * target;
        residual = (next - fp.delta).cwiseAbs().maxCoeff();
        fp.delta = next;
        fp.iterations = it;
        // Relative scaling: delta ~ 1/alpha at high SNR, where an absolute 1e-12 is below one ulp.
        if (residual < tol * std::max(1.0, fp.delta.cwiseAbs().maxCoeff()))
        {
            fp.residual = residual;
            fp.t_scalar = t_of(c, fp.delta, n, alpha);
            return fp;
        }
    }
    throw ConvergenceError("solve_fixed_point: no convergence after " + std::to_string(max_iter) +
                               " iterations (residual " + std::to_string(residual) + ")",
                           residual);
}

DerivativeSolution solve_derivative(const FixedPointSolution& fp, const RVector& c, double kappa, int n)
{
    const auto K = c.size();
    if (fp.delta.size() != K)
        throw std::invalid_argument("solve_derivative: fixed point and covariances differ in length");
    DerivativeSolution out;
    out.delta_prime = RVector::Zero(K);
    const double t2 = fp.t_scalar * fp.t_scalar;
    if (K == 0)
    {
        out.t_prime_scalar = t2 * kappa;
        return out;
    }
    const RVector w = c.array() / (static_cast<double>(n) * (1.0 + fp.delta.array()).square());
    // A = t^2 c w^T is rank one, so its spectral radius is t^2 w^T c.
    out.spectral_radius = t2 * w.dot(c);
    if (!(out.spectral_radius < 1.0))
        throw std::runtime_error("solve_derivative: singular derivative system");

    const Eigen::MatrixXd A = t2 * c * w.transpose();
    const RVector b = t2 * kappa * c;
    const Eigen::MatrixXd I_minus_A = Eigen::MatrixXd::Identity(K, K) - A;
    out.delta_prime = I_minus_A.partialPivLu().solve(b);
    out.t_prime_scalar = t2 * kappa + t2 * w.dot(out.delta_prime);
    return out;
}

RVector estimate_variances(const RVector& beta, const SystemConfig& cfg)
{
    if (cfg.csit_mode == CsitMode::Perfect)
        return beta;
    RVector s(beta.size());
    for (Eigen::Index k = 0; k < beta.size(); ++k)
        s(k) = estimation_variance(beta(k), cfg.tau, cfg.p_tr);
    return s;
}

double si_trace_density(const SystemConfig& cfg)
{
    return cfg.duplex_mode == DuplexMode::FD ? cfg.sigma2_SI * static_cast<double>(cfg.M) : 0.0;
}

FirstHopDE de_first_hop(const SystemConfig& cfg, const RVector& sigma2_SR, const RVector& beta_SR)
{
    cfg.validate();
    const int K = cfg.K;
    const double N = static_cast<double>(cfg.N);
    const double alpha = cfg.effective_alpha_sr();
    const auto fp = solve_fixed_point(sigma2_SR, cfg.N, alpha);
    const auto dv = solve_derivative(fp, sigma2_SR, 1.0, cfg.N);

    FirstHopDE out;
    out.delta = fp.delta;
    out.delta_noise = dv.delta_prime;
    out.si_trace = si_trace_density(cfg);
    out.mu = Eigen::MatrixXd::Zero(K, K);
    const RVector err = beta_SR - sigma2_SR;
    for (int j = 0; j < K; ++j)
    {
        const double leak = err(j) + sigma2_SR(j) / std::pow(1.0 + out.delta(j), 2);
        for (int k = 0; k < K; ++k)
            if (j != k)
                out.mu(j, k) = out.delta_noise(k) * leak;
    }

    out.sinr.resize(K);
    const double rho = cfg.rho;
    for (int k = 0; k < K; ++k)
    {
        const double dk = out.delta(k);
        const double dn = out.delta_noise(k);
        // Common factor 1/(1+delta_k)^2 cancels between numerator and denominator.
        const double num = rho * (dk * dk + err(k) * dn / N);
        const double interf = rho * out.mu.col(k).sum() / N;
        const double den = interf + dn / N + out.si_trace * dn / N;
        out.sinr(k) = num / den;
    }
    return out;
}

double de_lambda_bar(const RVector& delta, const RVector& delta_prime, int M)
{
    const double mean = (delta_prime.array() / (1.0 + delta.array()).square()).sum() / static_cast<double>(M);
    if (!(mean > 0.0))
        throw std::runtime_error("de_lambda_bar: non-positive precoder power");
    return static_cast<double>(delta.size()) / mean;
}

Eigen::MatrixXd de_Q(const RVector& delta, const RVector& delta_prime, const RVector& sigma2, const RVector& beta,
                     int M)
{
    const auto K = delta.size();
    Eigen::MatrixXd Q(K, K);
    for (Eigen::Index j = 0; j < K; ++j)
    {
        const double pj = delta_prime(j) / std::pow(1.0 + delta(j), 2);
        for (Eigen::Index k = 0; k < K; ++k)
        {
            const double err = beta(k) - sigma2(k);
            if (j == k)
                Q(k, k) = static_cast<double>(M) * delta(k) * delta(k) + err * delta_prime(k);
            else
                Q(j, k) = pj * (sigma2(k) + err * std::pow(1.0 + delta(k), 2));
        }
    }
    return Q;
}

SecondHopBasis de_second_hop_basis(const SystemConfig& cfg, const RVector& sigma2_RD, const RVector& beta_RD)
{
    cfg.validate();
    const auto fp = solve_fixed_point(sigma2_RD, cfg.M, cfg.effective_alpha_rd());
    const auto dv = solve_derivative(fp, sigma2_RD, 1.0, cfg.M);
    SecondHopBasis b;
    b.sigma2 = sigma2_RD;
    b.beta = beta_RD;
    b.delta = fp.delta;
    b.delta_prime = dv.delta_prime;
    b.lambda_bar = de_lambda_bar(b.delta, b.delta_prime, cfg.M);
    b.Q = de_Q(b.delta, b.delta_prime, b.sigma2, b.beta, cfg.M);
    return b;
}

namespace
{
// lambda_bar * sum_{j in set} Q_jk / (M (1+delta_k)^2) per user, with or without the own term.
RVector leakage(const SecondHopBasis& b, int M, bool include_own)
{
    const auto K = b.delta.size();
    RVector out(K);
    for (Eigen::Index k = 0; k < K; ++k)
    {
        double s = b.Q.col(k).sum();
        if (!include_own)
            s -= b.Q(k, k);
        out(k) = b.lambda_bar * s / (static_cast<double>(M) * std::pow(1.0 + b.delta(k), 2));
    }
    return out;
}
} // namespace

double de_ybar(const SystemConfig& cfg, const SecondHopBasis& basis)
{
    const RVector interf = leakage(basis, cfg.M, false);
    return interf.mean() / static_cast<double>(cfg.K);
}

double de_ybar_literal(const SystemConfig& cfg, const SecondHopBasis& basis)
{
    const double K = static_cast<double>(cfg.K);
    const double M = static_cast<double>(cfg.M);
    double acc = 0.0;
    for (int k = 0; k < cfg.K; ++k)
    {
        const double d = basis.delta(k);
        const double interf = basis.Q.col(k).sum() - basis.Q(k, k);
        acc += basis.lambda_bar / K * d * d / (basis.lambda_bar / K * interf / M + (1.0 + d) * (1.0 + d));
    }
    return acc / K;
}

RVector de_q_weights(const SystemConfig& cfg, const SecondHopBasis& basis, double t)
{
    const RVector all = leakage(basis, cfg.M, true);
    const double p = cfg.rho * t / static_cast<double>(cfg.K);
    return (p * all.array() + 1.0).inverse().matrix();
}

RVector de_common_gain(int M, const RVector& sigma2, const RVector& beta, const RVector& alpha_weights)
{
    const double Md = static_cast<double>(M);
    const RVector a2 = alpha_weights.array().square();
    const double norm2 = Md * a2.dot(sigma2);
    const double cross_total = a2.dot(sigma2) * Md;
    RVector g(sigma2.size());
    for (Eigen::Index k = 0; k < sigma2.size(); ++k)
    {
        const double s = sigma2(k);
        const double own = a2(k) * (s * s * (Md * Md + Md) + (beta(k) - s) * s * Md);
        const double cross = beta(k) * (cross_total - a2(k) * s * Md);
        g(k) = (own + cross) / norm2;
    }
    return g;
}

SecondHopSinrs de_second_hop(const SystemConfig& cfg, const SecondHopBasis& basis, const RVector& alpha_weights,
                             double t, CommonNumerator convention)
{
    const auto pa = allocate_power(cfg, t);
    const int K = cfg.K;
    const RVector others = leakage(basis, cfg.M, false);
    const RVector all = leakage(basis, cfg.M, true);

    SecondHopSinrs out;
    out.priv.resize(K);
    out.common = RVector::Zero(K);
    for (int k = 0; k < K; ++k)
    {
        const double own = all(k) - others(k);
        out.priv(k) = pa.rho_k * own / (pa.rho_k * others(k) + 1.0);
    }
    if (cfg.strategy == Strategy::RS && pa.rho_c > 0.0)
    {
        const RVector gain = de_common_gain(cfg.M, basis.sigma2, basis.beta, alpha_weights);
        const double s_c = convention == CommonNumerator::LambdaScaled ? basis.lambda_bar : 1.0;
        for (int k = 0; k < K; ++k)
            out.common(k) = pa.rho_c * s_c * gain(k) / (pa.rho_k * all(k) + 1.0);
    }
    out.common_min = K > 0 ? out.common.minCoeff() : 0.0;
    return out;
}

DeterministicEquivalents compute_de(const SystemConfig& cfg, const LargeScaleProfile& profile)
{
    cfg.validate();
    profile.validate(cfg.K);
    DeterministicEquivalents de;
    const RVector s_SR = estimate_variances(profile.beta_SR, cfg);
    const RVector s_RD = estimate_variances(profile.beta_RD, cfg);
    de.first_hop = de_first_hop(cfg, s_SR, profile.beta_SR);
    de.second_hop = de_second_hop_basis(cfg, s_RD, profile.beta_RD);
    de.Ybar = de_ybar(cfg, de.second_hop);
    // A single user sees no interference, so there is nothing for the common message to absorb.
    de.t = de.Ybar > 0.0 ? power_split(cfg, de.Ybar) : 1.0;
    de.q_weights = de_q_weights(cfg, de.second_hop, de.t);
    if (cfg.strategy == Strategy::RS)
        de.alpha_weights = common_precoder_weights(cfg.M, s_RD, de.q_weights);
    de.sinr = de_second_hop(cfg, de.second_hop, de.alpha_weights, de.t);

    RateReport& r = de.rates;
    r.R_SR = de.first_hop.sinr.unaryExpr([&](double g) { return rate_from_sinr(g, cfg); });
    r.R_RD_private = de.sinr.priv.unaryExpr([&](double g) { return rate_from_sinr(g, cfg); });
    r.R_c = cfg.strategy == Strategy::RS ? rate_from_sinr(de.sinr.common_min, cfg) : 0.0;
    r.t = de.t;
    r.lambda = de.second_hop.lambda_bar;
    r.meta.cfg = cfg;
    r.meta.source = RateSource::DeterministicEquivalent;
    finalize_report(r);
    return de;
}

RateReport de_sum_rate(const SystemConfig& cfg, const LargeScaleProfile& profile)
{
    return compute_de(cfg, profile).rates;
}

} // namespace rsrelay
