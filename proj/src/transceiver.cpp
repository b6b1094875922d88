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

#include "rsrelay/transceiver.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace rsrelay
{

CMatrix regularized_inverse_times(const CMatrix& G, double reg)
{
    if (!(reg > 0.0))
        throw std::invalid_argument("regularized_inverse_times: regularization must be positive");
    // Push-through identity keeps the solve at K x K instead of antennas x antennas.
    CMatrix gram = G.adjoint() * G;
    gram.diagonal().array() += reg;
    Eigen::LLT<CMatrix> llt(gram);
    if (llt.info() != Eigen::Success)
        throw std::runtime_error("regularized_inverse_times: Cholesky failed");
    const CMatrix eye = CMatrix::Identity(G.cols(), G.cols());
    return G * llt.solve(eye);
}

CMatrix mmse_decoder(const CMatrix& Ghat_SR, const SystemConfig& cfg)
{
    return regularized_inverse_times(Ghat_SR, static_cast<double>(Ghat_SR.rows()) * cfg.effective_alpha_sr());
}

CMatrix rzf_precoder_unnormalized(const CMatrix& Ghat_RD, const SystemConfig& cfg)
{
    return regularized_inverse_times(Ghat_RD, static_cast<double>(Ghat_RD.rows()) * cfg.effective_alpha_rd());
}

double lambda_normalization(int K, std::span<const double> precoder_power_samples)
{
    if (precoder_power_samples.empty())
        throw std::invalid_argument("lambda_normalization: need at least one sample");
    const double mean = std::accumulate(precoder_power_samples.begin(), precoder_power_samples.end(), 0.0) /
                        static_cast<double>(precoder_power_samples.size());
    if (!(mean > 0.0))
        throw std::runtime_error("zero-power precoder");
    return static_cast<double>(K) / mean;
}

double estimate_lambda(const SystemConfig& cfg, const LargeScaleProfile& profile, int n_avg, std::uint64_t seed)
{
    if (n_avg < 1)
        throw std::invalid_argument("estimate_lambda: n_avg must be >= 1");
    std::vector<double> samples(static_cast<std::size_t>(n_avg));
    // Own stream tag so lambda never reuses the data draws it normalizes.
    const std::uint64_t lambda_seed = seed ^ 0x9e3779b97f4a7c15ULL;
    for (int d = 0; d < n_avg; ++d)
    {
        const auto ch = draw_channels(cfg, profile, lambda_seed, static_cast<std::uint64_t>(d));
        const auto est = mmse_estimate(ch, cfg, lambda_seed, static_cast<std::uint64_t>(d));
        const CMatrix F0 = rzf_precoder_unnormalized(est.Ghat_RD, cfg);
        samples[static_cast<std::size_t>(d)] = F0.squaredNorm();
    }
    return lambda_normalization(cfg.K, samples);
}

RVector common_precoder_weights(int M, const RVector& sigma2_RD, const RVector& q_weights)
{
    const auto K = sigma2_RD.size();
    if (q_weights.size() != K)
        throw std::invalid_argument("common_precoder_weights: length mismatch");
    if ((q_weights.array() <= 0.0).any() || !q_weights.allFinite())
        throw std::invalid_argument("degenerate common-message weight");
    if ((sigma2_RD.array() <= 0.0).any())
        throw std::invalid_argument("common_precoder_weights: estimate variances must be positive");

    // Equalize q_k alpha_k^2 sigma_k^4 across users under sum alpha^2 = 1/M.
    const RVector strength = q_weights.array() * sigma2_RD.array().square();
    const double inv_sum = strength.cwiseInverse().sum();
    RVector alpha(K);
    for (Eigen::Index k = 0; k < K; ++k)
        alpha(k) = 1.0 / std::sqrt(static_cast<double>(M) * strength(k) * inv_sum);
    return alpha;
}

CommonPrecoder common_precoder(const CMatrix& Ghat_RD, const RVector& sigma2_RD, const RVector& q_weights)
{
    CommonPrecoder out;
    out.alpha_weights = common_precoder_weights(static_cast<int>(Ghat_RD.rows()), sigma2_RD, q_weights);
    out.f_c = Ghat_RD * out.alpha_weights.cast<std::complex<double>>();
    const double norm = out.f_c.norm();
    if (!(norm > 0.0))
        throw std::runtime_error("common_precoder: zero-norm combination");
    out.f_c /= norm;
    return out;
}

double power_split(const SystemConfig& cfg, double Ybar)
{
    if (cfg.strategy == Strategy::NoRS)
        return 1.0;
    if (!(Ybar > 0.0))
        throw std::invalid_argument("power_split: Ybar must be positive");
    if (!(cfg.rho > 0.0))
        return 1.0;
    return std::min(static_cast<double>(cfg.K) / (cfg.rho * Ybar), 1.0);
}

PowerAllocation allocate_power(const SystemConfig& cfg, double t)
{
    if (cfg.strategy == Strategy::NoRS)
        t = 1.0;
    if (!(t > 0.0 && t <= 1.0))
        throw std::invalid_argument("allocate_power: t must lie in (0, 1]");
    const double rho_k = cfg.rho * t / static_cast<double>(cfg.K);
    // rho_c is formed as the remainder so the bookkeeping sums exactly to rho.
    const double rho_c = cfg.strategy == Strategy::RS ? cfg.rho - rho_k * static_cast<double>(cfg.K) : 0.0;
    return {t, std::max(rho_c, 0.0), rho_k};
}

TransceiverSet build_transceivers(const EstimationResult& est, const SystemConfig& cfg, double lambda, double t,
                                  const RVector& q_weights)
{
    if (!(lambda > 0.0))
        throw std::invalid_argument("build_transceivers: lambda must be positive");
    TransceiverSet tx;
    tx.W = mmse_decoder(est.Ghat_SR, cfg);
    tx.F = std::sqrt(lambda) * rzf_precoder_unnormalized(est.Ghat_RD, cfg);
    tx.lambda = lambda;
    const auto pa = allocate_power(cfg, t);
    tx.t = pa.t;
    tx.rho_c = pa.rho_c;
    tx.rho_k = pa.rho_k;
    if (cfg.strategy == Strategy::RS)
    {
        auto cp = common_precoder(est.Ghat_RD, est.sigma2_RD, q_weights);
        tx.f_c = std::move(cp.f_c);
        tx.alpha_weights = std::move(cp.alpha_weights);
    }
    return tx;
}

} // namespace rsrelay
