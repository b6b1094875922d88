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

#pragma once

#include "rsrelay/channel.hpp"
#include "rsrelay/config.hpp"

#include <cstdint>
#include <span>

namespace rsrelay
{

/// Relay processing for one channel realization.
struct TransceiverSet
{
    CMatrix W;             ///< N x K MMSE decoder
    CMatrix F;             ///< M x K RZF precoder, sqrt(lambda) included
    CVector f_c;           ///< unit-norm common precoder (empty for NoRS)
    RVector alpha_weights; ///< common-precoder combining weights before renormalization
    double lambda = 0.0;
    double t = 1.0;
    double rho_c = 0.0; ///< common power rho (1 - t)
    double rho_k = 0.0; ///< private power per user rho t / K
};

/// (Ghat Ghat^H + N alpha_SR I)^-1 Ghat, evaluated through the K x K Gram matrix.
CMatrix mmse_decoder(const CMatrix& Ghat_SR, const SystemConfig& cfg);

/// (Ghat Ghat^H + M alpha_RD I)^-1 Ghat, evaluated through the K x K Gram matrix.
CMatrix rzf_precoder_unnormalized(const CMatrix& Ghat_RD, const SystemConfig& cfg);

/// Shared solver: (G G^H + reg I)^-1 G == G (G^H G + reg I)^-1.
CMatrix regularized_inverse_times(const CMatrix& G, double reg);

/// K / mean(samples), where each sample is tr(F0^H F0) for one independent draw.
/// Throws std::runtime_error("zero-power precoder") when the mean is not positive.
double lambda_normalization(int K, std::span<const double> precoder_power_samples);

/// Long-term normalization averaged over `n_avg` independent channel/estimate draws.
double estimate_lambda(const SystemConfig& cfg, const LargeScaleProfile& profile, int n_avg, std::uint64_t seed);

/// Equal-weighted-SINR combining weights: q_k alpha_k^2 sigma_k^4 is the same for all k,
/// with sum alpha_k^2 = 1/M. Throws on non-positive q or sigma2.
RVector common_precoder_weights(int M, const RVector& sigma2_RD, const RVector& q_weights);

struct CommonPrecoder
{
    CVector f_c;
    RVector alpha_weights;
};

/// f_c = sum_k alpha_k ghat_k, renormalized to unit norm.
CommonPrecoder common_precoder(const CMatrix& Ghat_RD, const RVector& sigma2_RD, const RVector& q_weights);

/// t = min(K / (rho Ybar), 1); always 1 for NoRS.
double power_split(const SystemConfig& cfg, double Ybar);

struct PowerAllocation
{
    double t;
    double rho_c;
    double rho_k;
};

PowerAllocation allocate_power(const SystemConfig& cfg, double t);

/// Builds decoder, normalized private precoder and (for RS) the common precoder.
TransceiverSet build_transceivers(const EstimationResult& est, const SystemConfig& cfg, double lambda, double t,
                                  const RVector& q_weights);

} // namespace rsrelay
