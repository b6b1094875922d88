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
#include "rsrelay/rates.hpp"
#include "rsrelay/transceiver.hpp"

#include <cstdint>
#include <vector>

namespace rsrelay
{

// Single-user SINRs. Quadratic forms use the true channels.

double sinr_first_hop(const ChannelSet& ch, const CMatrix& W, const SystemConfig& cfg, int k);
double sinr_second_hop_private(const ChannelSet& ch, const CMatrix& F, const SystemConfig& cfg, double t, int k);
double sinr_second_hop_common(const ChannelSet& ch, const CMatrix& F, const CVector& f_c, const SystemConfig& cfg,
                              double t, int k);
double common_min(const RVector& common_sinrs);

/// All per-user SINRs of one realization, evaluated with matrix products.
struct DrawSinrs
{
    RVector first_hop;
    RVector priv;
    RVector common;      ///< zeros for NoRS
    RVector priv_nors;   ///< private SINR of the same precoder at t = 1
    double common_min = 0.0;
};

DrawSinrs evaluate_draw(const ChannelSet& ch, const TransceiverSet& tx, const SystemConfig& cfg);

/// Per-user rates from a set of SINRs (common rate from the min over users).
RateReport rates_from_sinrs(const DrawSinrs& s, const SystemConfig& cfg);

/// Quantities fixed per configuration and shared by every draw.
struct LongTermParams
{
    double lambda = 0.0;
    double t = 1.0;
    RVector q_weights;
};

/// lambda by simulation over cfg.lambda_draws; t and q from the deterministic equivalents.
LongTermParams long_term_params(const SystemConfig& cfg, const LargeScaleProfile& profile, std::uint64_t seed);

DrawSinrs run_single_draw(const SystemConfig& cfg, const LargeScaleProfile& profile, const LongTermParams& lt,
                          std::uint64_t seed, std::uint64_t draw_index);

/// Serial reference loop.
std::vector<DrawSinrs> run_draws_serial(const SystemConfig& cfg, const LargeScaleProfile& profile,
                                        const LongTermParams& lt, int n_draws, std::uint64_t seed);

/// OpenMP fan-out over draws; results are stored by index so the output matches the serial loop bit for bit.
std::vector<DrawSinrs> run_draws_parallel(const SystemConfig& cfg, const LargeScaleProfile& profile,
                                          const LongTermParams& lt, int n_draws, std::uint64_t seed);

/// Ergodic rates: per-user per-hop rates averaged over draws, then combined end to end.
RateReport aggregate_draws(const std::vector<DrawSinrs>& draws, const SystemConfig& cfg, const LongTermParams& lt);

enum class Execution
{
    Serial,
    Parallel
};

RateReport mc_sum_rate(const SystemConfig& cfg, const LargeScaleProfile& profile, int n_draws, std::uint64_t seed,
                       Execution exec = Execution::Parallel);

/// Same, with externally supplied long-term parameters.
RateReport mc_sum_rate(const SystemConfig& cfg, const LargeScaleProfile& profile, const LongTermParams& lt,
                       int n_draws, std::uint64_t seed, Execution exec = Execution::Parallel);

} // namespace rsrelay
