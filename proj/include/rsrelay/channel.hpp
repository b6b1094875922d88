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

#include "rsrelay/config.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace rsrelay
{

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// One block-fading realization of both hops and the relay loop channel.
struct ChannelSet
{
    CMatrix G_SR; ///< N x K, source -> relay receive array
    CMatrix G_RD; ///< M x K, relay transmit array -> destination
    CMatrix G_RR; ///< N x M, relay transmit array -> relay receive array
    LargeScaleProfile profile;
};

struct EstimationResult
{
    CMatrix Ghat_SR; ///< N x K
    CMatrix Ghat_RD; ///< M x K
    CMatrix E_SR;
    CMatrix E_RD;
    RVector sigma2_SR; ///< per-user variance of the estimate entries
    RVector sigma2_RD;
};

ChannelSet draw_channels(const SystemConfig& cfg, const LargeScaleProfile& profile, std::uint64_t seed,
                         std::uint64_t draw_index = 0);

/// tau*p_tr*beta^2 / (tau*p_tr*beta + 1)
double estimation_variance(double beta, int tau, double p_tr);

/// MMSE estimate from the pilot-correlated observation g_k + n_k / sqrt(tau*p_tr).
/// Perfect CSIT returns the true channel with a zero error matrix.
EstimationResult mmse_estimate(const ChannelSet& channels, const SystemConfig& cfg, std::uint64_t seed,
                               std::uint64_t draw_index = 0);

// Regression fixtures: a sequence of named complex matrices.
//   magic "RSRF", u32 version, u32 block count, then per block:
//   u32 name length, name bytes, u64 rows, u64 cols, rows*cols (re, im) f64 pairs, row-major.
// All integers and floats little-endian.
using NamedMatrix = std::pair<std::string, CMatrix>;

void write_fixture(const std::filesystem::path& path, const std::vector<NamedMatrix>& blocks);
std::vector<NamedMatrix> read_fixture(const std::filesystem::path& path);

/// Channel and estimate blocks in a fixed order: G_SR, G_RD, G_RR, Ghat_SR, Ghat_RD,
/// E_SR, E_RD, beta_SR, beta_RD, sigma2_SR, sigma2_RD (vectors stored as K x 1).
std::vector<NamedMatrix> fixture_blocks(const ChannelSet& channels, const EstimationResult& est);

} // namespace rsrelay
