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
#include <string>

#include <Eigen/Dense>

namespace rsrelay
{

enum class RateSource
{
    MonteCarlo,
    DeterministicEquivalent
};

std::string_view to_string(RateSource s);

/// Per-user and sum rates in bits/s/Hz, prelog included.
struct RateReport
{
    Eigen::VectorXd R_SR;
    Eigen::VectorXd R_RD_private;
    double R_c = 0.0;
    Eigen::VectorXd R_end2end;
    double sum_rate = 0.0;

    double rate_hop1 = 0.0; ///< sum of R_SR
    double rate_hop2 = 0.0; ///< R_c + sum of private rates
    double t = 1.0;
    double lambda = 0.0;

    /// Standard error of the per-draw instantaneous sum rate (MC only).
    double sum_rate_stderr = 0.0;

    struct Meta
    {
        SystemConfig cfg;
        RateSource source = RateSource::MonteCarlo;
        int n_draws = 0;
        std::uint64_t seed = 0;
    } meta;
};

/// prelog * log2(1 + sinr)
double rate_from_sinr(double sinr, const SystemConfig& cfg);

/// min(R_SR_k, R_RD_private_k + R_c / K), the common rate shared equally.
Eigen::VectorXd end_to_end(const Eigen::VectorXd& R_SR, const Eigen::VectorXd& R_RD_private, double R_c);

/// Fills the derived fields (end-to-end, sums) from the per-hop rates.
void finalize_report(RateReport& report);

} // namespace rsrelay
