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

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <Eigen/Dense>
#include <json.hpp>

namespace rsrelay
{

enum class DuplexMode
{
    FD,
    HD
};

enum class Strategy
{
    RS,
    NoRS
};

enum class CsitMode
{
    Perfect,
    Imperfect
};

std::string_view to_string(DuplexMode m);
std::string_view to_string(Strategy s);
std::string_view to_string(CsitMode c);

DuplexMode parse_duplex(std::string_view s);
Strategy parse_strategy(std::string_view s);
CsitMode parse_csit(std::string_view s);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

/// All scalar system parameters. Powers are linear; dB conversion happens at the CLI boundary.
struct SystemConfig
{
    int K = 10;   ///< source/destination pairs
    int N = 100;  ///< relay receive antennas
    int M = 100;  ///< relay transmit antennas
    int T = 500;  ///< coherence block length (channel uses)
    int tau = 20; ///< pilot symbols per block

    double p_tr = 1.5848931924611136; ///< per-pilot power (2 dB)
    double rho = 100.0;               ///< data SNR, source power and relay budget
    double sigma2_SI = 1.0;           ///< self-interference entry variance

    DuplexMode duplex_mode = DuplexMode::FD;
    Strategy strategy = Strategy::RS;
    CsitMode csit_mode = CsitMode::Imperfect;

    // Unset means 1/rho.
    std::optional<double> alpha_SR;
    std::optional<double> alpha_RD;

    /// Draws used to estimate the long-term RZF normalization.
    int lambda_draws = 1000;

    /// Throws std::invalid_argument describing the first violated invariant.
    void validate() const;

    double effective_alpha_sr() const;
    double effective_alpha_rd() const;

    /// (T - tau) / T for FD, half of that for HD.
    double prelog() const;
};

/// Diagonals of the large-scale fading matrices of both hops.
struct LargeScaleProfile
{
    Eigen::VectorXd beta_SR;
    Eigen::VectorXd beta_RD;

    void validate(int K) const;
};

struct TopologyParams
{
    double disk_diameter_m = 1000.0;
    double min_distance_m = 35.0;
    double shadowing_variance_db2 = 3.16;
};

/// beta = 10^((s_dB - 15.3)/10) * d^-3.76, with d clamped to `min_distance_m`.
double pathloss_beta(double d_m, double s_dB, double min_distance_m = 35.0);

/// Profile from explicit distances and shadowing draws (all length K).
LargeScaleProfile profile_from_geometry(const Eigen::VectorXd& d_SR, const Eigen::VectorXd& s_SR,
                                        const Eigen::VectorXd& d_RD, const Eigen::VectorXd& s_RD,
                                        double min_distance_m = 35.0);

/// Sources and destinations placed uniformly in a disk centred on the relay.
LargeScaleProfile draw_topology(const SystemConfig& cfg, std::uint64_t seed, double disk_diameter_m,
                                const TopologyParams& params = {});

LargeScaleProfile uniform_profile(const SystemConfig& cfg, double beta);

// Key-value configuration. Keys mirror the struct fields; power keys also
// accept a "_db" suffix (rho_db, p_tr_db, sigma2_SI_db).
void apply_json(SystemConfig& cfg, const nlohmann::json& j);
SystemConfig config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SystemConfig& cfg);

} // namespace rsrelay
