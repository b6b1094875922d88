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

#include "rsrelay/config.hpp"
#include "rsrelay/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rsrelay
{

std::string_view to_string(DuplexMode m) { return m == DuplexMode::FD ? "fd" : "hd"; }
std::string_view to_string(Strategy s) { return s == Strategy::RS ? "rs" : "nors"; }
std::string_view to_string(CsitMode c) { return c == CsitMode::Perfect ? "perfect" : "imperfect"; }

namespace
{
std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}
} // namespace

DuplexMode parse_duplex(std::string_view s)
{
    const auto v = lower(s);
    if (v == "fd")
        return DuplexMode::FD;
    if (v == "hd")
        return DuplexMode::HD;
    throw std::invalid_argument("unknown duplex mode '" + std::string(s) + "' (expected fd|hd)");
}

Strategy parse_strategy(std::string_view s)
{
    const auto v = lower(s);
    if (v == "rs")
        return Strategy::RS;
    if (v == "nors")
        return Strategy::NoRS;
    throw std::invalid_argument("unknown strategy '" + std::string(s) + "' (expected rs|nors)");
}

CsitMode parse_csit(std::string_view s)
{
    const auto v = lower(s);
    if (v == "perfect")
        return CsitMode::Perfect;
    if (v == "imperfect")
        return CsitMode::Imperfect;
    throw std::invalid_argument("unknown csit mode '" + std::string(s) + "' (expected perfect|imperfect)");
}

void SystemConfig::validate() const
{
    auto fail = [](const std::string& what) { throw std::invalid_argument("invalid SystemConfig: " + what); };
    if (K < 1 || N < 1 || M < 1 || T < 1 || tau < 1)
        fail("K, N, M, T and tau must be positive");
    if (tau < 2 * K)
        fail("tau >= 2K required for orthogonal pilots (tau=" + std::to_string(tau) + ", K=" + std::to_string(K) + ")");
    if (tau >= T)
        fail("tau < T required");
    if (!(p_tr >= 0.0) || !(rho >= 0.0) || !(sigma2_SI >= 0.0))
        fail("powers and sigma2_SI must be nonnegative");
    if (alpha_SR && !(*alpha_SR > 0.0))
        fail("alpha_SR must be positive");
    if (alpha_RD && !(*alpha_RD > 0.0))
        fail("alpha_RD must be positive");
    if (!alpha_SR || !alpha_RD)
        if (!(rho > 0.0))
            fail("rho must be positive when a regularization defaults to 1/rho");
    if (lambda_draws < 1)
        fail("lambda_draws must be >= 1");
}

double SystemConfig::effective_alpha_sr() const { return alpha_SR ? *alpha_SR : 1.0 / rho; }
double SystemConfig::effective_alpha_rd() const { return alpha_RD ? *alpha_RD : 1.0 / rho; }

double SystemConfig::prelog() const
{
    const double fd = static_cast<double>(T - tau) / static_cast<double>(T);
    return duplex_mode == DuplexMode::FD ? fd : 0.5 * fd;
}

void LargeScaleProfile::validate(int K) const
{
    if (beta_SR.size() != K || beta_RD.size() != K)
        throw std::invalid_argument("LargeScaleProfile: expected " + std::to_string(K) + " entries per link");
    auto ok = [](const Eigen::VectorXd& v) { return v.allFinite() && (v.array() > 0.0).all(); };
    if (!ok(beta_SR) || !ok(beta_RD))
        throw std::invalid_argument("LargeScaleProfile: entries must be finite and strictly positive");
}

double pathloss_beta(double d_m, double s_dB, double min_distance_m)
{
    const double d = std::max(d_m, min_distance_m);
    return std::pow(10.0, (s_dB - 15.3) / 10.0) * std::pow(d, -3.76);
}

LargeScaleProfile profile_from_geometry(const Eigen::VectorXd& d_SR, const Eigen::VectorXd& s_SR,
                                        const Eigen::VectorXd& d_RD, const Eigen::VectorXd& s_RD,
                                        double min_distance_m)
{
    const auto K = d_SR.size();
    if (s_SR.size() != K || d_RD.size() != K || s_RD.size() != K)
        throw std::invalid_argument("profile_from_geometry: length mismatch");
    LargeScaleProfile p{Eigen::VectorXd(K), Eigen::VectorXd(K)};
    for (Eigen::Index k = 0; k < K; ++k)
    {
        p.beta_SR(k) = pathloss_beta(d_SR(k), s_SR(k), min_distance_m);
        p.beta_RD(k) = pathloss_beta(d_RD(k), s_RD(k), min_distance_m);
    }
    return p;
}

LargeScaleProfile draw_topology(const SystemConfig& cfg, std::uint64_t seed, double disk_diameter_m,
                                const TopologyParams& params)
{
    if (!(disk_diameter_m > 0.0))
        throw std::invalid_argument("draw_topology: disk diameter must be positive");
    auto eng = make_engine(seed, Stream::Topology);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> shadow(0.0, std::sqrt(params.shadowing_variance_db2));
    const double radius = disk_diameter_m / 2.0;

    const int K = cfg.K;
    Eigen::VectorXd d_SR(K), s_SR(K), d_RD(K), s_RD(K);
    // Area-uniform radius; the angle does not affect the distance to the centre.
    for (int k = 0; k < K; ++k)
    {
        d_SR(k) = radius * std::sqrt(unit(eng));
        s_SR(k) = shadow(eng);
        d_RD(k) = radius * std::sqrt(unit(eng));
        s_RD(k) = shadow(eng);
    }
    return profile_from_geometry(d_SR, s_SR, d_RD, s_RD, params.min_distance_m);
}

LargeScaleProfile uniform_profile(const SystemConfig& cfg, double beta)
{
    if (!(beta > 0.0))
        throw std::invalid_argument("uniform_profile: beta must be positive");
    return {Eigen::VectorXd::Constant(cfg.K, beta), Eigen::VectorXd::Constant(cfg.K, beta)};
}

void apply_json(SystemConfig& cfg, const nlohmann::json& j)
{
    for (const auto& [key, v] : j.items())
    {
        if (key == "K")
            cfg.K = v.get<int>();
        else if (key == "N")
            cfg.N = v.get<int>();
        else if (key == "M")
            cfg.M = v.get<int>();
        else if (key == "T")
            cfg.T = v.get<int>();
        else if (key == "tau")
            cfg.tau = v.get<int>();
        else if (key == "p_tr")
            cfg.p_tr = v.get<double>();
        else if (key == "p_tr_db")
            cfg.p_tr = db_to_linear(v.get<double>());
        else if (key == "rho")
            cfg.rho = v.get<double>();
        else if (key == "rho_db")
            cfg.rho = db_to_linear(v.get<double>());
        else if (key == "sigma2_SI")
            cfg.sigma2_SI = v.get<double>();
        else if (key == "sigma2_SI_db")
            cfg.sigma2_SI = db_to_linear(v.get<double>());
        else if (key == "duplex_mode")
            cfg.duplex_mode = parse_duplex(v.get<std::string>());
        else if (key == "strategy")
            cfg.strategy = parse_strategy(v.get<std::string>());
        else if (key == "csit_mode")
            cfg.csit_mode = parse_csit(v.get<std::string>());
        else if (key == "alpha_SR")
            cfg.alpha_SR = v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
        else if (key == "alpha_RD")
            cfg.alpha_RD = v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
        else if (key == "lambda_draws")
            cfg.lambda_draws = v.get<int>();
        else
            throw std::invalid_argument("unknown configuration key '" + key + "'");
    }
}

SystemConfig config_from_json(const nlohmann::json& j)
{
    SystemConfig cfg;
    apply_json(cfg, j);
    cfg.validate();
    return cfg;
}

nlohmann::json to_json(const SystemConfig& cfg)
{
    nlohmann::json j{{"K", cfg.K},
                     {"N", cfg.N},
                     {"M", cfg.M},
                     {"T", cfg.T},
                     {"tau", cfg.tau},
                     {"p_tr", cfg.p_tr},
                     {"rho", cfg.rho},
                     {"sigma2_SI", cfg.sigma2_SI},
                     {"duplex_mode", to_string(cfg.duplex_mode)},
                     {"strategy", to_string(cfg.strategy)},
                     {"csit_mode", to_string(cfg.csit_mode)},
                     {"lambda_draws", cfg.lambda_draws}};
    j["alpha_SR"] = cfg.alpha_SR ? nlohmann::json(*cfg.alpha_SR) : nlohmann::json(nullptr);
    j["alpha_RD"] = cfg.alpha_RD ? nlohmann::json(*cfg.alpha_RD) : nlohmann::json(nullptr);
    return j;
}

} // namespace rsrelay
