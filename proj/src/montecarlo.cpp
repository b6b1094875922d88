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

#include "rsrelay/montecarlo.hpp"
#include "rsrelay/deteq.hpp"

#include <cmath>
#include <exception>
#include <stdexcept>

namespace rsrelay
{

double sinr_first_hop(const ChannelSet& ch, const CMatrix& W, const SystemConfig& cfg, int k)
{
    const auto w = W.col(k);
    double desired = 0.0, interf = 0.0;
    for (int j = 0; j < cfg.K; ++j)
    {
        const double p = std::norm(w.dot(ch.G_SR.col(j)));
        (j == k ? desired : interf) += p;
    }
    double si = 0.0;
    if (cfg.duplex_mode == DuplexMode::FD)
        si = (w.adjoint() * ch.G_RR).squaredNorm();
    return cfg.rho * desired / (cfg.rho * interf + si + w.squaredNorm());
}

double sinr_second_hop_private(const ChannelSet& ch, const CMatrix& F, const SystemConfig& cfg, double t, int k)
{
    const double p = cfg.rho * t / static_cast<double>(cfg.K);
    const auto g = ch.G_RD.col(k);
    double desired = 0.0, interf = 0.0;
    for (int j = 0; j < cfg.K; ++j)
    {
        const double v = std::norm(g.dot(F.col(j)));
        (j == k ? desired : interf) += v;
    }
    return p * desired / (p * interf + 1.0);
}

double sinr_second_hop_common(const ChannelSet& ch, const CMatrix& F, const CVector& f_c, const SystemConfig& cfg,
                              double t, int k)
{
    const auto pa = allocate_power(cfg, t);
    const auto g = ch.G_RD.col(k);
    double all = 0.0;
    for (int j = 0; j < cfg.K; ++j)
        all += std::norm(g.dot(F.col(j)));
    return pa.rho_c * std::norm(g.dot(f_c)) / (pa.rho_k * all + 1.0);
}

double common_min(const RVector& common_sinrs)
{
    return common_sinrs.size() == 0 ? 0.0 : common_sinrs.minCoeff();
}

DrawSinrs evaluate_draw(const ChannelSet& ch, const TransceiverSet& tx, const SystemConfig& cfg)
{
    const int K = cfg.K;
    DrawSinrs s;

    // Row k of A holds w_k^H g_j.
    const CMatrix A = tx.W.adjoint() * ch.G_SR;
    RVector si = RVector::Zero(K);
    if (cfg.duplex_mode == DuplexMode::FD)
        si = (tx.W.adjoint() * ch.G_RR).rowwise().squaredNorm();
    const RVector wnorm = tx.W.colwise().squaredNorm().transpose();
    const Eigen::MatrixXd Ap = A.cwiseAbs2();
    s.first_hop.resize(K);
    for (int k = 0; k < K; ++k)
    {
        const double desired = Ap(k, k);
        const double interf = Ap.row(k).sum() - desired;
        s.first_hop(k) = cfg.rho * desired / (cfg.rho * interf + si(k) + wnorm(k));
    }

    // Row k of C holds g_k^H f_j.
    const Eigen::MatrixXd Cp = (ch.G_RD.adjoint() * tx.F).cwiseAbs2();
    const double p_nors = cfg.rho / static_cast<double>(K);
    s.priv.resize(K);
    s.priv_nors.resize(K);
    s.common = RVector::Zero(K);
    RVector all(K);
    for (int k = 0; k < K; ++k)
    {
        all(k) = Cp.row(k).sum();
        const double desired = Cp(k, k);
        const double interf = all(k) - desired;
        s.priv(k) = tx.rho_k * desired / (tx.rho_k * interf + 1.0);
        s.priv_nors(k) = p_nors * desired / (p_nors * interf + 1.0);
    }
    if (cfg.strategy == Strategy::RS && tx.f_c.size() > 0)
    {
        const RVector gc = (ch.G_RD.adjoint() * tx.f_c).cwiseAbs2();
        for (int k = 0; k < K; ++k)
            s.common(k) = tx.rho_c * gc(k) / (tx.rho_k * all(k) + 1.0);
    }
    s.common_min = common_min(s.common);
    return s;
}

RateReport rates_from_sinrs(const DrawSinrs& s, const SystemConfig& cfg)
{
    RateReport r;
    auto to_rate = [&](double g) { return rate_from_sinr(g, cfg); };
    r.R_SR = s.first_hop.unaryExpr(to_rate);
    r.R_RD_private = s.priv.unaryExpr(to_rate);
    r.R_c = cfg.strategy == Strategy::RS ? rate_from_sinr(s.common_min, cfg) : 0.0;
    r.meta.cfg = cfg;
    finalize_report(r);
    return r;
}

LongTermParams long_term_params(const SystemConfig& cfg, const LargeScaleProfile& profile, std::uint64_t seed)
{
    const auto de = compute_de(cfg, profile);
    LongTermParams lt;
    lt.lambda = estimate_lambda(cfg, profile, cfg.lambda_draws, seed);
    lt.t = de.t;
    lt.q_weights = de.q_weights;
    return lt;
}

DrawSinrs run_single_draw(const SystemConfig& cfg, const LargeScaleProfile& profile, const LongTermParams& lt,
                          std::uint64_t seed, std::uint64_t draw_index)
{
    const auto ch = draw_channels(cfg, profile, seed, draw_index);
    const auto est = mmse_estimate(ch, cfg, seed, draw_index);
    const auto tx = build_transceivers(est, cfg, lt.lambda, lt.t, lt.q_weights);
    return evaluate_draw(ch, tx, cfg);
}

std::vector<DrawSinrs> run_draws_serial(const SystemConfig& cfg, const LargeScaleProfile& profile,
                                        const LongTermParams& lt, int n_draws, std::uint64_t seed)
{
    if (n_draws < 1)
        throw std::invalid_argument("run_draws: n_draws must be >= 1");
    std::vector<DrawSinrs> out(static_cast<std::size_t>(n_draws));
    for (int d = 0; d < n_draws; ++d)
        out[static_cast<std::size_t>(d)] = run_single_draw(cfg, profile, lt, seed, static_cast<std::uint64_t>(d));
    return out;
}

std::vector<DrawSinrs> run_draws_parallel(const SystemConfig& cfg, const LargeScaleProfile& profile,
                                          const LongTermParams& lt, int n_draws, std::uint64_t seed)
{
    if (n_draws < 1)
        throw std::invalid_argument("run_draws: n_draws must be >= 1");
    std::vector<DrawSinrs> out(static_cast<std::size_t>(n_draws));
    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic)
    for (int d = 0; d < n_draws; ++d)
    {
        try
        {
            out[static_cast<std::size_t>(d)] =
                run_single_draw(cfg, profile, lt, seed, static_cast<std::uint64_t>(d));
        }
        catch (...)
        {
#pragma omp critical(rsrelay_mc_failure)
            if (!failure)
                failure = std::current_exception();
        }
    }
    if (failure)
        std::rethrow_exception(failure);
    return out;
}

RateReport aggregate_draws(const std::vector<DrawSinrs>& draws, const SystemConfig& cfg, const LongTermParams& lt)
{
    if (draws.empty())
        throw std::invalid_argument("aggregate_draws: no draws");
    const int K = cfg.K;
    const double n = static_cast<double>(draws.size());
    auto to_rate = [&](double g) { return rate_from_sinr(g, cfg); };

    RVector R_SR = RVector::Zero(K), R_p = RVector::Zero(K), R_common = RVector::Zero(K);
    double sum = 0.0, sum_sq = 0.0;
    for (const auto& s : draws)
    {
        R_SR += s.first_hop.unaryExpr(to_rate);
        R_p += s.priv.unaryExpr(to_rate);
        R_common += s.common.unaryExpr(to_rate);
        const double inst = rates_from_sinrs(s, cfg).sum_rate;
        sum += inst;
        sum_sq += inst * inst;
    }

    RateReport r;
    r.R_SR = R_SR / n;
    r.R_RD_private = R_p / n;
    r.R_c = cfg.strategy == Strategy::RS ? (R_common / n).minCoeff() : 0.0;
    r.t = cfg.strategy == Strategy::RS ? lt.t : 1.0;
    r.lambda = lt.lambda;
    r.meta.cfg = cfg;
    r.meta.source = RateSource::MonteCarlo;
    r.meta.n_draws = static_cast<int>(draws.size());
    finalize_report(r);
    if (draws.size() > 1)
    {
        const double mean = sum / n;
        const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
        r.sum_rate_stderr = std::sqrt(var / n);
    }
    return r;
}

RateReport mc_sum_rate(const SystemConfig& cfg, const LargeScaleProfile& profile, const LongTermParams& lt,
                       int n_draws, std::uint64_t seed, Execution exec)
{
    const auto draws = exec == Execution::Serial ? run_draws_serial(cfg, profile, lt, n_draws, seed)
                                                 : run_draws_parallel(cfg, profile, lt, n_draws, seed);
    auto r = aggregate_draws(draws, cfg, lt);
    r.meta.seed = seed;
    return r;
}

RateReport mc_sum_rate(const SystemConfig& cfg, const LargeScaleProfile& profile, int n_draws, std::uint64_t seed,
                       Execution exec)
{
    cfg.validate();
    profile.validate(cfg.K);
    if (n_draws < 1)
        throw std::invalid_argument("mc_sum_rate: n_draws must be >= 1");
    return mc_sum_rate(cfg, profile, long_term_params(cfg, profile, seed), n_draws, seed, exec);
}

} // namespace rsrelay
