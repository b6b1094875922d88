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


// Acceptance suite: one PASS/FAIL line per criterion. Simulation is the reference throughout;
// deterministic equivalents are printed alongside where they help reading the numbers.

#include "rsrelay/deteq.hpp"
#include "rsrelay/montecarlo.hpp"

#include <algorithm>
#include <chrono>
#include <complex>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

using namespace rsrelay;

namespace
{

int failures = 0;

void report(int id, bool pass, const std::string& what)
{
    std::printf("criterion %d: %s  %s\n", id, pass ? "PASS" : "FAIL", what.c_str());
    std::fflush(stdout);
    if (!pass)
        ++failures;
}

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

SystemConfig make_config(int K, int M, double rho_db, double si_db)
{
    SystemConfig c;
    c.K = K;
    c.M = M;
    c.N = M;
    c.T = 500;
    c.tau = std::max(2 * K, 8);
    c.rho = db_to_linear(rho_db);
    c.sigma2_SI = db_to_linear(si_db);
    c.lambda_draws = 500;
    return c;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// 1. DE tightness at M=N=20, K=4.
void criterion1()
{
    const auto t0 = std::chrono::steady_clock::now();
    double worst = 0.0;
    std::string detail;
    for (double rho_db : {0.0, 10.0, 20.0, 30.0})
    {
        auto c = make_config(4, 20, rho_db, 0.0);
        c.tau = 8;
        const auto p = uniform_profile(c, 1.0);
        const double de = compute_de(c, p).rates.sum_rate;
        const double mc = mc_sum_rate(c, p, 1000, 1).sum_rate;
        worst = std::max(worst, rel(de, mc));
        detail += fmt(" %gdB:%.3f/%.3f", rho_db, de, mc);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report(1, worst < 0.05 && secs < 300.0,
           fmt("max |DE-MC|/MC = %.4f (< 0.05), %.1f s (< 300 s); DE/MC", worst, secs) + detail);
}

// 2. NoRS saturates, RS does not, second hop at (64,64,8) between 30 and 40 dB.
void criterion2()
{
    auto hop2 = [](Strategy s, double rho_db)
    {
        auto c = make_config(8, 64, rho_db, 0.0);
        c.strategy = s;
        return mc_sum_rate(c, uniform_profile(c, 1.0), 300, 2).rate_hop2;
    };
    const double per3 = 3.0 / 10.0;
    const double nors = (hop2(Strategy::NoRS, 40) - hop2(Strategy::NoRS, 30)) * per3;
    const double rs = (hop2(Strategy::RS, 40) - hop2(Strategy::RS, 30)) * per3;
    report(2, nors < 0.15 && rs > 0.5,
           fmt("slope per 3 dB over 30..40 dB: NoRS %.3f (< 0.15), RS %.3f (> 0.5)", nors, rs));
}

// 3. FD/HD crossover in the SI variance at rho = 20 dB, M=N=32.
void criterion3()
{
    std::vector<double> grid;
    for (double s = -10.0; s <= 40.0; s += 5.0)
        grid.push_back(s);
    auto sum = [](Strategy s, DuplexMode d, double si_db)
    {
        auto c = make_config(8, 32, 20.0, si_db);
        c.strategy = s;
        c.duplex_mode = d;
        return mc_sum_rate(c, uniform_profile(c, 1.0), 300, 3).sum_rate;
    };
    struct Out
    {
        bool fd_wins_low = true;
        double cross = NAN;
    };
    auto crossing = [&](Strategy s, std::string& detail)
    {
        Out o;
        const double hd = sum(s, DuplexMode::HD, 0.0);
        detail += fmt(" %s HD=%.3f FD:", std::string(to_string(s)).c_str(), hd);
        for (double si : grid)
        {
            const double fd = sum(s, DuplexMode::FD, si);
            detail += fmt(" %g:%.3f", si, fd);
            if (si <= 0.0 && !(fd > hd))
                o.fd_wins_low = false;
            if (std::isnan(o.cross) && fd < hd)
                o.cross = si;
        }
        return o;
    };
    std::string detail;
    const Out rs = crossing(Strategy::RS, detail);
    const Out nors = crossing(Strategy::NoRS, detail);
    const bool exists = rs.fd_wins_low && !std::isnan(rs.cross);
    const bool wider = exists && !std::isnan(nors.cross) && rs.cross > nors.cross;
    report(3, exists && wider,
           fmt("FD-RS > HD-RS for SI <= 0 dB: %s; RS crossover %g dB; NoRS crossover %g dB; RS strictly later: %s;",
               rs.fd_wins_low ? "yes" : "no", rs.cross, nors.cross, wider ? "yes" : "no") +
               detail);
}

// 4. FD-RS sum rate increases with M=N at fixed SI (median over 10 seeds).
void criterion4()
{
    std::vector<double> med;
    std::string detail;
    for (int M : {16, 32, 64})
    {
        auto c = make_config(8, M, 20.0, 0.0);
        const auto p = uniform_profile(c, 1.0);
        std::vector<double> v;
        for (std::uint64_t seed = 1; seed <= 10; ++seed)
            v.push_back(mc_sum_rate(c, p, 200, seed).sum_rate);
        std::nth_element(v.begin(), v.begin() + 5, v.end());
        const double hi = v[5];
        std::nth_element(v.begin(), v.begin() + 4, v.begin() + 5);
        med.push_back(0.5 * (v[4] + hi));
        detail += fmt(" M=%d:%.3f", M, med.back());
    }
    report(4, med[0] < med[1] && med[1] < med[2], "median FD-RS sum rate over 10 seeds:" + detail);
}

// 5. RS gain shrinks from K=4 to K=8 at M=N=64, rho = 30 dB. The end-to-end rate is capped by the first
// hop, so the gain is measured on the second-hop sum rate where the common message acts.
void criterion5()
{
    auto gain = [](int K, double& e2e)
    {
        auto c = make_config(K, 64, 30.0, 0.0);
        const auto p = uniform_profile(c, 1.0);
        const auto rs = mc_sum_rate(c, p, 300, 5);
        c.strategy = Strategy::NoRS;
        const auto nors = mc_sum_rate(c, p, 300, 5);
        e2e = rs.sum_rate - nors.sum_rate;
        return rs.rate_hop2 - nors.rate_hop2;
    };
    double e4 = 0, e8 = 0;
    const double g4 = gain(4, e4), g8 = gain(8, e8);
    report(5, g8 < g4,
           fmt("second-hop RS-NoRS gain K=4 %.3f, K=8 %.3f (end-to-end gain K=4 %.3f, K=8 %.3f)", g4, g8, e4, e8));
}

// 6. Rate-loss bound on five random configurations. SNR is drawn where the split is active (t < 1);
// below that the bound holds trivially with equality.
void criterion6()
{
    std::mt19937_64 rng(20240606);
    bool pass = true;
    std::string detail;
    for (int i = 0; i < 5; ++i)
    {
        const int K = std::uniform_int_distribution<int>(2, 10)(rng);
        const int M = std::uniform_int_distribution<int>(std::max(16, 2 * K), 128)(rng);
        const double rho_db = std::uniform_real_distribution<double>(20.0, 40.0)(rng);
        auto c = make_config(K, M, rho_db, 0.0);
        LargeScaleProfile p{RVector(K), RVector(K)};
        std::uniform_real_distribution<double> beta(0.5, 2.0);
        for (int k = 0; k < K; ++k)
        {
            p.beta_SR(k) = beta(rng);
            p.beta_RD(k) = beta(rng);
        }
        const std::uint64_t seed = 600 + static_cast<std::uint64_t>(i);
        const auto lt = long_term_params(c, p, seed);
        const auto draws = run_draws_parallel(c, p, lt, 500, seed);
        const double n = static_cast<double>(draws.size());
        double acc = 0.0, acc2 = 0.0;
        for (const auto& s : draws)
        {
            double d = 0.0;
            for (int k = 0; k < K; ++k)
                d += rate_from_sinr(s.priv(k), c) - rate_from_sinr(s.priv_nors(k), c);
            acc += d;
            acc2 += d * d;
        }
        const double loss = acc / n;
        const double se = std::sqrt(std::max(0.0, acc2 / n - loss * loss) / (n - 1.0));
        const double R_c = aggregate_draws(draws, c, lt).R_c;
        // Delta R_RD = R_c + sum(R^p - R^NoRS) against R_c - log2 e - 3 se.
        const bool ok = R_c + loss >= R_c - std::numbers::log2e - 3.0 * se;
        pass = pass && ok;
        detail += fmt(" [K=%d M=%d rho=%.1fdB t=%.3f dR=%.3f R_c=%.3f loss=%.3f se=%.3f %s]", K, M, rho_db, lt.t,
                      R_c + loss, R_c, loss, se, ok ? "ok" : "violated");
    }
    report(6, pass, "Delta R_RD >= R_c - log2 e - 3 se:" + detail);
}

// 7. Precoder normalization and lambda_bar at (M,K) = (64,8).
void criterion7()
{
    auto c = make_config(8, 64, 20.0, 0.0);
    c.lambda_draws = 1000;
    const auto p = uniform_profile(c, 1.0);
    const double lambda = estimate_lambda(c, p, c.lambda_draws, 7);
    double acc = 0.0;
    const int n = 1000;
    for (int d = 0; d < n; ++d)
    {
        const auto ch = draw_channels(c, p, 70, static_cast<std::uint64_t>(d));
        const auto est = mmse_estimate(ch, c, 70, static_cast<std::uint64_t>(d));
        acc += build_transceivers(est, c, lambda, 1.0, RVector::Ones(c.K)).F.squaredNorm();
    }
    const double trace = acc / n;
    const double lambda_bar = compute_de(c, p).second_hop.lambda_bar;
    const double e1 = rel(trace, c.K), e2 = rel(lambda_bar, lambda);
    report(7, e1 < 0.01 && e2 < 0.03,
           fmt("mean tr F^H F = %.4f vs K = %d (rel %.4f < 0.01); lambda_bar %.4f vs MC lambda %.4f (rel %.4f < 0.03)",
               trace, c.K, e1, lambda_bar, lambda, e2));
}

// Brute-force SINRs with scalar loops only.
using cd = std::complex<double>;

cd inner(const CMatrix& A, int a, const CMatrix& B, int b)
{
    cd s = 0.0;
    for (int i = 0; i < A.rows(); ++i)
        s += std::conj(A(i, a)) * B(i, b);
    return s;
}

double loop_first_hop(const ChannelSet& ch, const CMatrix& W, const SystemConfig& c, int k)
{
    double des = 0, itf = 0, si = 0, wn = 0;
    for (int j = 0; j < c.K; ++j)
        (j == k ? des : itf) += std::norm(inner(W, k, ch.G_SR, j));
    for (int m = 0; m < c.M; ++m)
        si += std::norm(inner(W, k, ch.G_RR, m));
    for (int i = 0; i < c.N; ++i)
        wn += std::norm(W(i, k));
    return c.rho * des / (c.rho * itf + si + wn);
}

void criterion8()
{
    double root_err = 0.0;
    const RVector ones = RVector::Ones(4);
    root_err = std::max(root_err, std::abs(solve_fixed_point(ones, 4, 1.0).delta(0) - (std::sqrt(5.0) - 1.0) / 2.0));
    root_err = std::max(root_err, std::abs(solve_fixed_point(ones, 8, 1.0).delta(0) - (std::sqrt(4.25) - 0.5) / 2.0));
    const double pub = std::abs(solve_fixed_point(ones, 8, 1.0).delta(0) - 0.7807764);

    RVector c(5);
    c << 0.2, 0.7, 1.0, 1.9, 3.1;
    double fd_err = 0.0;
    for (double alpha : {0.01, 0.1, 1.0})
    {
        const auto fp = solve_fixed_point(c, 12, alpha);
        const auto d = solve_derivative(fp, c, 1.0, 12);
        const double h = alpha * 1e-4;
        const auto lo = solve_fixed_point(c, 12, alpha - h), hi = solve_fixed_point(c, 12, alpha + h);
        for (int k = 0; k < 5; ++k)
            fd_err = std::max(fd_err, rel(d.delta_prime(k), (lo.delta(k) - hi.delta(k)) / (2 * h)));
    }

    double sinr_err = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed)
    {
        auto cfg = make_config(3, 4, 10.0, 0.0);
        cfg.N = 4;
        cfg.tau = 6;
        cfg.sigma2_SI = 0.7;
        cfg.lambda_draws = 20;
        const auto p = uniform_profile(cfg, 1.0);
        const auto ch = draw_channels(cfg, p, seed, 0);
        const auto est = mmse_estimate(ch, cfg, seed, 0);
        const auto tx = build_transceivers(est, cfg, 1.3, 0.6, RVector::Ones(3));
        const auto s = evaluate_draw(ch, tx, cfg);
        for (int k = 0; k < 3; ++k)
        {
            sinr_err = std::max(sinr_err, rel(s.first_hop(k), loop_first_hop(ch, tx.W, cfg, k)));
            double des = 0, all = 0;
            for (int j = 0; j < 3; ++j)
            {
                const double v = std::norm(inner(ch.G_RD, k, tx.F, j));
                all += v;
                if (j == k)
                    des = v;
            }
            const double priv = tx.rho_k * des / (tx.rho_k * (all - des) + 1.0);
            CVector fc = tx.f_c;
            const double com = tx.rho_c * std::norm(inner(ch.G_RD, k, CMatrix(fc), 0)) / (tx.rho_k * all + 1.0);
            sinr_err = std::max({sinr_err, rel(s.priv(k), priv), rel(s.common(k), com)});
        }
    }
    report(8, root_err < 1e-10 && pub < 1e-7 && fd_err < 1e-4 && sinr_err < 1e-10,
           fmt("fixed-point root error %.2e (< 1e-10); derivative vs finite differences %.2e (< 1e-4); "
               "SINR vs loop oracle %.2e (< 1e-10)",
               root_err, fd_err, sinr_err));
}

// 9. Structural identities.
void criterion9()
{
    auto c = make_config(4, 16, 25.0, 0.0);
    const auto p = uniform_profile(c, 1.0);
    auto lt = long_term_params(c, p, 9);
    lt.t = 1.0;
    const auto rs = mc_sum_rate(c, p, lt, 100, 9);
    auto cn = c;
    cn.strategy = Strategy::NoRS;
    const auto nors = mc_sum_rate(cn, p, lt, 100, 9);
    const double d_rs = std::abs(rs.sum_rate - nors.sum_rate) + (rs.R_RD_private - nors.R_RD_private).cwiseAbs().maxCoeff();

    auto fd = c;
    fd.sigma2_SI = 0.0;
    auto hd = fd;
    hd.duplex_mode = DuplexMode::HD;
    double d_dup = 0.0;
    for (std::uint64_t d = 0; d < 50; ++d)
    {
        const auto a = run_single_draw(fd, p, lt, 9, d);
        const auto b = run_single_draw(hd, p, lt, 9, d);
        d_dup = std::max(d_dup, (a.first_hop - b.first_hop).cwiseAbs().maxCoeff());
    }

    auto pc = c;
    pc.csit_mode = CsitMode::Perfect;
    double e_max = 0.0;
    for (std::uint64_t d = 0; d < 50; ++d)
    {
        const auto est = mmse_estimate(draw_channels(pc, p, 9, d), pc, 9, d);
        e_max = std::max({e_max, est.E_SR.cwiseAbs().maxCoeff(), est.E_RD.cwiseAbs().maxCoeff()});
    }
    report(9, d_rs < 1e-12 && d_dup == 0.0 && e_max == 0.0,
           fmt("|RS(t=1) - NoRS| = %.2e (< 1e-12); FD vs HD first hop at zero SI max diff %.2e; perfect-CSIT "
               "error max %.2e",
               d_rs, d_dup, e_max));
}

} // namespace

int main()
{
    const std::vector<std::function<void()>> all{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                 criterion6, criterion7, criterion8, criterion9};
    for (std::size_t i = 0; i < all.size(); ++i)
    {
        try
        {
            all[i]();
        }
        catch (const std::exception& e)
        {
            report(static_cast<int>(i + 1), false, std::string("exception: ") + e.what());
        }
    }
    std::printf("%d of %zu criteria failed\n", failures, all.size());
    return failures == 0 ? 0 : 1;
}
