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
#include "rsrelay/deteq.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <vector>

using namespace rsrelay;
using rsrelay::testing::small_config;

namespace
{
// Oracle: the textbook form with the N x N inverse.
CMatrix dense_regularized(const CMatrix& G, double reg)
{
    CMatrix A = G * G.adjoint();
    A.diagonal().array() += reg;
    return A.partialPivLu().solve(G);
}
} // namespace

TEST_CASE("push-through solve matches the dense antenna-domain inverse")
{
    auto c = small_config(4, 12, 9);
    const auto p = uniform_profile(c, 0.7);
    const auto ch = draw_channels(c, p, 21);
    const auto est = mmse_estimate(ch, c, 21);
    const CMatrix W = mmse_decoder(est.Ghat_SR, c);
    const CMatrix F0 = rzf_precoder_unnormalized(est.Ghat_RD, c);
    CHECK((W - dense_regularized(est.Ghat_SR, c.N * c.effective_alpha_sr())).norm() < 1e-10 * W.norm());
    CHECK((F0 - dense_regularized(est.Ghat_RD, c.M * c.effective_alpha_rd())).norm() < 1e-10 * F0.norm());
    CHECK_THROWS_AS(regularized_inverse_times(est.Ghat_SR, 0.0), std::invalid_argument);
}

TEST_CASE("lambda normalization")
{
    const std::vector<double> s{2.0, 2.0, 2.0};
    CHECK(lambda_normalization(4, s) == doctest::Approx(2.0));
    const std::vector<double> z{0.0, 0.0};
    CHECK_THROWS_WITH_AS(lambda_normalization(4, z), "zero-power precoder", std::runtime_error);
    CHECK_THROWS_AS(lambda_normalization(4, std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("estimated lambda makes the average precoder power equal K on fresh draws")
{
    auto c = small_config(8, 64, 64);
    c.lambda_draws = 1000;
    const auto p = uniform_profile(c, 1.0);
    const double lambda = estimate_lambda(c, p, c.lambda_draws, 5);
    double acc = 0.0;
    const int draws = 1000;
    for (int d = 0; d < draws; ++d)
    {
        const auto ch = draw_channels(c, p, 77, static_cast<std::uint64_t>(d));
        const auto est = mmse_estimate(ch, c, 77, static_cast<std::uint64_t>(d));
        acc += lambda * rzf_precoder_unnormalized(est.Ghat_RD, c).squaredNorm();
    }
    CHECK(acc / draws == doctest::Approx(c.K).epsilon(0.01));
}

TEST_CASE("common-precoder weights equalize q alpha^2 sigma^4 and are scale invariant in q")
{
    RVector s2(3), q(3);
    s2 << 0.5, 1.0, 2.0;
    q << 0.3, 0.6, 0.9;
    const int M = 16;
    const RVector a = common_precoder_weights(M, s2, q);
    CHECK(a.squaredNorm() == doctest::Approx(1.0 / M));
    const RVector target = q.array() * a.array().square() * s2.array().square();
    for (int k = 1; k < 3; ++k)
        CHECK(target(k) == doctest::Approx(target(0)).epsilon(1e-12));
    const RVector a2 = common_precoder_weights(M, s2, 7.0 * q);
    CHECK((a - a2).norm() < 1e-14);

    RVector bad = q;
    bad(1) = 0.0;
    CHECK_THROWS_WITH_AS(common_precoder_weights(M, s2, bad), "degenerate common-message weight",
                         std::invalid_argument);
}

TEST_CASE("common precoder is unit norm and built from the estimates")
{
    auto c = small_config(3, 8, 10);
    const auto p = uniform_profile(c, 1.0);
    const auto est = mmse_estimate(draw_channels(c, p, 4), c, 4);
    const RVector q = RVector::Ones(3);
    const auto cp = common_precoder(est.Ghat_RD, est.sigma2_RD, q);
    CHECK(cp.f_c.norm() == doctest::Approx(1.0));
    const CVector raw = est.Ghat_RD * cp.alpha_weights.cast<std::complex<double>>();
    CHECK((raw / raw.norm() - cp.f_c).norm() < 1e-14);
}

TEST_CASE("power split follows t = min(K / (rho Ybar), 1)")
{
    SystemConfig c;
    c.K = 10;
    c.rho = 100.0;
    CHECK(power_split(c, 0.05) == doctest::Approx(1.0));   // K/(rho Y) = 2 -> clamp
    CHECK(power_split(c, 0.5) == doctest::Approx(0.2));
    CHECK_THROWS_AS(power_split(c, 0.0), std::invalid_argument);
    c.strategy = Strategy::NoRS;
    CHECK(power_split(c, 0.5) == 1.0);
}

TEST_CASE("power allocation adds up to the budget")
{
    SystemConfig c;
    c.rho = 316.2;
    for (double t : {0.01, 0.3, 0.77, 1.0})
    {
        const auto pa = allocate_power(c, t);
        CHECK(pa.rho_c + c.K * pa.rho_k == doctest::Approx(c.rho).epsilon(1e-14));
        CHECK(pa.rho_c >= 0.0);
    }
    CHECK(allocate_power(c, 1.0).rho_c == 0.0);
    CHECK_THROWS_AS(allocate_power(c, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(allocate_power(c, 1.5), std::invalid_argument);
    c.strategy = Strategy::NoRS;
    CHECK(allocate_power(c, 0.3).t == 1.0);
}

TEST_CASE("transceiver set carries lambda in F and builds f_c only for RS")
{
    auto c = small_config(3, 8, 8);
    const auto p = uniform_profile(c, 1.0);
    const auto est = mmse_estimate(draw_channels(c, p, 8), c, 8);
    const RVector q = RVector::Ones(3);
    const auto tx = build_transceivers(est, c, 4.0, 0.5, q);
    CHECK((tx.F - 2.0 * rzf_precoder_unnormalized(est.Ghat_RD, c)).norm() < 1e-12);
    CHECK(tx.f_c.size() == 8);
    c.strategy = Strategy::NoRS;
    const auto tx2 = build_transceivers(est, c, 4.0, 0.5, q);
    CHECK(tx2.f_c.size() == 0);
    CHECK(tx2.t == 1.0);
    CHECK(tx2.rho_c == 0.0);
}
