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

#include <doctest.h>

#include <cmath>
#include <stdexcept>

using namespace rsrelay;

TEST_CASE("default configuration is valid and matches the reference system")
{
    SystemConfig c;
    CHECK_NOTHROW(c.validate());
    CHECK(c.K == 10);
    CHECK(c.M == 100);
    CHECK(c.N == 100);
    CHECK(c.T == 500);
    CHECK(c.tau == 20);
    CHECK(c.p_tr == doctest::Approx(db_to_linear(2.0)).epsilon(1e-15));
    CHECK(c.effective_alpha_sr() == doctest::Approx(1.0 / c.rho));
    CHECK(c.effective_alpha_rd() == doctest::Approx(1.0 / c.rho));
}

TEST_CASE("validation rejects inconsistent dimensions and powers")
{
    SystemConfig c;
    c.tau = 2 * c.K - 1;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.tau = c.T;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.K = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.sigma2_SI = -1.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.alpha_RD = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c = {};
    c.rho = 0.0; // default alpha would be 1/0
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.alpha_SR = 0.1;
    c.alpha_RD = 0.1;
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("prelog: FD (T - tau)/T, HD half of it")
{
    SystemConfig c;
    CHECK(c.prelog() == doctest::Approx(0.96));
    c.duplex_mode = DuplexMode::HD;
    CHECK(c.prelog() == doctest::Approx(0.48));
}

TEST_CASE("dB conversions round trip")
{
    for (double db : {-10.0, 0.0, 3.0, 20.0, 40.0})
        CHECK(linear_to_db(db_to_linear(db)) == doctest::Approx(db).epsilon(1e-12));
    CHECK(db_to_linear(20.0) == doctest::Approx(100.0));
}

TEST_CASE("enum parsing")
{
    CHECK(parse_duplex("FD") == DuplexMode::FD);
    CHECK(parse_duplex("hd") == DuplexMode::HD);
    CHECK(parse_strategy("NoRS") == Strategy::NoRS);
    CHECK(parse_csit("perfect") == CsitMode::Perfect);
    CHECK_THROWS_AS(parse_duplex("full"), std::invalid_argument);
    CHECK(to_string(Strategy::RS) == "rs");
}

TEST_CASE("path loss follows the log-distance model with a minimum distance")
{
    // 10^((0 - 15.3)/10) * 100^-3.76
    CHECK(pathloss_beta(100.0, 0.0) == doctest::Approx(std::pow(10.0, -1.53) * std::pow(100.0, -3.76)));
    CHECK(pathloss_beta(10.0, 0.0) == pathloss_beta(35.0, 0.0));
    CHECK(pathloss_beta(200.0, 3.0) > pathloss_beta(200.0, 0.0));
}

TEST_CASE("topology draws are deterministic per seed and strictly positive")
{
    SystemConfig c;
    const auto a = draw_topology(c, 7, 1000.0);
    const auto b = draw_topology(c, 7, 1000.0);
    const auto d = draw_topology(c, 8, 1000.0);
    CHECK(a.beta_SR == b.beta_SR);
    CHECK(a.beta_RD == b.beta_RD);
    CHECK(a.beta_SR != d.beta_SR);
    CHECK_NOTHROW(a.validate(c.K));
    // Nothing closer than the clamp distance with +3 sigma shadowing.
    const double cap = pathloss_beta(35.0, 3.0 * std::sqrt(3.16));
    CHECK((a.beta_SR.array() <= cap).all());
}

TEST_CASE("large-scale profile validation")
{
    SystemConfig c;
    auto p = uniform_profile(c, 1.0);
    CHECK_NOTHROW(p.validate(c.K));
    CHECK_THROWS_AS(p.validate(c.K + 1), std::invalid_argument);
    p.beta_RD(0) = 0.0;
    CHECK_THROWS_AS(p.validate(c.K), std::invalid_argument);
    CHECK_THROWS_AS(uniform_profile(c, -1.0), std::invalid_argument);
}

TEST_CASE("JSON configuration maps one to one onto the struct")
{
    const auto j = nlohmann::json::parse(R"({"K": 4, "N": 20, "M": 24, "tau": 8, "rho_db": 10,
        "sigma2_SI_db": 0, "duplex_mode": "hd", "strategy": "nors", "csit_mode": "perfect", "alpha_SR": 0.5})");
    const auto c = config_from_json(j);
    CHECK(c.K == 4);
    CHECK(c.N == 20);
    CHECK(c.M == 24);
    CHECK(c.rho == doctest::Approx(10.0));
    CHECK(c.sigma2_SI == doctest::Approx(1.0));
    CHECK(c.duplex_mode == DuplexMode::HD);
    CHECK(c.strategy == Strategy::NoRS);
    CHECK(c.csit_mode == CsitMode::Perfect);
    CHECK(c.effective_alpha_sr() == 0.5);
    CHECK(c.effective_alpha_rd() == doctest::Approx(0.1));

    const auto back = config_from_json(to_json(c));
    CHECK(to_json(back) == to_json(c));

    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"KK": 3})")), std::invalid_argument);
    CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"K": 20})")), std::invalid_argument);
}
