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

#include <cmath>

namespace rsrelay::testing
{

inline SystemConfig small_config(int K, int N, int M, double rho_db = 20.0)
{
    SystemConfig c;
    c.K = K;
    c.N = N;
    c.M = M;
    c.tau = std::max(2 * K, 8);
    c.rho = db_to_linear(rho_db);
    c.sigma2_SI = 1.0;
    c.lambda_draws = 200;
    return c;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

} // namespace rsrelay::testing
