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
#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace rsrelay
{

using Engine = std::mt19937_64;

// Independent streams are told apart by a tag so that, e.g., channel and
// estimation-noise draws for the same seed never share an engine state.
enum class Stream : std::uint64_t
{
    Topology = 1,
    Channel = 2,
    PilotNoise = 3
};

inline Engine make_engine(std::uint64_t seed, Stream stream, std::uint64_t index = 0)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32)};
    return Engine(seq);
}

/// Fills `m` with i.i.d. CN(0, variance) entries, column-major order.
inline void fill_complex_gaussian(Eigen::MatrixXcd& m, Engine& eng, double variance)
{
    std::normal_distribution<double> nd(0.0, std::sqrt(variance / 2.0));
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r)
        {
            const double re = nd(eng);
            const double im = nd(eng);
            m(r, c) = {re, im};
        }
}

} // namespace rsrelay
