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

#include "rsrelay/channel.hpp"
#include "rsrelay/rng.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace rsrelay
{

ChannelSet draw_channels(const SystemConfig& cfg, const LargeScaleProfile& profile, std::uint64_t seed,
                         std::uint64_t draw_index)
{
    cfg.validate();
    profile.validate(cfg.K);
    auto eng = make_engine(seed, Stream::Channel, draw_index);

    ChannelSet ch;
    ch.profile = profile;
    ch.G_SR.resize(cfg.N, cfg.K);
    ch.G_RD.resize(cfg.M, cfg.K);
    ch.G_RR.resize(cfg.N, cfg.M);

    // Unit-variance small-scale fading, then column scaling by sqrt(beta).
    fill_complex_gaussian(ch.G_SR, eng, 1.0);
    fill_complex_gaussian(ch.G_RD, eng, 1.0);
    for (int k = 0; k < cfg.K; ++k)
    {
        ch.G_SR.col(k) *= std::sqrt(profile.beta_SR(k));
        ch.G_RD.col(k) *= std::sqrt(profile.beta_RD(k));
    }
    if (cfg.sigma2_SI > 0.0)
        fill_complex_gaussian(ch.G_RR, eng, cfg.sigma2_SI);
    else
        ch.G_RR.setZero();
    return ch;
}

double estimation_variance(double beta, int tau, double p_tr)
{
    const double snr = static_cast<double>(tau) * p_tr;
    return snr * beta * beta / (snr * beta + 1.0);
}

namespace
{
void estimate_link(const CMatrix& G, const RVector& beta, double tau_ptr, Engine& eng, CMatrix& Ghat, CMatrix& E,
                   RVector& sigma2)
{
    CMatrix noise(G.rows(), G.cols());
    fill_complex_gaussian(noise, eng, 1.0);
    Ghat.resize(G.rows(), G.cols());
    sigma2.resize(G.cols());
    const double noise_scale = tau_ptr > 0.0 ? 1.0 / std::sqrt(tau_ptr) : 0.0;
    for (Eigen::Index k = 0; k < G.cols(); ++k)
    {
        const double c = tau_ptr * beta(k) / (tau_ptr * beta(k) + 1.0);
        Ghat.col(k) = c * (G.col(k) + noise_scale * noise.col(k));
        sigma2(k) = c * beta(k);
    }
    E = G - Ghat;
}
} // namespace

EstimationResult mmse_estimate(const ChannelSet& channels, const SystemConfig& cfg, std::uint64_t seed,
                               std::uint64_t draw_index)
{
    cfg.validate();
    EstimationResult est;
    if (cfg.csit_mode == CsitMode::Perfect)
    {
        est.Ghat_SR = channels.G_SR;
        est.Ghat_RD = channels.G_RD;
        est.E_SR = CMatrix::Zero(channels.G_SR.rows(), channels.G_SR.cols());
        est.E_RD = CMatrix::Zero(channels.G_RD.rows(), channels.G_RD.cols());
        est.sigma2_SR = channels.profile.beta_SR;
        est.sigma2_RD = channels.profile.beta_RD;
        return est;
    }
    auto eng = make_engine(seed, Stream::PilotNoise, draw_index);
    const double tau_ptr = static_cast<double>(cfg.tau) * cfg.p_tr;
    estimate_link(channels.G_SR, channels.profile.beta_SR, tau_ptr, eng, est.Ghat_SR, est.E_SR, est.sigma2_SR);
    estimate_link(channels.G_RD, channels.profile.beta_RD, tau_ptr, eng, est.Ghat_RD, est.E_RD, est.sigma2_RD);
    return est;
}

namespace
{
static_assert(std::endian::native == std::endian::little, "fixture I/O assumes a little-endian host");

template <typename T>
void put(std::ostream& os, T v)
{
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is)
{
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is)
        throw std::runtime_error("fixture: truncated file");
    return v;
}

constexpr char kMagic[4] = {'R', 'S', 'R', 'F'};
constexpr std::uint32_t kVersion = 1;
} // namespace

void write_fixture(const std::filesystem::path& path, const std::vector<NamedMatrix>& blocks)
{
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("fixture: cannot open '" + path.string() + "' for writing");
    os.write(kMagic, 4);
    put<std::uint32_t>(os, kVersion);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(blocks.size()));
    for (const auto& [name, m] : blocks)
    {
        put<std::uint32_t>(os, static_cast<std::uint32_t>(name.size()));
        os.write(name.data(), static_cast<std::streamsize>(name.size()));
        put<std::uint64_t>(os, static_cast<std::uint64_t>(m.rows()));
        put<std::uint64_t>(os, static_cast<std::uint64_t>(m.cols()));
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c)
            {
                put<double>(os, m(r, c).real());
                put<double>(os, m(r, c).imag());
            }
    }
    if (!os)
        throw std::runtime_error("fixture: write failed for '" + path.string() + "'");
}

std::vector<NamedMatrix> read_fixture(const std::filesystem::path& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw std::runtime_error("fixture: cannot open '" + path.string() + "'");
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, kMagic, 4) != 0)
        throw std::runtime_error("fixture: bad magic in '" + path.string() + "'");
    if (get<std::uint32_t>(is) != kVersion)
        throw std::runtime_error("fixture: unsupported version");
    const auto count = get<std::uint32_t>(is);
    std::vector<NamedMatrix> blocks;
    blocks.reserve(count);
    for (std::uint32_t b = 0; b < count; ++b)
    {
        const auto len = get<std::uint32_t>(is);
        std::string name(len, '\0');
        is.read(name.data(), len);
        const auto rows = get<std::uint64_t>(is);
        const auto cols = get<std::uint64_t>(is);
        CMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index c = 0; c < m.cols(); ++c)
            {
                const double re = get<double>(is);
                const double im = get<double>(is);
                m(r, c) = {re, im};
            }
        blocks.emplace_back(std::move(name), std::move(m));
    }
    return blocks;
}

std::vector<NamedMatrix> fixture_blocks(const ChannelSet& channels, const EstimationResult& est)
{
    auto as_column = [](const RVector& v) { return CMatrix(v.cast<std::complex<double>>()); };
    return {{"G_SR", channels.G_SR},
            {"G_RD", channels.G_RD},
            {"G_RR", channels.G_RR},
            {"Ghat_SR", est.Ghat_SR},
            {"Ghat_RD", est.Ghat_RD},
            {"E_SR", est.E_SR},
            {"E_RD", est.E_RD},
            {"beta_SR", as_column(channels.profile.beta_SR)},
            {"beta_RD", as_column(channels.profile.beta_RD)},
            {"sigma2_SR", as_column(est.sigma2_SR)},
            {"sigma2_RD", as_column(est.sigma2_RD)}};
}

} // namespace rsrelay
