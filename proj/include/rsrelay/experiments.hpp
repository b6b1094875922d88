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
#include "rsrelay/rates.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

namespace rsrelay
{

enum class SweepAxis
{
    RhoDb,
    Sigma2SiDb,
    M, ///< sets M and N together
    K
};

std::string_view to_string(SweepAxis a);
SweepAxis parse_axis(std::string_view s);

enum class ProfileMode
{
    Uniform,
    Topology ///< drawn per seed
};

struct SweepSpec
{
    std::string name = "sweep";
    SweepAxis axis = SweepAxis::RhoDb;
    std::vector<double> values;
    SystemConfig base;
    ProfileMode profile_mode = ProfileMode::Uniform;
    double uniform_beta = 1.0;
    double disk_diameter_m = 1000.0;
    int n_draws = 200;
    std::vector<std::uint64_t> seeds{1};
    bool emit_csv = true;
    bool emit_plot = true;
    bool source_mc = true;
    bool source_de = true;
    std::vector<Strategy> strategies{Strategy::RS, Strategy::NoRS};
    std::vector<DuplexMode> duplexes{DuplexMode::FD};
    std::vector<CsitMode> csits{CsitMode::Imperfect};

    void validate() const;
};

/// One sweep object. Keys: name, axis, values, base, profile_mode, uniform_beta, disk_diameter_m,
/// n_draws, seeds, emit, sources, strategies, duplexes, csits. A "paper" object, when present and
/// `paper_scale` is set, is merged over the sweep before parsing.
SweepSpec sweep_from_json(const nlohmann::json& j, bool paper_scale = false);

/// A file holds either a single sweep or {"common": {...}, "sweeps": [...]}.
std::vector<SweepSpec> load_sweep_file(const std::filesystem::path& path, bool paper_scale = false);

/// base with the axis value applied (dB axes converted to linear here).
SystemConfig config_at(const SweepSpec& spec, double axis_value);

struct ResultRow
{
    std::string axis;
    double axis_value = 0.0;
    Strategy strategy = Strategy::RS;
    DuplexMode duplex = DuplexMode::FD;
    CsitMode csit = CsitMode::Imperfect;
    RateSource source = RateSource::MonteCarlo;
    std::uint64_t seed = 0;
    int n_draws = 0;
    double sum_rate = 0.0;
    double rate_hop1 = 0.0;
    double rate_hop2 = 0.0;
    double rate_common = 0.0;
    double t_split = 1.0;
    double lambda = 0.0;
};

using ResultTable = std::vector<ResultRow>;

ResultRow row_from_report(const RateReport& r, const SweepSpec& spec, double axis_value, std::uint64_t seed);

/// Worker count from RSRELAY_WORKERS, falling back to the OpenMP default.
int worker_count();

/// Cells (axis value x csit x duplex x strategy x seed) run on a bounded pool; rows come back in axis order.
ResultTable run_sweep(const SweepSpec& spec, int workers = 0);

inline constexpr const char* kCsvHeader = "axis,axis_value,strategy,duplex,csit,source,seed,n_draws,sum_rate,"
                                          "rate_hop1,rate_hop2,rate_common,t_split,lambda";

std::string format_csv(const ResultTable& table);
void emit_csv(const ResultTable& table, const std::filesystem::path& path);
ResultTable parse_csv(const std::string& text);
ResultTable read_csv(const std::filesystem::path& path);

/// Static SVG: DE as lines, MC as markers, one series per (strategy, duplex, csit), averaged over seeds.
std::string render_plot(const ResultTable& table, const std::string& title);
void emit_plot(const ResultTable& table, const std::filesystem::path& path, const std::string& title);

struct CompareCell
{
    std::string axis;
    double axis_value = 0.0;
    Strategy strategy = Strategy::RS;
    DuplexMode duplex = DuplexMode::FD;
    CsitMode csit = CsitMode::Imperfect;
    std::uint64_t seed = 0;
    double mc = 0.0;
    double de = 0.0;
    double rel_error = 0.0;
    bool pass = false;
};

struct CompareReport
{
    std::vector<CompareCell> cells;
    double max_error = 0.0;
    double median_error = 0.0;
    bool passed = true;
};

/// Pairs mc/de rows on (axis, value, strategy, duplex, csit, seed). Throws on unpaired rows.
CompareReport compare_de_mc(const ResultTable& table, double tolerance);

} // namespace rsrelay
