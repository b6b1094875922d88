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

#include "rsrelay/rates.hpp"

#include <cmath>
#include <stdexcept>

namespace rsrelay
{

std::string_view to_string(RateSource s) { return s == RateSource::MonteCarlo ? "mc" : "de"; }

double rate_from_sinr(double sinr, const SystemConfig& cfg)
{
    if (!(sinr >= 0.0))
        throw std::invalid_argument("rate_from_sinr: SINR must be nonnegative");
    return cfg.prelog() * std::log2(1.0 + sinr);
}

Eigen::VectorXd end_to_end(const Eigen::VectorXd& R_SR, const Eigen::VectorXd& R_RD_private, double R_c)
{
    if (R_SR.size() != R_RD_private.size())
        throw std::invalid_argument("end_to_end: per-hop vectors differ in length");
    const double share = R_SR.size() > 0 ? R_c / static_cast<double>(R_SR.size()) : 0.0;
    return R_SR.cwiseMin((R_RD_private.array() + share).matrix());
}

void finalize_report(RateReport& report)
{
    report.R_end2end = end_to_end(report.R_SR, report.R_RD_private, report.R_c);
    report.sum_rate = report.R_end2end.sum();
    report.rate_hop1 = report.R_SR.sum();
    report.rate_hop2 = report.R_c + report.R_RD_private.sum();
}

} // namespace rsrelay
