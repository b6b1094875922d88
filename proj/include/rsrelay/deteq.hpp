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

#include "rsrelay/channel.hpp"
#include "rsrelay/config.hpp"
#include "rsrelay/rates.hpp"

#include <stdexcept>

namespace rsrelay
{

/// Thrown when the damped fixed-point iteration runs out of iterations.
class ConvergenceError : public std::runtime_error
{
  public:
    ConvergenceError(const std::string& what, double residual) : std::runtime_error(what), residual_(residual) {}
    double residual() const noexcept { return residual_; }

  private:
    double residual_;
};

struct FixedPointSolution
{
    RVector delta;         ///< delta_k = (1/n) tr(D_k T)
    double t_scalar = 0.0; ///< T = t_scalar * I
    double residual = 0.0;
    int iterations = 0;
};

struct DerivativeSolution
{
    RVector delta_prime;
    double t_prime_scalar = 0.0;
    double spectral_radius = 0.0; ///< of the iteration matrix A
};

/// delta_k = c_k / ((1/n) sum_j c_j / (1 + delta_j) + alpha), damped (0.5) from delta = 1/alpha.
/// Convergence is declared when max |step| < tol * max(1, max |delta|).
FixedPointSolution solve_fixed_point(const RVector& c, int n, double alpha, double tol = 1e-12,
                                     int max_iter = 10000);

/// Derivative of the fixed point along the perturbation kappa * I:
/// delta' = b + A delta', A_jl = c_j c_l t^2 / (n (1 + delta_l)^2), b_j = c_j t^2 kappa.
/// kappa = 1 gives -d delta / d alpha.
DerivativeSolution solve_derivative(const FixedPointSolution& fp, const RVector& c, double kappa, int n);

/// sigma^2 of the estimates for a large-scale vector under cfg's CSIT mode.
RVector estimate_variances(const RVector& beta, const SystemConfig& cfg);

/// (1/N) tr T_RR per unit decoder trace: sigma2_SI * M under FD, 0 under HD.
double si_trace_density(const SystemConfig& cfg);

struct FirstHopDE
{
    RVector delta;
    RVector delta_noise;   ///< delta'' under the identity perturbation
    double si_trace = 0.0; ///< see si_trace_density
    Eigen::MatrixXd mu;    ///< mu_jk, zero diagonal
    RVector sinr;
};

FirstHopDE de_first_hop(const SystemConfig& cfg, const RVector& sigma2_SR, const RVector& beta_SR);

struct SecondHopBasis
{
    RVector sigma2;
    RVector beta;
    RVector delta;
    RVector delta_prime; ///< under the identity perturbation
    double lambda_bar = 0.0;
    Eigen::MatrixXd Q; ///< Q_jk: leakage of precoder j into user k; Q_kk is the own-signal term
};

/// K / ((1/M) sum_k delta'_k / (1 + delta_k)^2)
double de_lambda_bar(const RVector& delta, const RVector& delta_prime, int M);

Eigen::MatrixXd de_Q(const RVector& delta, const RVector& delta_prime, const RVector& sigma2, const RVector& beta,
                     int M);

SecondHopBasis de_second_hop_basis(const SystemConfig& cfg, const RVector& sigma2_RD, const RVector& beta_RD);

/// Mean over users of the per-unit-power interference lambda_bar (1/K) sum_{j!=k} Q_jk / (M (1+delta_k)^2).
/// With t = K / (rho Ybar) the private interference sits at K times the noise floor.
double de_ybar(const SystemConfig& cfg, const SecondHopBasis& basis);

/// The signal-to-interference-plus-noise form evaluated at unit power; kept for comparison only.
double de_ybar_literal(const SystemConfig& cfg, const SecondHopBasis& basis);

/// q_k = 1 / (lambda_bar (rho t / K) sum_j Q_jk / (M (1+delta_k)^2) + 1)
RVector de_q_weights(const SystemConfig& cfg, const SecondHopBasis& basis, double t);

/// Large-system value of |g_k^H f_c|^2 for unit-norm f_c built from alpha_weights.
RVector de_common_gain(int M, const RVector& sigma2, const RVector& beta, const RVector& alpha_weights);

enum class CommonNumerator
{
    UnitNorm,     ///< f_c carries no lambda factor (matches simulation)
    LambdaScaled, ///< extra lambda_bar in the numerator
};

struct SecondHopSinrs
{
    RVector priv;
    RVector common; ///< zeros for NoRS
    double common_min = 0.0;
};

SecondHopSinrs de_second_hop(const SystemConfig& cfg, const SecondHopBasis& basis, const RVector& alpha_weights,
                             double t, CommonNumerator convention = CommonNumerator::UnitNorm);

struct DeterministicEquivalents
{
    FirstHopDE first_hop;
    SecondHopBasis second_hop;
    double Ybar = 0.0;
    double t = 1.0;
    RVector q_weights;
    RVector alpha_weights;
    SecondHopSinrs sinr;
    RateReport rates;
};

DeterministicEquivalents compute_de(const SystemConfig& cfg, const LargeScaleProfile& profile);

RateReport de_sum_rate(const SystemConfig& cfg, const LargeScaleProfile& profile);

} // namespace rsrelay
