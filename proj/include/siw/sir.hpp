// Copyright 2026 The siwsample Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SIW_SIR_HPP
#define SIW_SIR_HPP

#include <cstdint>
#include <vector>

#include "siw/rng.hpp"
#include "siw/types.hpp"

namespace siw {

/// Unnormalized log importance weight of an eigenvector matrix:
///   K*lgamma(nu-1) - sum_i (nu-1)*log(Gamma_i' psi Gamma_i / 2).
/// Depends on Gamma only, never on the eigenvalues, and is bounded above by
/// K*lgamma(nu-1) - K*(nu-1)*log(lambda_min(psi)/2). All weight arithmetic
/// stays in the log domain; raw weights overflow double already for
/// moderate nu (K=1, nu=50, psi=I gives w ~ 7e75).
double log_weight(const OrthogonalMatrix& gamma, const SIWParams& params);

/// One proposal draw: Gamma ~ Haar, lambda_i | Gamma ~ IG(nu-1,
/// Gamma_i' psi Gamma_i / 2) independently, then eigenvalues sorted
/// descending with the same permutation applied to the columns of Gamma.
ProposalDraw sample_proposal(const SIWParams& params, RandomStream& rng);

/// Log-sum-exp normalization of log weights into probabilities.
std::vector<double> normalize_weights(const std::vector<double>& log_weights);

/// Weight clipping: every entry strictly greater than the clip_rank-th
/// greatest entry is replaced by that value; ties at the threshold are
/// left unchanged. Output order matches input order.
std::vector<double> clip_log_weights(const std::vector<double>& log_weights,
                                     long long clip_rank);

/// n i.i.d. categorical draws over {0..M-1} with the given probabilities.
std::vector<std::uint32_t> multinomial_resample(const std::vector<double>& probabilities,
                                                long long n_samples, RandomStream& rng);

/// Effective sample size 1 / sum p_m^2, in (0, M].
double ess(const std::vector<double>& probabilities);

/// Result of one full SIR run, with the weight diagnostics attached.
struct SirResult {
  SampleBatch batch;
  WeightVector weights;
  double ess_value = 0.0;      // 1/sum p^2
  double ess_percent = 0.0;    // 100 * ess / M
};

/// Full SIR pipeline: M proposals, closed-form log weights, log-sum-exp
/// normalization, multinomial resampling of N outputs.
/// Substream layout under `rng`: proposal m uses substream 1+m, the
/// resampler uses substream 0; thread count does not affect results.
SirResult sample_siw_sir(const SIWParams& params, long long proposal_count,
                         long long n_samples, const RandomStream& rng, int threads = 1);

/// Same pipeline with weight clipping at rank clip_rank inserted before
/// normalization.
SirResult sample_siw_sir_clipped(const SIWParams& params, long long proposal_count,
                                 long long clip_rank, long long n_samples,
                                 const RandomStream& rng, int threads = 1);

/// Clip rank from the exponent convention clip_rank = ceil(M^e).
long long clip_rank_from_exponent(long long proposal_count, double exponent);

/// Log weights of M proposal draws without retaining the factors
/// (the weight ignores the eigenvalues, and each draw generates its
/// eigenvector matrix before its eigenvalues, so this produces exactly
/// the weights sample_siw_sir would see under the same stream).
std::vector<double> proposal_log_weights(const SIWParams& params, long long proposal_count,
                                         const RandomStream& rng, int threads = 1);

/// Memory-flat SIR run: first pass records log weights, second pass
/// regenerates each selected draw from its substream and accumulates the
/// count-weighted mean of Sigma. Bit-identical to running sample_siw_sir
/// and averaging the batch, but O(K^2 + M) memory.
struct SirRunSummary {
  SquareMatrix mean_sigma;
  double ess_value = 0.0;
  double ess_percent = 0.0;
  double max_log_weight = 0.0;
  double min_log_weight = 0.0;
  double proposal_seconds = 0.0;  // wall time of the proposal pass
};
SirRunSummary sir_run_summary(const SIWParams& params, long long proposal_count,
                              long long clip_rank,  // 0 = no clipping
                              long long n_samples, const RandomStream& rng, int threads = 1);

}  // namespace siw

#endif
