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

#include "siw/sir.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "siw/kernels.hpp"
#include "siw/parallel.hpp"
#include "siw/randmat.hpp"

namespace siw {

namespace {

// The proposal stream layout: substream 0 resamples, substream 1+m drives
// proposal draw m. Fixed here so every execution path sees the same draws.
constexpr std::uint64_t kResampleSubstream = 0;
constexpr std::uint64_t kProposalSubstreamBase = 1;

double kahan_sum(const std::vector<double>& v) {
  double s = 0.0, comp = 0.0;
  for (double x : v) {
    double y = x - comp;
    double t = s + y;
    comp = (t - s) - y;
    s = t;
  }
  return s;
}

void validate_sir_nu(double nu) {
  // lgamma(nu-1) is guaranteed to 1e-12 relative accuracy on [0.5, 1e4];
  // reject arguments outside that window.
  if (!(nu - 1.0 >= 0.5 && nu - 1.0 <= 1e4))
    throw ParameterError("SIR sampler requires nu-1 in [0.5, 1e4]");
}

// Quadratic forms q_i = Gamma_i' psi Gamma_i for all columns.
void quadratic_forms(const OrthogonalMatrix& gamma, const SquareMatrix& psi,
                     std::vector<double>& q, std::vector<double>& scratch) {
  const auto& k = kernels::active();
  const int n = gamma.dim();
  q.resize(n);
  scratch.resize(n);
  for (int i = 0; i < n; ++i) {
    const double* gi = gamma.col(i).data();
    for (int r = 0; r < n; ++r) {
      scratch[r] = k.dot(psi.row(r), gi, static_cast<std::size_t>(n));
    }
    q[i] = k.dot(gi, scratch.data(), static_cast<std::size_t>(n));
  }
}

double log_weight_from_forms(const std::vector<double>& q, double nu, double lgamma_num1) {
  double acc = 0.0;
  for (double qi : q) {
    if (!(qi > 0.0))
      throw NumericError("log_weight: non-positive quadratic form Gamma_i' psi Gamma_i");
    acc += std::log(0.5 * qi);
  }
  return static_cast<double>(q.size()) * lgamma_num1 - (nu - 1.0) * acc;
}

ProposalDraw make_proposal(const SIWParams& params, double lgamma_num1, RandomStream& rng,
                           std::vector<double>& q, std::vector<double>& scratch) {
  const int n = params.dim();
  OrthogonalMatrix gamma0 = sample_haar_orthogonal(n, rng);
  quadratic_forms(gamma0, params.psi(), q, scratch);
  const double lw = log_weight_from_forms(q, params.nu(), lgamma_num1);

  std::vector<double> lam(n);
  for (int i = 0; i < n; ++i) {
    lam[i] = sample_inverse_gamma(params.nu() - 1.0, 0.5 * q[i], rng);
  }

  // Sort eigenvalues descending and carry the columns of Gamma along.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return lam[a] > lam[b]; });

  ProposalDraw draw;
  draw.factor.lambdas.resize(n);
  for (int i = 0; i < n; ++i) draw.factor.lambdas[i] = lam[order[i]];
  draw.factor.gamma = gamma0.permuted_columns(order);
  draw.log_weight = lw;
  return draw;
}

void validate_probabilities(const std::vector<double>& p) {
  if (p.empty()) throw ParameterError("probability vector is empty");
  for (double x : p) {
    if (!(x >= 0.0)) throw ParameterError("probability vector has a negative or NaN entry");
  }
  if (std::fabs(kahan_sum(p) - 1.0) > 1e-9)
    throw ParameterError("probability vector does not sum to 1 within 1e-9");
}

Provenance sir_provenance(const SIWParams& params, const RandomStream& rng,
                          long long m, long long n, long long mt) {
  Provenance prov;
  prov.algorithm = mt > 0 ? "siw-sir-clipped" : "siw-sir";
  prov.seed = rng.seed();
  prov.stream_index = rng.stream_index();
  prov.nu = params.nu();
  prov.dim = params.dim();
  prov.psi_descriptor = "dense";
  prov.proposal_count = m;
  prov.sample_count = n;
  prov.clip_count = mt;
  return prov;
}

SirResult run_sir(const SIWParams& params, long long proposal_count, long long clip_rank,
                  long long n_samples, const RandomStream& rng, int threads) {
  validate_sir_nu(params.nu());
  if (proposal_count < 1) throw ParameterError("SIR sampler: proposal count must be >= 1");
  if (n_samples < 1) throw ParameterError("SIR sampler: sample count must be >= 1");
  if (clip_rank < 0 || clip_rank > proposal_count)
    throw ParameterError("SIR sampler: clip rank must be in [1, M]");

  const double lg = std::lgamma(params.nu() - 1.0);
  SirResult result;
  result.batch.dim = params.dim();
  result.batch.pool.resize(static_cast<std::size_t>(proposal_count));
  result.weights.log_weights.resize(static_cast<std::size_t>(proposal_count));

  parallel_for(proposal_count, threads, [&](long long m) {
    RandomStream sub = rng.substream(kProposalSubstreamBase + static_cast<std::uint64_t>(m));
    std::vector<double> q, scratch;
    ProposalDraw draw = make_proposal(params, lg, sub, q, scratch);
    result.batch.pool[static_cast<std::size_t>(m)] = std::move(draw.factor);
    result.weights.log_weights[static_cast<std::size_t>(m)] = draw.log_weight;
  });

  if (clip_rank > 0) {
    result.weights.log_weights_clipped = clip_log_weights(result.weights.log_weights, clip_rank);
    result.weights.clipped = true;
    result.weights.clip_threshold_index = clip_rank;
  } else {
    result.weights.log_weights_clipped = result.weights.log_weights;
  }
  result.weights.probabilities = normalize_weights(result.weights.log_weights_clipped);
  result.ess_value = ess(result.weights.probabilities);
  result.ess_percent = 100.0 * result.ess_value / static_cast<double>(proposal_count);

  RandomStream resample_rng = rng.substream(kResampleSubstream);
  result.batch.indices =
      multinomial_resample(result.weights.probabilities, n_samples, resample_rng);
  result.batch.provenance = sir_provenance(params, rng, proposal_count, n_samples, clip_rank);
  return result;
}

}  // namespace

double log_weight(const OrthogonalMatrix& gamma, const SIWParams& params) {
  validate_sir_nu(params.nu());
  if (gamma.dim() != params.dim()) throw ShapeError("log_weight: dimension mismatch");
  std::vector<double> q, scratch;
  quadratic_forms(gamma, params.psi(), q, scratch);
  return log_weight_from_forms(q, params.nu(), std::lgamma(params.nu() - 1.0));
}

ProposalDraw sample_proposal(const SIWParams& params, RandomStream& rng) {
  validate_sir_nu(params.nu());
  std::vector<double> q, scratch;
  return make_proposal(params, std::lgamma(params.nu() - 1.0), rng, q, scratch);
}

std::vector<double> normalize_weights(const std::vector<double>& log_weights) {
  if (log_weights.empty()) throw ParameterError("normalize_weights: empty input");
  for (double lw : log_weights) {
    if (std::isnan(lw)) throw NumericError("normalize_weights: NaN log weight");
    if (std::isinf(lw)) throw NumericError("normalize_weights: non-finite log weight");
  }
  const auto& k = kernels::active();
  const double shift = k.max(log_weights.data(), log_weights.size());
  std::vector<double> p(log_weights.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::exp(log_weights[i] - shift);
  const double total = kahan_sum(p);
  for (double& x : p) x /= total;
  return p;
}

std::vector<double> clip_log_weights(const std::vector<double>& log_weights,
                                     long long clip_rank) {
  const long long m = static_cast<long long>(log_weights.size());
  if (clip_rank < 1 || clip_rank > m)
    throw ParameterError("clip_log_weights: clip rank must be in [1, M]");
  std::vector<double> sorted = log_weights;
  std::nth_element(sorted.begin(), sorted.begin() + (clip_rank - 1), sorted.end(),
                   std::greater<double>());
  const double threshold = sorted[static_cast<std::size_t>(clip_rank - 1)];
  std::vector<double> out = log_weights;
  for (double& x : out) {
    if (x > threshold) x = threshold;
  }
  return out;
}

std::vector<std::uint32_t> multinomial_resample(const std::vector<double>& probabilities,
                                                long long n_samples, RandomStream& rng) {
  validate_probabilities(probabilities);
  if (n_samples < 0) throw ParameterError("multinomial_resample: negative sample count");
  std::vector<std::uint32_t> out(static_cast<std::size_t>(n_samples));
  if (n_samples == 0) return out;

  std::vector<double> cdf(probabilities.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    acc += probabilities[i];
    cdf[i] = acc;
  }
  const double total = acc;
  for (long long n = 0; n < n_samples; ++n) {
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t idx = static_cast<std::size_t>(it - cdf.begin());
    if (idx >= cdf.size()) idx = cdf.size() - 1;
    out[static_cast<std::size_t>(n)] = static_cast<std::uint32_t>(idx);
  }
  return out;
}

double ess(const std::vector<double>& probabilities) {
  validate_probabilities(probabilities);
  const auto& k = kernels::active();
  return 1.0 / k.dot(probabilities.data(), probabilities.data(), probabilities.size());
}

SirResult sample_siw_sir(const SIWParams& params, long long proposal_count,
                         long long n_samples, const RandomStream& rng, int threads) {
  return run_sir(params, proposal_count, 0, n_samples, rng, threads);
}

SirResult sample_siw_sir_clipped(const SIWParams& params, long long proposal_count,
                                 long long clip_rank, long long n_samples,
                                 const RandomStream& rng, int threads) {
  if (clip_rank < 1) throw ParameterError("SIR sampler: clip rank must be in [1, M]");
  return run_sir(params, proposal_count, clip_rank, n_samples, rng, threads);
}

long long clip_rank_from_exponent(long long proposal_count, double exponent) {
  if (!(exponent > 0.0 && exponent <= 1.0))
    throw ParameterError("clip exponent must be in (0, 1]");
  const double raw = std::ceil(std::pow(static_cast<double>(proposal_count), exponent));
  long long rank = static_cast<long long>(raw);
  if (rank < 1) rank = 1;
  if (rank > proposal_count) rank = proposal_count;
  return rank;
}

std::vector<double> proposal_log_weights(const SIWParams& params, long long proposal_count,
                                         const RandomStream& rng, int threads) {
  validate_sir_nu(params.nu());
  if (proposal_count < 1) throw ParameterError("proposal_log_weights: M must be >= 1");
  const double lg = std::lgamma(params.nu() - 1.0);
  std::vector<double> lw(static_cast<std::size_t>(proposal_count));
  parallel_for(proposal_count, threads, [&](long long m) {
    RandomStream sub = rng.substream(kProposalSubstreamBase + static_cast<std::uint64_t>(m));
    OrthogonalMatrix gamma = sample_haar_orthogonal(params.dim(), sub);
    std::vector<double> q, scratch;
    quadratic_forms(gamma, params.psi(), q, scratch);
    lw[static_cast<std::size_t>(m)] = log_weight_from_forms(q, params.nu(), lg);
  });
  return lw;
}

SirRunSummary sir_run_summary(const SIWParams& params, long long proposal_count,
                              long long clip_rank, long long n_samples,
                              const RandomStream& rng, int threads) {
  validate_sir_nu(params.nu());
  if (proposal_count < 1 || n_samples < 1)
    throw ParameterError("sir_run_summary: M and N must be >= 1");
  if (clip_rank < 0 || clip_rank > proposal_count)
    throw ParameterError("sir_run_summary: clip rank must be in [1, M]");
  const auto& k = kernels::active();
  const int n = params.dim();

  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> lw = proposal_log_weights(params, proposal_count, rng, threads);
  const auto t1 = std::chrono::steady_clock::now();

  SirRunSummary summary;
  summary.max_log_weight = k.max(lw.data(), lw.size());
  summary.min_log_weight = *std::min_element(lw.begin(), lw.end());

  std::vector<double> lwc = clip_rank > 0 ? clip_log_weights(lw, clip_rank) : lw;
  std::vector<double> p = normalize_weights(lwc);
  summary.ess_value = ess(p);
  summary.ess_percent = 100.0 * summary.ess_value / static_cast<double>(proposal_count);

  RandomStream resample_rng = rng.substream(kResampleSubstream);
  std::vector<std::uint32_t> indices = multinomial_resample(p, n_samples, resample_rng);
  std::vector<std::int64_t> counts(static_cast<std::size_t>(proposal_count), 0);
  for (auto idx : indices) ++counts[idx];

  // Second pass: regenerate only the selected draws (same substreams give
  // bit-identical factors) and accumulate the count-weighted mean. Chunked
  // so regeneration runs in parallel while accumulation stays in m-order.
  summary.mean_sigma = SquareMatrix(n);
  const double lg = std::lgamma(params.nu() - 1.0);
  const long long chunk = 256;
  std::vector<long long> selected;
  selected.reserve(256);
  for (long long base = 0; base < proposal_count; base += chunk) {
    const long long hi = std::min(proposal_count, base + chunk);
    selected.clear();
    for (long long m = base; m < hi; ++m) {
      if (counts[static_cast<std::size_t>(m)] > 0) selected.push_back(m);
    }
    if (selected.empty()) continue;
    std::vector<SquareMatrix> composed(selected.size());
    parallel_for(static_cast<long long>(selected.size()), threads, [&](long long j) {
      const long long m = selected[static_cast<std::size_t>(j)];
      RandomStream sub = rng.substream(kProposalSubstreamBase + static_cast<std::uint64_t>(m));
      std::vector<double> q, scratch;
      ProposalDraw draw = make_proposal(params, lg, sub, q, scratch);
      composed[static_cast<std::size_t>(j)] = draw.factor.compose_power(1);
    });
    for (std::size_t j = 0; j < selected.size(); ++j) {
      const double w = static_cast<double>(counts[static_cast<std::size_t>(selected[j])]) /
                       static_cast<double>(n_samples);
      k.axpy(w, composed[j].data(), summary.mean_sigma.data(), composed[j].size());
    }
  }
  const auto t2 = std::chrono::steady_clock::now();
  summary.proposal_seconds = std::chrono::duration<double>(t1 - t0).count();
  (void)t2;
  return summary;
}

}  // namespace siw
