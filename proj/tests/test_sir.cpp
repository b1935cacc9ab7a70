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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "siw/estimators.hpp"
#include "siw/exact.hpp"
#include "siw/kernels.hpp"
#include "siw/randmat.hpp"
#include "siw/sir.hpp"
#include "support/stats.hpp"

using namespace siw;

namespace {

OrthogonalMatrix identity_gamma(int dim) {
  OrthogonalMatrix g(dim);
  for (int i = 0; i < dim; ++i) g.at(i, i) = 1.0;
  return g;
}

/// psi with a chosen spectrum, conjugated by a Haar matrix.
SquareMatrix psi_with_spectrum(const std::vector<double>& eigs, std::uint64_t seed) {
  RandomStream rng(seed);
  EigenFactor f;
  f.gamma = sample_haar_orthogonal(static_cast<int>(eigs.size()), rng);
  f.lambdas = eigs;
  return f.compose();
}

}  // namespace

TEST_CASE("log weight with psi = I is K (lgamma(nu-1) + (nu-1) log 2)") {
  for (int dim : {1, 3, 10}) {
    const SIWParams params(4.0, SquareMatrix::identity(dim));
    const double lw = log_weight(identity_gamma(dim), params);
    const double expected = dim * (std::lgamma(3.0) + 3.0 * std::log(2.0));
    CHECK(lw == doctest::Approx(expected).epsilon(1e-14));
  }
  // The same value must come out for every orthonormal matrix.
  RandomStream rng(123);
  const SIWParams params(4.0, SquareMatrix::identity(7));
  const double expected = 7.0 * (std::lgamma(3.0) + 3.0 * std::log(2.0));
  for (int rep = 0; rep < 20; ++rep) {
    OrthogonalMatrix g = sample_haar_orthogonal(7, rng);
    CHECK(log_weight(g, params) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("nu=50, K=1, psi=I: weight is Gamma(49) 2^49, about 7e75") {
  const SIWParams params(50.0, SquareMatrix::identity(1));
  const double lw = log_weight(identity_gamma(1), params);
  CHECK(lw == doctest::Approx(std::lgamma(49.0) + 49.0 * std::log(2.0)).epsilon(1e-14));
  CHECK(lw == doctest::Approx(std::log(6.99e75)).epsilon(1e-3));
}

TEST_CASE("log weight bound from the smallest eigenvalue of psi") {
  const int dim = 10;
  const double nu = 4.0;
  std::vector<double> eigs = {0.5, 0.7, 0.9, 1.1, 1.3, 1.5, 1.7, 1.9, 2.1, 2.3};
  const SIWParams params(nu, psi_with_spectrum(eigs, 777));
  const double bound = dim * std::lgamma(nu - 1.0) - dim * (nu - 1.0) * std::log(0.5 * 0.5);
  RandomStream rng(778);
  for (int rep = 0; rep < 10000; ++rep) {
    OrthogonalMatrix g = sample_haar_orthogonal(dim, rng);
    CHECK(log_weight(g, params) <= bound + 1e-9);
  }
}

TEST_CASE("log weight depends on Gamma only") {
  const SIWParams params(5.0, psi_with_spectrum({2.0, 1.0, 0.5}, 11));
  RandomStream rng(12);
  OrthogonalMatrix g = sample_haar_orthogonal(3, rng);
  CHECK(log_weight(g, params) == log_weight(g, params));
  // Column permutations reorder the sum only.
  std::vector<int> perm = {2, 0, 1};
  OrthogonalMatrix gp = g.permuted_columns(perm);
  CHECK(log_weight(gp, params) == doctest::Approx(log_weight(g, params)).epsilon(1e-13));
}

TEST_CASE("log weight rejects nu outside the supported lgamma window") {
  const SquareMatrix eye = SquareMatrix::identity(3);
  CHECK_THROWS_AS(log_weight(identity_gamma(3), SIWParams(1.2, eye)), ParameterError);
  CHECK_THROWS_AS(log_weight(identity_gamma(3), SIWParams(1.0e4 + 2.0, eye)), ParameterError);
}

TEST_CASE("SIWParams validation") {
  CHECK_THROWS_AS(SIWParams(0.9, SquareMatrix::identity(3)), ParameterError);
  SquareMatrix asym = SquareMatrix::identity(3);
  asym(0, 1) = 1e-6;  // asymmetric beyond 1e-10
  CHECK_THROWS_AS(SIWParams(4.0, asym), ParameterError);
  SquareMatrix indef = SquareMatrix::identity(2);
  indef(0, 0) = -1.0;
  CHECK_THROWS_AS(SIWParams(4.0, indef), ParameterError);
}

TEST_CASE("normalize_weights basics") {
  CHECK(normalize_weights({7.5, 7.5, 7.5, 7.5}) == std::vector<double>{0.25, 0.25, 0.25, 0.25});
  auto p = normalize_weights({0.0, std::log(3.0)});
  CHECK(p[0] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(p[1] == doctest::Approx(0.75).epsilon(1e-14));

  // Shift invariance (exact when the shift is exactly representable).
  const std::vector<double> v = {0.0, -1.0, -2.0, 3.0};
  std::vector<double> shifted = v;
  for (double& x : shifted) x += 1000.0;
  CHECK(normalize_weights(v) == normalize_weights(shifted));

  CHECK_THROWS_AS(normalize_weights({}), ParameterError);
  CHECK_THROWS_AS(normalize_weights({1.0, std::nan("")}), NumericError);
  CHECK_THROWS_AS(normalize_weights({1.0, INFINITY}), NumericError);
}

TEST_CASE("normalize_weights survives a 1e4 span in log range") {
  std::vector<double> lw;
  for (int i = 0; i < 100; ++i) lw.push_back(-100.0 * i);  // 0 .. -9900
  auto p = normalize_weights(lw);
  double total = 0.0;
  bool all_zero = true;
  for (double x : p) {
    CHECK(std::isfinite(x));
    CHECK(x >= 0.0);
    if (x > 0.0) all_zero = false;
    total += x;
  }
  CHECK(!all_zero);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(p[0] > 0.99);
}

TEST_CASE("clip_log_weights unit cases") {
  CHECK(clip_log_weights({5, 4, 3, 2, 1}, 2) == std::vector<double>{4, 4, 3, 2, 1});
  CHECK(clip_log_weights({5, 4, 3, 2, 1}, 1) == std::vector<double>{5, 4, 3, 2, 1});
  CHECK(clip_log_weights({5, 5, 3}, 2) == std::vector<double>{5, 5, 3});
  CHECK(clip_log_weights({1, 3, 2}, 2) == std::vector<double>{1, 2, 2});
  CHECK_THROWS_AS(clip_log_weights({1, 2, 3}, 0), ParameterError);
  CHECK_THROWS_AS(clip_log_weights({1, 2, 3}, 4), ParameterError);
}

TEST_CASE("clipping never raises an entry and keeps sub-threshold entries") {
  RandomStream rng(13);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> v(40);
    for (auto& x : v) x = 10.0 * rng.normal();
    const long long mt = 1 + static_cast<long long>(rng.below(40));
    auto out = clip_log_weights(v, mt);
    std::vector<double> sorted = v;
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());
    const double threshold = sorted[static_cast<std::size_t>(mt - 1)];
    for (std::size_t i = 0; i < v.size(); ++i) {
      CHECK(out[i] <= v[i]);
      if (v[i] <= threshold) CHECK(out[i] == v[i]);
      if (v[i] > threshold) CHECK(out[i] == threshold);
    }
  }
}

TEST_CASE("multinomial resampling") {
  RandomStream rng(14);
  auto all = multinomial_resample({1.0, 0.0, 0.0}, 5, rng);
  CHECK(all == std::vector<std::uint32_t>{0, 0, 0, 0, 0});

  CHECK(multinomial_resample({0.5, 0.5}, 0, rng).empty());

  CHECK_THROWS_AS(multinomial_resample({0.5, 0.6}, 10, rng), ParameterError);
  CHECK_THROWS_AS(multinomial_resample({1.5, -0.5}, 10, rng), ParameterError);
  CHECK_THROWS_AS(multinomial_resample({}, 10, rng), ParameterError);

  // Uniform probabilities: chi-square goodness of fit at level 0.01.
  const int n = 100000;
  auto idx = multinomial_resample({0.25, 0.25, 0.25, 0.25}, n, rng);
  std::vector<long long> counts(4, 0);
  for (auto i : idx) ++counts[i];
  CHECK(teststats::chi2_gof_pvalue(counts, std::vector<double>(4, n / 4.0)) > 0.01);
}

TEST_CASE("ess") {
  CHECK(ess({0.25, 0.25, 0.25, 0.25}) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(ess({1.0, 0.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(ess({0.5, 0.5, 0.0, 0.0}) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(ess({0.9, 0.2}), ParameterError);
}

TEST_CASE("proposal draws: sorted eigenvalues, orthonormal permuted Gamma") {
  const SIWParams params(4.0, psi_with_spectrum({3.0, 1.0, 0.3, 0.1}, 15));
  RandomStream rng(16);
  for (int rep = 0; rep < 200; ++rep) {
    ProposalDraw d = sample_proposal(params, rng);
    for (std::size_t i = 1; i < d.factor.lambdas.size(); ++i)
      CHECK(d.factor.lambdas[i - 1] >= d.factor.lambdas[i]);
    CHECK(d.factor.gamma.orthonormality_defect() <= 1e-10);
    CHECK(std::isfinite(d.log_weight));
  }
}

TEST_CASE("proposal with psi = 5I matches the exact sampler's law") {
  const int dim = 4;
  const double nu = 4.0;
  const SIWParams params(nu, SquareMatrix::scaled_identity(dim, 5.0));
  RandomStream rng(17);
  const int n = 20000;
  double lam_sum = 0.0;
  double first_lw = 0.0;
  for (int i = 0; i < n; ++i) {
    ProposalDraw d = sample_proposal(params, rng);
    for (double l : d.factor.lambdas) lam_sum += l;
    if (i == 0) first_lw = d.log_weight;
    CHECK(d.log_weight == doctest::Approx(first_lw).epsilon(1e-12));  // constant weight
  }
  // Each lambda is marginally IG(3, 2.5) with mean 1.25, sd sqrt(1.5625).
  const double mean_sum = lam_sum / n;
  const double se = std::sqrt(dim * 1.5625 / n);
  CHECK(std::fabs(mean_sum - dim * 1.25) <= 4.0 * se);
}

TEST_CASE("proposal eigenvalue sum matches an independent re-implementation") {
  // K=2, psi = diag(10, 0.1): oracle draws the conditional law directly
  // with plain loops and no permutation machinery.
  const int dim = 2;
  const double nu = 4.0;
  SquareMatrix psi(dim);
  psi(0, 0) = 10.0;
  psi(1, 1) = 0.1;
  const SIWParams params(nu, psi);

  const int n = 100000;
  RandomStream rng_main(18);
  double sum_main = 0.0, sq_main = 0.0;
  for (int i = 0; i < n; ++i) {
    ProposalDraw d = sample_proposal(params, rng_main);
    const double s = d.factor.lambdas[0] + d.factor.lambdas[1];
    sum_main += s;
    sq_main += s * s;
  }

  RandomStream rng_oracle(19);
  double sum_oracle = 0.0, sq_oracle = 0.0;
  for (int i = 0; i < n; ++i) {
    OrthogonalMatrix g = sample_haar_orthogonal(dim, rng_oracle);
    double s = 0.0;
    for (int col = 0; col < dim; ++col) {
      double q = 0.0;
      for (int r = 0; r < dim; ++r)
        for (int c = 0; c < dim; ++c) q += g.at(r, col) * psi(r, c) * g.at(c, col);
      s += sample_inverse_gamma(nu - 1.0, 0.5 * q, rng_oracle);
    }
    sum_oracle += s;
    sq_oracle += s * s;
  }

  const double m1 = sum_main / n, m2 = sum_oracle / n;
  const double v1 = sq_main / n - m1 * m1, v2 = sq_oracle / n - m2 * m2;
  const double se = std::sqrt(v1 / n + v2 / n);
  CHECK(std::fabs(m1 - m2) <= 3.0 * se);
  // tr(Gamma' psi Gamma) = tr(psi), so E[sum lambda] = tr(psi)/2 / (nu-2).
  CHECK(m1 == doctest::Approx(10.1 / 2.0 / 2.0).epsilon(0.02));
}

TEST_CASE("SIR with psi = cI: uniform weights and agreement with the exact sampler") {
  const int dim = 4;
  const double nu = 4.0;
  const double c = 1.0;
  const long long m = 2000, n = 10000;
  const SIWParams params(nu, SquareMatrix::scaled_identity(dim, c));
  RandomStream rng(20);
  SirResult sir = sample_siw_sir(params, m, n, rng);

  for (double p : sir.weights.probabilities)
    CHECK(std::fabs(p - 1.0 / static_cast<double>(m)) <= 1e-12);
  CHECK(sir.ess_percent == doctest::Approx(100.0).epsilon(1e-9));

  RandomStream rng_exact(21);
  SampleBatch exact = sample_siw_identity(nu, c, dim, n, rng_exact);

  for (int p : {1, -1}) {
    SquareMatrix ma = moment_estimator(sir.batch, p);
    SquareMatrix mb = moment_estimator(exact, p);
    const double scale = p == 1 ? 0.25 : 6.0;
    // Combined Monte Carlo spread at these sizes, ~4 sigma.
    CHECK(max_abs_diff(ma, mb) < 0.08 * scale);
  }
}

TEST_CASE("clip rank 1 leaves the whole pipeline unchanged") {
  const SIWParams params(6.0, psi_with_spectrum({2.0, 0.7, 0.2}, 22));
  RandomStream rng(23);
  SirResult plain = sample_siw_sir(params, 300, 900, rng);
  SirResult clipped = sample_siw_sir_clipped(params, 300, 1, 900, rng);
  CHECK(plain.batch.indices == clipped.batch.indices);
  CHECK(plain.weights.probabilities == clipped.weights.probabilities);
  CHECK(plain.ess_value == clipped.ess_value);
  CHECK(clipped.weights.clipped);
  CHECK(clipped.batch.provenance.algorithm == "siw-sir-clipped");
}

TEST_CASE("clip exponent rank helper") {
  CHECK(clip_rank_from_exponent(2500, 0.2) == 5);
  CHECK(clip_rank_from_exponent(2500, 0.8) == 521);
  CHECK(clip_rank_from_exponent(100, 1.0) == 100);
  CHECK_THROWS_AS(clip_rank_from_exponent(100, 0.0), ParameterError);
  CHECK_THROWS_AS(clip_rank_from_exponent(100, 1.5), ParameterError);
}

TEST_CASE("weights-only path reproduces the full pipeline's weights bitwise") {
  const SIWParams params(5.0, psi_with_spectrum({1.5, 0.8, 0.1}, 24));
  RandomStream rng(25);
  SirResult full = sample_siw_sir(params, 200, 200, rng);
  auto lw = proposal_log_weights(params, 200, rng);
  CHECK(lw == full.weights.log_weights);
}

TEST_CASE("summary path equals the batch path") {
  const SIWParams params(5.0, psi_with_spectrum({1.5, 0.8, 0.1}, 26));
  RandomStream rng(27);
  const long long m = 400, n = 1200;

  SirResult full = sample_siw_sir(params, m, n, rng);
  SirRunSummary summary = sir_run_summary(params, m, 0, n, rng);

  CHECK(summary.ess_value == full.ess_value);
  SquareMatrix batch_mean = moment_estimator(full.batch, 1);
  CHECK(max_abs_diff(summary.mean_sigma, batch_mean) <= 1e-13);

  // With the scalar kernels both paths accumulate identically.
  const auto original = kernels::active_backend();
  kernels::force_backend(kernels::Backend::scalar);
  SirResult full_s = sample_siw_sir(params, m, n, rng);
  SirRunSummary summary_s = sir_run_summary(params, m, 0, n, rng);
  CHECK(max_abs_diff(moment_estimator(full_s.batch, 1), summary_s.mean_sigma) == 0.0);
  kernels::force_backend(original);
}

TEST_CASE("thread count does not change SIR output") {
  const SIWParams params(5.0, psi_with_spectrum({2.0, 1.0, 0.4, 0.2}, 28));
  RandomStream rng(29);
  SirResult one = sample_siw_sir(params, 500, 1000, rng, 1);
  SirResult four = sample_siw_sir(params, 500, 1000, rng, 4);
  CHECK(one.weights.log_weights == four.weights.log_weights);
  CHECK(one.batch.indices == four.batch.indices);
  for (std::size_t i = 0; i < one.batch.pool.size(); ++i)
    CHECK(one.batch.pool[i].lambdas == four.batch.pool[i].lambdas);
}

TEST_CASE("parameter errors propagate") {
  const SIWParams params(5.0, SquareMatrix::identity(3));
  RandomStream rng(30);
  CHECK_THROWS_AS(sample_siw_sir(params, 0, 10, rng), ParameterError);
  CHECK_THROWS_AS(sample_siw_sir(params, 10, 0, rng), ParameterError);
  CHECK_THROWS_AS(sample_siw_sir_clipped(params, 10, 0, 10, rng), ParameterError);
  CHECK_THROWS_AS(sample_siw_sir_clipped(params, 10, 11, 10, rng), ParameterError);
}
